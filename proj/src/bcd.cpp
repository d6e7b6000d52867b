// SPDX-License-Identifier: Apache-2.0
//
// starnf: joint beamforming toolkit for STAR-RIS aided near-field MIMO
// Copyright (C) 2026 The starnf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "starnf/bcd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace starnf
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<CMatrix> mse_matrices(std::span<const CMatrix> heff, const BeamformerSet &ws, const WmmseState &wmmse,
                                  double noise_power)
{
    std::vector<CMatrix> e;
    e.reserve(heff.size());
    for (std::size_t k = 0; k < heff.size(); ++k)
        e.push_back(mse_matrix(k, heff, ws, wmmse.u[k], noise_power));
    return e;
}

} // namespace

const char *to_string(TrcSolver s)
{
    switch (s)
    {
    case TrcSolver::pen:
        return "pen";
    case TrcSolver::ele:
        return "ele";
    case TrcSolver::fixed:
        return "fixed";
    }
    return "?";
}

TrcSolver parse_trc_solver(const std::string &name)
{
    if (name == "pen" || name == "PEN")
        return TrcSolver::pen;
    if (name == "ele" || name == "ELE")
        return TrcSolver::ele;
    if (name == "fixed" || name == "FIXED")
        return TrcSolver::fixed;
    throw std::invalid_argument("unknown TRC solver '" + name + "'");
}

void BcdConfig::validate() const
{
    if (!(epsilon_bcd > 0.0) || !(power_bisection_tol > 0.0))
        throw std::invalid_argument("BcdConfig: tolerances must be positive");
    if (trc_solver == TrcSolver::pen)
        pen.validate();
    if (!(ele.bisection_tol > 0.0) || !(ele.rho_min >= 0.0) || !(ele.rho_min < 0.5))
        throw std::invalid_argument("BcdConfig: invalid element-wise solver settings");
}

BcdError::BcdError(std::size_t iteration, const std::string &what)
    : std::runtime_error("BCD iteration " + std::to_string(iteration) + ": " + what), iteration_(iteration)
{
}

double RunTrace::min_relative_block_change() const
{
    double worst = std::numeric_limits<double>::infinity();
    for (const IterationRecord &rec : iterations)
    {
        double before = rec.objective_before;
        for (double after : rec.block_objective)
        {
            worst = std::min(worst, (after - before) / std::max(std::abs(before), 1e-12));
            before = after;
        }
    }
    return worst;
}

double RunTrace::total_seconds() const
{
    double s = 0.0;
    for (const IterationRecord &rec : iterations)
        s += rec.wall_seconds;
    return s;
}

std::vector<CMatrix> update_combiners(std::span<const CMatrix> heff, const BeamformerSet &ws, double noise_power)
{
    std::vector<CMatrix> u;
    u.reserve(heff.size());
    for (std::size_t k = 0; k < heff.size(); ++k)
    {
        const Eigen::Index m = heff[k].rows();
        CMatrix cov = noise_power * CMatrix::Identity(m, m);
        for (const CMatrix &wl : ws.w)
        {
            const CMatrix t = heff[k] * wl;
            cov.noalias() += t * t.adjoint();
        }
        u.push_back(solve_hpd(hermitian_part(cov), heff[k] * ws.w[k]));
    }
    return u;
}

std::vector<CMatrix> update_weights(std::span<const CMatrix> mse)
{
    std::vector<CMatrix> z;
    z.reserve(mse.size());
    for (const CMatrix &e : mse)
    {
        CMatrix reg = hermitian_part(e);
        const RVector lam = hermitian_eig(reg, Symmetrize::yes).eigenvalues;
        if (lam(lam.size() - 1) < 1e-12 * lam(0))
            reg += (1e-12 * reg.trace().real() / double(reg.rows())) * CMatrix::Identity(reg.rows(), reg.cols());
        z.push_back(inverse_hpd(reg));
    }
    return z;
}

CMatrix beamformer_quadratic(std::span<const CMatrix> heff, const WmmseState &wmmse, std::span<const double> weights)
{
    const Eigen::Index mb = heff[0].cols();
    CMatrix a = CMatrix::Zero(mb, mb);
    for (std::size_t l = 0; l < heff.size(); ++l)
    {
        const CMatrix uh = wmmse.u[l].adjoint() * heff[l]; // M x M_b
        a.noalias() += weights[l] * (uh.adjoint() * wmmse.z[l] * uh);
    }
    return hermitian_part(a);
}

std::vector<CMatrix> beamformer_linear(std::span<const CMatrix> heff, const WmmseState &wmmse,
                                       std::span<const double> weights)
{
    std::vector<CMatrix> b;
    b.reserve(heff.size());
    for (std::size_t k = 0; k < heff.size(); ++k)
        b.push_back(weights[k] * (wmmse.z[k] * wmmse.u[k].adjoint() * heff[k]));
    return b;
}

double beamformer_objective(const CMatrix &a, std::span<const CMatrix> b, const BeamformerSet &ws)
{
    double s = 0.0;
    for (std::size_t k = 0; k < ws.w.size(); ++k)
        s += (ws.w[k].adjoint() * a * ws.w[k]).trace().real() - 2.0 * (b[k] * ws.w[k]).trace().real();
    return s;
}

PowerMap::PowerMap(const CMatrix &a, std::span<const CMatrix> b) : eig_(hermitian_eig(a, Symmetrize::yes))
{
    const Eigen::Index mb = a.rows();
    row_energy_ = RVector::Zero(mb);
    for (const CMatrix &bk : b)
    {
        t_.push_back(eig_.eigenvectors.adjoint() * bk.adjoint());
        row_energy_ += t_.back().rowwise().squaredNorm();
        b_energy_ += bk.squaredNorm();
    }
    const double lmax = std::max(eig_.eigenvalues(0), 0.0);
    null_threshold_ = 1e-12 * lmax;
    double null_energy = 0.0;
    for (Eigen::Index i = 0; i < mb; ++i)
        if (eig_.eigenvalues(i) <= null_threshold_)
            null_energy += row_energy_(i);
    singular_ = null_energy > 1e-16 * b_energy_;
}

double PowerMap::operator()(double lambda) const
{
    double p = 0.0;
    for (Eigen::Index i = 0; i < row_energy_.size(); ++i)
    {
        const double li = std::max(eig_.eigenvalues(i), 0.0);
        if (eig_.eigenvalues(i) <= null_threshold_ && !singular_)
            continue;
        const double denom = li + lambda;
        if (row_energy_(i) == 0.0)
            continue;
        if (!(denom > 0.0))
            return std::numeric_limits<double>::infinity();
        p += row_energy_(i) / (denom * denom);
    }
    return p;
}

BeamformerSet PowerMap::beamformers(double lambda) const
{
    const Eigen::Index mb = row_energy_.size();
    RVector inv(mb);
    for (Eigen::Index i = 0; i < mb; ++i)
    {
        const double li = std::max(eig_.eigenvalues(i), 0.0);
        const bool dropped = eig_.eigenvalues(i) <= null_threshold_ && !singular_;
        inv(i) = (dropped || !(li + lambda > 0.0)) ? 0.0 : 1.0 / (li + lambda);
    }
    BeamformerSet out;
    for (const CMatrix &t : t_)
        out.w.push_back(eig_.eigenvectors * (inv.asDiagonal() * t));
    return out;
}

double PowerMap::upper_bracket(double power) const
{
    return std::sqrt(b_energy_ / power) + std::max(eig_.eigenvalues(0), 0.0);
}

BeamformerUpdate update_beamformers(const CMatrix &a, std::span<const CMatrix> b, double power, double tol)
{
    if (!(power > 0.0))
        throw std::invalid_argument("update_beamformers: power budget must be positive");
    const PowerMap pmap(a, b);
    BeamformerUpdate out;

    double lambda = 0.0;
    if (pmap.singular_at_zero() || pmap(0.0) > power)
    {
        double lo = 0.0;
        double hi = pmap.upper_bracket(power);
        while (hi - lo > tol * hi)
        {
            const double mid = 0.5 * (lo + hi);
            if (pmap(mid) > power)
                lo = mid;
            else
                hi = mid;
        }
        lambda = hi;
    }
    out.multiplier = lambda;
    out.beamformers = pmap.beamformers(lambda);
    out.power = out.beamformers.total_power();
    // The bracket end can overshoot by rounding; restore feasibility exactly.
    if (out.power > power)
    {
        const double s = std::sqrt(power / out.power);
        for (CMatrix &w : out.beamformers.w)
            w *= s;
        out.power = out.beamformers.total_power();
    }
    return out;
}

BeamformerSet matched_filter_init(std::span<const CMatrix> heff, double power)
{
    BeamformerSet ws;
    double total = 0.0;
    for (const CMatrix &h : heff)
    {
        ws.w.push_back(h.adjoint());
        total += h.squaredNorm();
    }
    if (total > 0.0)
    {
        const double s = std::sqrt(power / total);
        for (CMatrix &w : ws.w)
            w *= s;
    }
    return ws;
}

TrcState random_phase_init(std::size_t elements, std::uint64_t seed)
{
    Rng rng(child_seed(seed, {0x696e6974ULL}));
    TrcState trc = TrcState::uniform(elements, 0.5);
    for (std::size_t n = 0; n < elements; ++n)
    {
        trc.phase_t(n) = uniform(rng, 0.0, 2.0 * pi);
        trc.phase_r(n) = uniform(rng, 0.0, 2.0 * pi);
    }
    return trc;
}

BcdResult run_bcd(const BcdConfig &config, const Scenario &scenario)
{
    return run_bcd(config, scenario, random_phase_init(scenario.channels.elements(), config.rng_seed));
}

BcdResult run_bcd(const BcdConfig &config, const Scenario &scenario, const TrcState &initial_trc)
{
    config.validate();
    scenario.validate();
    initial_trc.validate();
    const ChannelSet &ch = scenario.channels;
    if (initial_trc.size() != ch.elements())
        throw std::invalid_argument("run_bcd: initial coefficients do not match the element count");
    if (config.trc_solver == TrcSolver::pen && ch.elements() > config.pen.max_elements)
        throw std::invalid_argument("run_bcd: PEN is limited to " + std::to_string(config.pen.max_elements) +
                                    " elements; use ELE for larger surfaces");

    const double sigma2 = scenario.noise_power;
    const std::span<const double> eta(scenario.weights);

    BcdResult res;
    res.trc = initial_trc;
    std::vector<CMatrix> heff = effective_channels(ch, res.trc);
    res.beamformers = matched_filter_init(heff, scenario.power_budget);
    res.wmmse.u = update_combiners(heff, res.beamformers, sigma2);
    res.wmmse.e = mse_matrices(heff, res.beamformers, res.wmmse, sigma2);
    res.wmmse.z = update_weights(res.wmmse.e);

    double objective = surrogate_objective(heff, res.beamformers, res.wmmse, sigma2, eta);
    res.trace.initial_objective = objective;
    res.trace.initial_weighted_sum_rate = weighted_sum_rate(heff, res.beamformers, sigma2, eta);
    res.weighted_sum_rate = res.trace.initial_weighted_sum_rate;

    CoupledSdpState sdp_state;
    for (std::size_t it = 1; it <= config.max_iterations; ++it)
    {
        IterationRecord rec;
        rec.iteration = it;
        rec.objective_before = objective;
        const auto t_iter = Clock::now();
        try
        {
            auto t0 = Clock::now();
            res.wmmse.u = update_combiners(heff, res.beamformers, sigma2);
            rec.block_objective[0] = surrogate_objective(heff, res.beamformers, res.wmmse, sigma2, eta);
            rec.block_seconds[0] = seconds_since(t0);

            t0 = Clock::now();
            res.wmmse.e = mse_matrices(heff, res.beamformers, res.wmmse, sigma2);
            res.wmmse.z = update_weights(res.wmmse.e);
            rec.block_objective[1] = surrogate_objective(heff, res.beamformers, res.wmmse, sigma2, eta);
            rec.block_seconds[1] = seconds_since(t0);

            t0 = Clock::now();
            const CMatrix a = beamformer_quadratic(heff, res.wmmse, eta);
            const std::vector<CMatrix> b = beamformer_linear(heff, res.wmmse, eta);
            res.beamformers = update_beamformers(a, b, scenario.power_budget, config.power_bisection_tol).beamformers;
            rec.block_objective[2] = surrogate_objective(heff, res.beamformers, res.wmmse, sigma2, eta);
            rec.block_seconds[2] = seconds_since(t0);

            t0 = Clock::now();
            rec.block_objective[3] = rec.block_objective[2];
            if (config.trc_solver != TrcSolver::fixed)
            {
                const TrcQuadraticForm forms = build_trc_forms(ch, res.beamformers, res.wmmse, eta);
                TrcState candidate;
                if (config.trc_solver == TrcSolver::ele)
                    candidate = run_ele(forms, res.trc, config.ele, config.amplitudes);
                else
                {
                    PenResult pen = run_pen(forms, config.pen, res.trc, &sdp_state);
                    rec.rank_violation = pen.violation;
                    candidate = std::move(pen.trc);
                }
                std::vector<CMatrix> heff_c = effective_channels(ch, candidate);
                const double f_c = surrogate_objective(heff_c, res.beamformers, res.wmmse, sigma2, eta);
                // PEN's rank-one extraction can lose optimality; only improving steps are taken.
                const bool accept = config.trc_solver == TrcSolver::ele || f_c >= rec.block_objective[2];
                rec.trc_accepted = accept;
                if (accept)
                {
                    res.trc = std::move(candidate);
                    heff = std::move(heff_c);
                    rec.block_objective[3] = f_c;
                }
            }
            rec.block_seconds[3] = seconds_since(t0);

            rec.weighted_sum_rate = weighted_sum_rate(heff, res.beamformers, sigma2, eta);
        }
        catch (const BcdError &)
        {
            throw;
        }
        catch (const std::exception &e)
        {
            throw BcdError(it, e.what());
        }
        rec.power = res.beamformers.total_power();
        rec.coupling_violation = res.trc.coupling_violation();
        rec.wall_seconds = seconds_since(t_iter);
        res.trace.iterations.push_back(rec);
        res.weighted_sum_rate = rec.weighted_sum_rate;

        const double next = rec.block_objective[3];
        const double increase = (next - objective) / std::max(std::abs(objective), 1e-12);
        objective = next;
        if (increase < config.epsilon_bcd)
        {
            res.trace.converged = true;
            break;
        }
    }
    return res;
}

} // namespace starnf
