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

#include "oracles.hpp"
#include "support.hpp"

#include "starnf/trc_ele.hpp"
#include "starnf/trc_pen.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace starnf;
using Catch::Approx;

namespace
{

TrcQuadraticForm random_forms(std::mt19937_64 &rng, Eigen::Index n, Eigen::Index rank)
{
    TrcQuadraticForm f;
    for (int i = 0; i < 2; ++i)
    {
        f.f[i] = test::random_psd(rng, n, rank);
        f.e[i] = test::random_vector(rng, n, 2.0);
    }
    return f;
}

double lifted_objective(const std::array<CMatrix, 2> &fbar, const std::array<CMatrix, 2> &v)
{
    return (fbar[0] * v[0]).trace().real() + (fbar[1] * v[1]).trace().real();
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

TEST_CASE("lifted cost matrices", "[trc_pen]")
{
    std::mt19937_64 rng(51);
    TrcQuadraticForm f = random_forms(rng, 5, 3);
    f.e[1].setZero();
    const auto fbar = build_fbar(f);
    CHECK(fbar[1].col(5).norm() == 0.0);
    CHECK(fbar[1].row(5).norm() == 0.0);

    const TrcState s = test::random_trc(rng, 5);
    const AugmentedLift lift = lift_trc(s);
    for (int i = 0; i < 2; ++i)
    {
        const Side side = i == 0 ? Side::transmit : Side::reflect;
        CHECK(std::abs(lift.v[i](5, 5) - 1.0) < 1e-15);
        CHECK(relative_rank_gap(lift.v[i]) < 1e-12);
        const double direct = trc_side_objective(f, side, s.coefficients(side));
        CHECK((fbar[i] * lift.v[i]).trace().real() == Approx(direct).epsilon(1e-10));
        for (int n = 0; n < 5; ++n)
            CHECK(lift.rho[i](n) == Approx(s.amplitudes(side)(n)));
    }

    // N = 1 by hand: tr(V Fbar) = F |v|^2 - 2 Re(e v) for V = [v; 1][v; 1]^H.
    TrcQuadraticForm one;
    for (int i = 0; i < 2; ++i)
    {
        one.f[i] = CMatrix::Constant(1, 1, 1.5 + i);
        one.e[i] = CVector::Constant(1, cplx(0.3, -0.7 * (i + 1)));
    }
    const auto b1 = build_fbar(one);
    const cplx v(0.4, 0.2);
    CVector bar(2);
    bar << v, 1.0;
    const double expand = 1.5 * std::norm(v) - 2.0 * (one.e[0](0) * v).real();
    CHECK((b1[0] * bar * bar.adjoint()).trace().real() == Approx(expand).epsilon(1e-14));
    CHECK(std::abs(b1[0](0, 1) + std::conj(one.e[0](0))) < 1e-15);
    CHECK(std::abs(b1[0](1, 0) + one.e[0](0)) < 1e-15);
}

TEST_CASE("rank gap and the linearized bound", "[trc_pen]")
{
    std::mt19937_64 rng(52);
    const CMatrix r1 = test::random_psd(rng, 6, 1);
    CHECK(rank_gap(r1) <= 1e-12 * r1.norm());
    CHECK(sca_upper_bound(r1, r1).value == Approx(0.0).margin(1e-10 * r1.norm()));

    for (int t = 0; t < 200; ++t)
    {
        const CMatrix v = test::random_psd(rng, 6, 1 + t % 6);
        const CMatrix p = test::random_psd(rng, 6, 1 + (t / 6) % 6);
        CHECK(rank_gap(v) >= 0.0);
        CHECK(sca_upper_bound(p, p).value == Approx(rank_gap(p)).epsilon(1e-10));
        CHECK(sca_upper_bound(v, p).value >= rank_gap(v) - 1e-9 * std::max(1.0, v.norm()));
    }
}

TEST_CASE("projections of the operator-splitting solver", "[trc_pen]")
{
    std::mt19937_64 rng(53);
    const CMatrix h = test::random_hermitian(rng, 6);
    const CMatrix p = project_psd(h);
    const HermitianEig e = hermitian_eig(h);
    CHECK(hermitian_eig(p, Symmetrize::yes).eigenvalues.minCoeff() >= -1e-12);
    CHECK((h - p).norm() == Approx(e.eigenvalues.cwiseMin(0.0).norm()).epsilon(1e-10));
    CHECK((project_psd(p) - p).norm() < 1e-12);

    std::array<CMatrix, 2> m{test::random_hermitian(rng, 5), test::random_hermitian(rng, 5)};
    const std::array<CMatrix, 2> before = m;
    project_coupled_affine(m);
    CHECK(coupled_constraint_violation(m) < 1e-14);
    for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b)
                if (a != b)
                    CHECK(m[i](a, b) == before[i](a, b));
    // Orthogonality: the projection moves the diagonal pair by the symmetric split of the residual.
    for (int n = 0; n < 4; ++n)
    {
        const double rt = before[0](n, n).real(), rr = before[1](n, n).real();
        CHECK(m[0](n, n).real() == Approx(rt + 0.5 * (1.0 - rt - rr)));
        CHECK(m[1](n, n).real() == Approx(rr + 0.5 * (1.0 - rt - rr)));
    }
}

TEST_CASE("one-element SDP matches a grid over the feasible set", "[trc_pen]")
{
    std::mt19937_64 rng(54);
    for (int t = 0; t < 5; ++t)
    {
        const TrcQuadraticForm f = random_forms(rng, 1, 1);
        const auto fbar = build_fbar(f);
        CoupledSdpState st;
        CoupledSdpSettings settings;
        settings.tol = 1e-9;
        settings.max_iterations = 100000;
        const CoupledSdpResult res = solve_coupled_sdp(fbar, st, settings);
        const double at = f.f[0](0, 0).real(), ar = f.f[1](0, 0).real();
        const double bt = std::abs(f.e[0](0)), br = std::abs(f.e[1](0));
        const double grid = oracle::grid_minimize(
            [&](double x) { return at * x + ar * (1.0 - x) - 2.0 * std::sqrt(x) * bt - 2.0 * std::sqrt(1.0 - x) * br; },
            0.0, 1.0, 1e-6);
        const double grid_val =
            at * grid + ar * (1.0 - grid) - 2.0 * std::sqrt(grid) * bt - 2.0 * std::sqrt(1.0 - grid) * br;
        CHECK(std::abs(res.objective - grid_val) <= 1e-4);
        CHECK(res.objective == Approx(lifted_objective(fbar, res.v)).epsilon(1e-12));
    }

    // Pure quadratic pull towards the transmission side.
    TrcQuadraticForm pull;
    pull.f[0] = CMatrix::Constant(1, 1, -1.0);
    pull.f[1] = CMatrix::Zero(1, 1);
    pull.e[0] = pull.e[1] = CVector::Zero(1);
    CoupledSdpState st;
    const CoupledSdpResult r = solve_coupled_sdp(build_fbar(pull), st, CoupledSdpSettings{});
    CHECK(r.objective == Approx(-1.0).epsilon(1e-4));
    CHECK(r.v[0](0, 0).real() == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("zero cost returns a feasible point", "[trc_pen]")
{
    std::array<CMatrix, 2> zero{CMatrix::Zero(4, 4), CMatrix::Zero(4, 4)};
    CoupledSdpState st;
    const CoupledSdpResult r = solve_coupled_sdp(zero, st, CoupledSdpSettings{});
    CHECK(coupled_constraint_violation(r.v) <= 1e-7);
    for (int i = 0; i < 2; ++i)
        CHECK(hermitian_eig(r.v[i], Symmetrize::yes).eigenvalues.minCoeff() >= -1e-7);
}

TEST_CASE("two-element SDP against rank-one enumeration", "[trc_pen]")
{
    std::mt19937_64 rng(55);
    const TrcQuadraticForm f = random_forms(rng, 2, 2);
    CoupledSdpState st;
    CoupledSdpSettings settings;
    settings.max_iterations = 200000;
    const CoupledSdpResult r = solve_coupled_sdp(build_fbar(f), st, settings);
    const double enumerated = oracle::rank_one_enumeration_n2(f.f[0], f.e[0], f.f[1], f.e[1]);
    CHECK(std::abs(r.objective - enumerated) <= 1e-4);
    CHECK(r.objective >= enumerated - 1e-6);
}

TEST_CASE("subproblem keeps the lifted constraints", "[trc_pen]")
{
    std::mt19937_64 rng(56);
    const TrcQuadraticForm f = random_forms(rng, 4, 2);
    const auto fbar = build_fbar(f);
    const AugmentedLift prev = lift_trc(test::random_trc(rng, 4));
    const SdpSubproblemResult s = solve_sdp_subproblem(fbar, 0.1, prev, 1e-7);
    CHECK(s.report.converged);
    CHECK(coupled_constraint_violation(s.lift.v) <= 1e-7);
    for (int i = 0; i < 2; ++i)
    {
        CHECK(std::abs(s.lift.v[i](4, 4) - 1.0) <= 1e-8);
        for (int n = 0; n < 4; ++n)
            CHECK(s.lift.rho[i](n) == Approx(s.lift.v[i](n, n).real()).margin(1e-8));
    }
    // The step cannot be worse than the point it was linearized at.
    CHECK(penalized_objective(fbar, s.lift, 0.1) <= penalized_objective(fbar, prev, 0.1) + 1e-6);
}

TEST_CASE("extraction inverts the lift", "[trc_pen]")
{
    std::mt19937_64 rng(57);
    const TrcState s = test::random_trc(rng, 6);
    const TrcState back = extract_trc(lift_trc(s), TrcState::uniform(6));
    CHECK((back.amp_t - s.amp_t).norm() < 1e-10);
    CHECK(back.coupling_violation() <= 1e-15);
    for (int n = 0; n < 6; ++n)
    {
        CHECK(std::abs(std::polar(1.0, back.phase_t(n)) - std::polar(1.0, s.phase_t(n))) < 1e-8);
        CHECK(std::abs(std::polar(1.0, back.phase_r(n)) - std::polar(1.0, s.phase_r(n))) < 1e-8);
    }
}

TEST_CASE("PEN at a separable optimum stops after one outer loop", "[trc_pen]")
{
    TrcQuadraticForm f;
    RVector dt(4), dr(4);
    dt << 1.0, 3.0, 0.5, 2.0;
    dr << 2.0, 1.0, 4.0, 0.5;
    f.f[0] = dt.cast<cplx>().asDiagonal();
    f.f[1] = dr.cast<cplx>().asDiagonal();
    f.e[0] = f.e[1] = CVector::Zero(4);
    TrcState init = TrcState::uniform(4);
    for (int n = 0; n < 4; ++n)
    {
        init.amp_t(n) = dt(n) < dr(n) ? 1.0 : 0.0;
        init.amp_r(n) = 1.0 - init.amp_t(n);
    }
    const PenResult r = run_pen(f, PenConfig{}, init);
    CHECK(r.converged);
    CHECK(r.outer_iterations == 1);
    CHECK(r.violation <= PenConfig{}.epsilon_p);
    CHECK(trc_objective(f, r.trc) == Approx(trc_objective(f, init)).epsilon(1e-6));
}

TEST_CASE("PEN agrees with ELE on a small model", "[trc_pen]")
{
    std::mt19937_64 rng(58);
    const TrcQuadraticForm f = random_forms(rng, 4, 4);
    const TrcState init = TrcState::uniform(4);
    const PenResult pen = run_pen(f, PenConfig{}, init);
    EleConfig cfg;
    cfg.sweeps = 200;
    const double ele = trc_objective(f, run_ele(f, init, cfg));
    CHECK(pen.converged);
    CHECK(std::abs(trc_objective(f, pen.trc) - ele) <= 0.02 * std::abs(ele));
}

TEST_CASE("PEN histories", "[trc_pen]")
{
    std::mt19937_64 rng(59);
    std::vector<std::vector<double>> runs;
    for (int t = 0; t < 20; ++t)
    {
        const TrcQuadraticForm f = random_forms(rng, 4, 2);
        const PenResult r = run_pen(f, PenConfig{}, test::random_trc(rng, 4));
        runs.push_back(r.violation_history);
        CHECK(r.trc.coupling_violation() <= 1e-15);
        // Inner SCA values are non-increasing while the penalty is fixed.
        for (std::size_t j = 1; j < r.penalized_history.size(); ++j)
            if (r.outer_of_inner[j] == r.outer_of_inner[j - 1])
                CHECK(r.penalized_history[j] <=
                      r.penalized_history[j - 1] + 1e-5 * std::max(1.0, std::abs(r.penalized_history[j - 1])));
    }
    double prev = INFINITY;
    for (std::size_t j = 0;; ++j)
    {
        std::vector<double> col;
        for (const auto &h : runs)
            col.push_back(j < h.size() ? h[j] : h.back());
        if (std::all_of(runs.begin(), runs.end(), [&](const auto &h) { return j >= h.size(); }))
            break;
        const double m = median(col);
        CHECK(m <= prev);
        prev = m;
    }
}

TEST_CASE("PEN configuration checks", "[trc_pen]")
{
    PenConfig c;
    CHECK_NOTHROW(c.validate());
    c.omega = 1.0;
    CHECK_THROWS(c.validate());
    c = PenConfig{};
    c.epsilon_p = 0.0;
    CHECK_THROWS(c.validate());
}
