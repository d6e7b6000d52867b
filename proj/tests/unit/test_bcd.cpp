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

#include "starnf/bcd.hpp"
#include "starnf/harness.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace starnf;
using Catch::Approx;

namespace
{

Scenario small_scenario(std::uint64_t seed, std::size_t ny = 4, std::size_t nz = 4)
{
    SystemConfig cfg;
    cfg.bs_antennas = 8;
    cfg.user_antennas = 2;
    return generate_scenario(cfg, RisGrid{ny, nz}, UserSetup::random, seed, 30.0);
}

struct Blocks
{
    std::vector<CMatrix> heff;
    BeamformerSet ws;
    WmmseState st;
};

Blocks wmmse_blocks(const Scenario &sc, const TrcState &trc)
{
    Blocks b;
    b.heff = effective_channels(sc.channels, trc);
    b.ws = matched_filter_init(b.heff, sc.power_budget);
    b.st.u = update_combiners(b.heff, b.ws, sc.noise_power);
    for (std::size_t k = 0; k < b.heff.size(); ++k)
        b.st.e.push_back(mse_matrix(k, b.heff, b.ws, b.st.u[k], sc.noise_power));
    b.st.z = update_weights(b.st.e);
    return b;
}

} // namespace

TEST_CASE("combiner update", "[bcd]")
{
    std::mt19937_64 rng(61);
    const std::vector<CMatrix> heff{test::random_matrix(rng, 2, 4), test::random_matrix(rng, 2, 4)};
    BeamformerSet zero;
    zero.w = {CMatrix::Zero(4, 2), CMatrix::Zero(4, 2)};
    for (const CMatrix &u : update_combiners(heff, zero, 0.1))
        CHECK(u.norm() == 0.0);

    const std::vector<CMatrix> h1{CMatrix::Constant(1, 1, cplx(0.6, 0.3))};
    BeamformerSet w1;
    w1.w = {CMatrix::Constant(1, 1, cplx(-1.0, 2.0))};
    const cplx hw = h1[0](0, 0) * w1.w[0](0, 0);
    CHECK(std::abs(update_combiners(h1, w1, 0.2)[0](0, 0) - hw / (std::norm(hw) + 0.2)) < 1e-14);

    // Local optimality probe with the weights held fixed.
    const Scenario sc = small_scenario(3);
    const Blocks b = wmmse_blocks(sc, random_phase_init(16, 5));
    const double base = surrogate_objective(b.heff, b.ws, b.st, sc.noise_power, sc.weights);
    for (int t = 0; t < 100; ++t)
    {
        WmmseState p = b.st;
        CMatrix d = test::random_matrix(rng, 2, 2);
        d *= 1e-3 * p.u[std::size_t(t % 4)].norm() / d.norm();
        p.u[std::size_t(t % 4)] += d;
        CHECK(surrogate_objective(b.heff, b.ws, p, sc.noise_power, sc.weights) <= base + 1e-12 * std::abs(base));
    }
}

TEST_CASE("weight update", "[bcd]")
{
    CHECK((update_weights(std::vector<CMatrix>{CMatrix::Identity(3, 3)})[0] - CMatrix::Identity(3, 3)).norm() <
          1e-15);
    CMatrix e = CMatrix::Zero(2, 2);
    e(0, 0) = 0.5;
    e(1, 1) = 0.25;
    const CMatrix z = update_weights(std::vector<CMatrix>{e})[0];
    CHECK(z(0, 0).real() == Approx(2.0));
    CHECK(z(1, 1).real() == Approx(4.0));

    std::mt19937_64 rng(62);
    for (int t = 0; t < 10; ++t)
    {
        const CMatrix p = test::random_hpd(rng, 4);
        const CMatrix zp = update_weights(std::vector<CMatrix>{p})[0];
        CHECK((zp * p - CMatrix::Identity(4, 4)).norm() <= 1e-9);
    }
    // Singular input is regularized instead of failing.
    CMatrix sing = CMatrix::Zero(2, 2);
    sing(0, 0) = 1.0;
    const CMatrix zs = update_weights(std::vector<CMatrix>{sing})[0];
    CHECK(zs.allFinite());
    CHECK(hermitian_eig(zs, Symmetrize::yes).eigenvalues.minCoeff() > 0.0);
}

TEST_CASE("beamformer update closed cases", "[bcd]")
{
    std::mt19937_64 rng(63);
    const CMatrix a = test::random_hpd(rng, 4);
    const std::vector<CMatrix> zero_b{CMatrix::Zero(2, 4), CMatrix::Zero(2, 4)};
    const BeamformerUpdate z = update_beamformers(a, zero_b, 1.0, 1e-9);
    CHECK(z.multiplier == 0.0);
    for (const CMatrix &w : z.beamformers.w)
        CHECK(w.norm() == 0.0);

    const CMatrix b = test::random_matrix(rng, 2, 4, 0.1);
    const BeamformerUpdate in = update_beamformers(CMatrix::Identity(4, 4), std::vector<CMatrix>{b}, 10.0, 1e-9);
    CHECK(in.multiplier == 0.0);
    CHECK((in.beamformers.w[0] - b.adjoint()).norm() < 1e-14);

    // Singular A with slack budget: pseudo-solve on the range.
    CMatrix sing = CMatrix::Zero(4, 4);
    sing(0, 0) = 2.0;
    sing(1, 1) = 1.0;
    CMatrix bs = CMatrix::Zero(1, 4);
    bs(0, 0) = 0.5;
    bs(0, 1) = 0.25;
    const BeamformerUpdate ps = update_beamformers(sing, std::vector<CMatrix>{bs}, 10.0, 1e-9);
    CHECK(ps.multiplier == 0.0);
    CHECK(std::abs(ps.beamformers.w[0](0, 0) - 0.25) < 1e-14);
    CHECK(std::abs(ps.beamformers.w[0](1, 0) - 0.25) < 1e-14);
}

TEST_CASE("beamformer update against projected gradient", "[bcd]")
{
    std::mt19937_64 rng(64);
    for (int t = 0; t < 3; ++t)
    {
        const CMatrix a = test::random_psd(rng, 6, 6) + 0.1 * CMatrix::Identity(6, 6);
        const std::vector<CMatrix> b{test::random_matrix(rng, 2, 6), test::random_matrix(rng, 2, 6)};
        const double power = 0.05;
        const BeamformerUpdate up = update_beamformers(a, b, power, 1e-9);
        CHECK(up.multiplier > 0.0);
        CHECK(std::abs(up.beamformers.total_power() - power) <= 1e-6 * power);
        CHECK(up.beamformers.total_power() <= power * (1.0 + 1e-9));
        BeamformerSet ref;
        ref.w = oracle::projected_gradient_beamformers(a, b, power, 20000);
        const double mine = beamformer_objective(a, b, up.beamformers);
        const double theirs = beamformer_objective(a, b, ref);
        CHECK(std::abs(mine - theirs) <= 1e-5 * std::max(1.0, std::abs(theirs)));
        CHECK(mine <= theirs + 1e-9 * std::abs(theirs));
    }
}

TEST_CASE("power map decreases in lambda", "[bcd]")
{
    std::mt19937_64 rng(65);
    const CMatrix a = test::random_psd(rng, 6, 3);
    const std::vector<CMatrix> b{test::random_matrix(rng, 2, 6)};
    const PowerMap p(a, b);
    double prev = p(1e-6);
    for (double lam = 1e-5; lam < 1e3; lam *= 1.7)
    {
        const double v = p(lam);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(p(p.upper_bracket(0.3)) <= 0.3);
}

TEST_CASE("initializations", "[bcd]")
{
    const TrcState a = random_phase_init(20, 9), b = random_phase_init(20, 9), c = random_phase_init(20, 10);
    CHECK((a.phase_t - b.phase_t).norm() == 0.0);
    CHECK((a.phase_t - c.phase_t).norm() > 0.0);
    for (int n = 0; n < 20; ++n)
    {
        CHECK(a.amp_t(n) == 0.5);
        CHECK(a.amp_r(n) == 0.5);
        CHECK(a.phase_t(n) >= 0.0);
        CHECK(a.phase_r(n) < 2.0 * pi);
    }
    const Scenario sc = small_scenario(1);
    const BeamformerSet w = matched_filter_init(effective_channels(sc.channels, random_phase_init(16, 9)),
                                                sc.power_budget);
    CHECK(w.total_power() == Approx(sc.power_budget).epsilon(1e-12));
}

TEST_CASE("zero iterations return the initialization", "[bcd]")
{
    const Scenario sc = small_scenario(2);
    BcdConfig cfg;
    cfg.max_iterations = 0;
    const TrcState init = random_phase_init(16, 4);
    const BcdResult r = run_bcd(cfg, sc, init);
    CHECK(r.trace.iterations.empty());
    CHECK((r.trc.phase_t - init.phase_t).norm() == 0.0);
    CHECK((r.trc.amp_t - init.amp_t).norm() == 0.0);
    const BeamformerSet mf = matched_filter_init(effective_channels(sc.channels, init), sc.power_budget);
    for (std::size_t k = 0; k < mf.w.size(); ++k)
        CHECK((r.beamformers.w[k] - mf.w[k]).norm() == 0.0);
    CHECK(r.trace.initial_objective ==
          Approx(r.trace.initial_weighted_sum_rate / nats_to_bits).epsilon(1e-10));
}

TEST_CASE("BCD traces are monotone for every TRC solver", "[bcd]")
{
    for (TrcSolver solver : {TrcSolver::fixed, TrcSolver::ele, TrcSolver::pen})
    {
        const Scenario sc = small_scenario(7);
        BcdConfig cfg;
        cfg.trc_solver = solver;
        cfg.max_iterations = solver == TrcSolver::pen ? 15 : 200;
        const BcdResult r = run_bcd(cfg, sc, random_phase_init(16, 8));
        INFO(to_string(solver));
        CHECK(r.trace.min_relative_block_change() >= -1e-6);
        CHECK(!r.trace.iterations.empty());
        double prev = r.trace.initial_objective;
        for (const IterationRecord &it : r.trace.iterations)
        {
            CHECK(it.objective_before == Approx(prev).epsilon(1e-12));
            for (double v : it.block_objective)
                CHECK(v >= prev - 1e-6 * std::abs(prev));
            prev = it.block_objective[3];
            CHECK(it.power <= sc.power_budget * (1.0 + 1e-9));
            CHECK(it.coupling_violation <= 1e-9);
        }
        if (solver == TrcSolver::fixed)
            for (const IterationRecord &it : r.trace.iterations)
                CHECK(it.block_objective[3] == it.block_objective[2]);
        CHECK(r.weighted_sum_rate == Approx(r.trace.iterations.back().weighted_sum_rate));
    }
}

TEST_CASE("convergence test stops the loop", "[bcd]")
{
    const Scenario sc = small_scenario(11);
    BcdConfig cfg;
    cfg.epsilon_bcd = 1e-2;
    const BcdResult loose = run_bcd(cfg, sc, random_phase_init(16, 1));
    cfg.epsilon_bcd = 1e-6;
    const BcdResult tight = run_bcd(cfg, sc, random_phase_init(16, 1));
    CHECK(loose.trace.converged);
    CHECK(loose.trace.iterations.size() < tight.trace.iterations.size());
    const auto &last = loose.trace.iterations.back();
    CHECK((last.block_objective[3] - last.objective_before) / std::abs(last.objective_before) < 1e-2);
}

TEST_CASE("config validation and gating", "[bcd]")
{
    BcdConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.epsilon_bcd = 0.0;
    CHECK_THROWS(cfg.validate());
    CHECK(parse_trc_solver("pen") == TrcSolver::pen);
    CHECK(std::string(to_string(TrcSolver::fixed)) == "fixed");
    CHECK_THROWS(parse_trc_solver("simplex"));

    BcdConfig pen;
    pen.trc_solver = TrcSolver::pen;
    pen.pen.max_elements = 8;
    CHECK_THROWS(run_bcd(pen, small_scenario(1), random_phase_init(16, 1)));
}

TEST_CASE("errors carry the iteration index", "[bcd]")
{
    const BcdError e(7, "boom");
    CHECK(e.iteration() == 7);
    CHECK(std::string(e.what()).find('7') != std::string::npos);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
}
