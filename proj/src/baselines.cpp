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

#include "starnf/baselines.hpp"

#include <stdexcept>

namespace starnf
{

const char *to_string(BaselineKind kind)
{
    switch (kind)
    {
    case BaselineKind::proposed:
        return "proposed";
    case BaselineKind::conventional_ris:
        return "conventional-ris";
    case BaselineKind::uniform_es:
        return "uniform-es";
    case BaselineKind::farfield_bf:
        return "farfield-bf";
    }
    return "?";
}

BaselineKind parse_baseline_kind(const std::string &name)
{
    for (BaselineKind k : {BaselineKind::proposed, BaselineKind::conventional_ris, BaselineKind::uniform_es,
                           BaselineKind::farfield_bf})
        if (name == to_string(k))
            return k;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

TrcState conventional_ris_constraint(const TrcState &trc)
{
    const std::size_t n = trc.size();
    if (n % 2 != 0)
        throw std::invalid_argument("conventional_ris_constraint: the element count must be even");
    TrcState out = trc;
    for (std::size_t i = 0; i < n; ++i)
    {
        const bool reflect = i < n / 2;
        out.amp_t(i) = reflect ? 0.0 : 1.0;
        out.amp_r(i) = reflect ? 1.0 : 0.0;
    }
    return out;
}

TrcState uniform_es_constraint(const TrcState &trc)
{
    TrcState out = trc;
    out.amp_t.setConstant(0.5);
    out.amp_r.setConstant(0.5);
    return out;
}

Scenario farfield_surrogate(const Scenario &scenario)
{
    Scenario out = scenario;
    for (std::size_t k = 0; k < out.channels.h.size(); ++k)
        out.channels.h[k] = build_farfield_user_channel(scenario.geometry, k);
    return out;
}

SchemeResult farfield_bf_design(const BcdConfig &config, const Scenario &scenario, const TrcState &initial_trc)
{
    SchemeResult res;
    res.bcd = run_bcd(config, farfield_surrogate(scenario), initial_trc);
    const std::vector<CMatrix> heff = effective_channels(scenario.channels, res.bcd.trc);
    res.weighted_sum_rate =
        weighted_sum_rate(heff, res.bcd.beamformers, scenario.noise_power, std::span<const double>(scenario.weights));
    res.trc_violation = res.bcd.trc.coupling_violation();
    return res;
}

SchemeResult run_scheme(BaselineKind kind, const BcdConfig &config, const Scenario &scenario,
                        const TrcState &initial_trc)
{
    if (kind == BaselineKind::farfield_bf)
        return farfield_bf_design(config, scenario, initial_trc);

    BcdConfig cfg = config;
    TrcState init = initial_trc;
    if (kind == BaselineKind::conventional_ris || kind == BaselineKind::uniform_es)
    {
        init = kind == BaselineKind::conventional_ris ? conventional_ris_constraint(init) : uniform_es_constraint(init);
        cfg.amplitudes = AmplitudeMode::frozen;
        if (cfg.trc_solver == TrcSolver::pen)
            cfg.trc_solver = TrcSolver::ele;
    }
    SchemeResult res;
    res.bcd = run_bcd(cfg, scenario, init);
    res.weighted_sum_rate = res.bcd.weighted_sum_rate;
    res.trc_violation = res.bcd.trc.coupling_violation();
    return res;
}

} // namespace starnf
