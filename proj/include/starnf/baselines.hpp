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

#pragma once

#include "starnf/bcd.hpp"

#include <string>

namespace starnf
{

enum class BaselineKind
{
    proposed,
    conventional_ris,
    uniform_es,
    farfield_bf
};

const char *to_string(BaselineKind kind);
BaselineKind parse_baseline_kind(const std::string &name);

/// Splits the surface into a reflect-only half (the first N/2 elements, bottom rows) and a transmit-only half.
/// Phases are kept. Throws std::invalid_argument for odd N.
TrcState conventional_ris_constraint(const TrcState &trc);

/// Equal amplitude split 1/2 on every element, phases kept.
TrcState uniform_es_constraint(const TrcState &trc);

/// Copy of `scenario` whose surface-to-user links are replaced by their planar-wave models.
Scenario farfield_surrogate(const Scenario &scenario);

struct SchemeResult
{
    BcdResult bcd;
    double weighted_sum_rate = 0.0; // on the true channels
    double trc_violation = 0.0;
};

/// Designs on the far-field surrogate and scores the design on the true links of `scenario`.
SchemeResult farfield_bf_design(const BcdConfig &config, const Scenario &scenario, const TrcState &initial_trc);

/// Runs one scheme from the given initial coefficients. The constrained schemes optimize phases only.
SchemeResult run_scheme(BaselineKind kind, const BcdConfig &config, const Scenario &scenario,
                        const TrcState &initial_trc);

} // namespace starnf
