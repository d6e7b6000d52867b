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

#include "starnf/numerics.hpp"
#include "starnf/random.hpp"

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace starnf
{

using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;

class GeometryError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Which side of the surface a user is served from.
enum class Side
{
    transmit = 0,
    reflect = 1
};

inline constexpr std::size_t side_index(Side s) { return static_cast<std::size_t>(s); }
const char *to_string(Side s);

/// Sites and arrays of one deployment.
///
/// The surface lies in the YZ-plane with its reference (first) element at `ris_reference`; elements are
/// numbered row by row from the bottom, `ris_ny` per row. Users lie in the XY-plane with their ULA parallel
/// to the y-axis starting at the user position. Users with x > 0 are on the transmission side.
struct ScenarioGeometry
{
    Vec3 bs_position{0.0, 0.0, 0.0};
    Vec3 ris_reference{0.0, 50.0, 0.0};
    std::size_t ris_ny = 5;
    std::size_t ris_nz = 8;
    double ris_spacing = 0.03;
    std::vector<Vec3> user_positions;
    std::size_t user_antennas = 4;
    double user_spacing = 0.015;
    double wavelength = 0.03;

    std::size_t elements() const { return ris_ny * ris_nz; }
    std::size_t users() const { return user_positions.size(); }
    Vec3 ris_center() const;
    Vec3 user_center(std::size_t k) const;

    /// Throws GeometryError on non-positive spacings/wavelength, an empty grid or a user on the surface plane.
    void validate() const;
};

/// Scatterer angles of the BS-to-surface link.
struct FarFieldPathSet
{
    std::vector<double> bs_aod;
    std::vector<double> ris_azimuth;
    std::vector<double> ris_elevation;
    double pathloss = 1.0;

    std::size_t size() const { return bs_aod.size(); }
    void validate() const;
};

struct ChannelSet
{
    CMatrix g;              // N x M_b
    std::vector<CMatrix> h; // per user, M x N
    std::vector<Side> sides;

    std::size_t users() const { return h.size(); }
    std::size_t elements() const { return static_cast<std::size_t>(g.rows()); }
    std::size_t bs_antennas() const { return static_cast<std::size_t>(g.cols()); }
    std::size_t user_antennas() const { return h.empty() ? 0 : static_cast<std::size_t>(h.front().rows()); }
};

double db_to_linear(double db);
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Position of element `n` (zero-based, n < N).
Vec3 element_position(std::size_t n, const ScenarioGeometry &geom);

/// Position of antenna `m` (zero-based) of user `k`.
Vec3 user_antenna_position(std::size_t k, std::size_t m, const ScenarioGeometry &geom);

/// T-side for x > 0, R-side for x < 0; x == 0 is rejected.
Side side_of(const Vec3 &user_position);
std::vector<Side> assign_sides(const ScenarioGeometry &geom);

/// Spherical-wave line-of-sight channel from every element to every antenna of user `k` (M x N).
CMatrix build_nearfield_channel(const ScenarioGeometry &geom, std::size_t k);

/// Unit-norm ULA response, entry m = exp(j 2 pi s m sin(angle)) / sqrt(M) for spacing s in wavelengths.
CVector ula_steering(std::size_t antennas, double angle, double spacing_wavelengths = 0.5);

/// Unit-norm UPA response of the surface, entry n = exp(j 2 pi s (i_y sin(el) sin(az) + i_z cos(el))) / sqrt(N).
CVector upa_steering(std::size_t ny, std::size_t nz, double azimuth, double elevation, double spacing_wavelengths);

/// One rank-one term sqrt(beta M_b N / L) e_STAR e_BS^H of the geometric channel.
CMatrix farfield_path_term(const ScenarioGeometry &geom, const FarFieldPathSet &paths, std::size_t l,
                           std::size_t bs_antennas);

/// Geometric multipath BS-to-surface channel (N x M_b).
CMatrix build_farfield_channel(const ScenarioGeometry &geom, const FarFieldPathSet &paths, std::size_t bs_antennas);

/// Planar-wave rank-one model of the surface-to-user link, path gain taken at the array-center distance.
CMatrix build_farfield_user_channel(const ScenarioGeometry &geom, std::size_t k);

/// Angles uniform on [-pi/2, pi/2) for AoD/azimuth and [0, pi) for elevation.
FarFieldPathSet draw_farfield_paths(std::size_t count, double pathloss, Rng &rng);

/// beta = C0 (d / D0)^(-alpha) with C0 given in dB.
double pathloss(double distance, double c0_db, double d0, double exponent);

/// 2 D^2 / lambda for the aperture diagonal D of the surface.
double rayleigh_distance(const ScenarioGeometry &geom);

ChannelSet build_channels(const ScenarioGeometry &geom, const FarFieldPathSet &paths, std::size_t bs_antennas);

} // namespace starnf
