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

#include "starnf/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace starnf
{

const char *to_string(Side s)
{
    return s == Side::transmit ? "T" : "R";
}

Vec3 ScenarioGeometry::ris_center() const
{
    return ris_reference + Vec3(0.0, 0.5 * double(ris_ny - 1) * ris_spacing, 0.5 * double(ris_nz - 1) * ris_spacing);
}

Vec3 ScenarioGeometry::user_center(std::size_t k) const
{
    return user_positions.at(k) + Vec3(0.0, 0.5 * double(user_antennas - 1) * user_spacing, 0.0);
}

void ScenarioGeometry::validate() const
{
    if (!(ris_spacing > 0.0) || !(user_spacing > 0.0) || !(wavelength > 0.0))
        throw GeometryError("geometry: spacings and wavelength must be positive");
    if (ris_ny == 0 || ris_nz == 0)
        throw GeometryError("geometry: surface grid must have at least one element");
    if (user_antennas == 0)
        throw GeometryError("geometry: users need at least one antenna");
    for (const Vec3 &u : user_positions)
    {
        if (!u.allFinite())
            throw GeometryError("geometry: user position is not finite");
        (void)side_of(u);
    }
}

void FarFieldPathSet::validate() const
{
    if (bs_aod.empty())
        throw GeometryError("far-field paths: at least one path is required");
    if (ris_azimuth.size() != bs_aod.size() || ris_elevation.size() != bs_aod.size())
        throw GeometryError("far-field paths: angle lists differ in length");
    if (!(pathloss > 0.0) || !std::isfinite(pathloss))
        throw GeometryError("far-field paths: path loss must be positive");
    for (std::size_t l = 0; l < bs_aod.size(); ++l)
        if (!std::isfinite(bs_aod[l]) || !std::isfinite(ris_azimuth[l]) || !std::isfinite(ris_elevation[l]))
            throw GeometryError("far-field paths: non-finite angle");
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watt_to_dbm(double watt)
{
    return 10.0 * std::log10(watt) + 30.0;
}

Vec3 element_position(std::size_t n, const ScenarioGeometry &geom)
{
    if (n >= geom.elements())
        throw GeometryError("element_position: element index out of range");
    const double iy = double(n % geom.ris_ny);
    const double iz = double(n / geom.ris_ny);
    return geom.ris_reference + Vec3(0.0, iy * geom.ris_spacing, iz * geom.ris_spacing);
}

Vec3 user_antenna_position(std::size_t k, std::size_t m, const ScenarioGeometry &geom)
{
    if (k >= geom.users() || m >= geom.user_antennas)
        throw GeometryError("user_antenna_position: index out of range");
    return geom.user_positions[k] + Vec3(0.0, double(m) * geom.user_spacing, 0.0);
}

Side side_of(const Vec3 &user_position)
{
    if (user_position.x() > 0.0)
        return Side::transmit;
    if (user_position.x() < 0.0)
        return Side::reflect;
    throw GeometryError("user lies in the surface plane (x = 0); side is undefined");
}

std::vector<Side> assign_sides(const ScenarioGeometry &geom)
{
    std::vector<Side> sides;
    sides.reserve(geom.users());
    for (const Vec3 &u : geom.user_positions)
        sides.push_back(side_of(u));
    return sides;
}

CMatrix build_nearfield_channel(const ScenarioGeometry &geom, std::size_t k)
{
    const std::size_t n_el = geom.elements();
    const std::size_t m_ant = geom.user_antennas;
    const double wavenumber = 2.0 * pi / geom.wavelength;
    CMatrix h(m_ant, n_el);
    for (std::size_t n = 0; n < n_el; ++n)
    {
        const Vec3 p = element_position(n, geom);
        for (std::size_t m = 0; m < m_ant; ++m)
        {
            const double d = (user_antenna_position(k, m, geom) - p).norm();
            if (!(d > 0.0))
                throw GeometryError("build_nearfield_channel: user antenna coincides with a surface element");
            h(m, n) = std::polar(geom.wavelength / (4.0 * pi * d), -wavenumber * d);
        }
    }
    return h;
}

CVector ula_steering(std::size_t antennas, double angle, double spacing_wavelengths)
{
    CVector a(antennas);
    const double scale = 1.0 / std::sqrt(double(antennas));
    const double step = 2.0 * pi * spacing_wavelengths * std::sin(angle);
    for (std::size_t m = 0; m < antennas; ++m)
        a(m) = std::polar(scale, step * double(m));
    return a;
}

CVector upa_steering(std::size_t ny, std::size_t nz, double azimuth, double elevation, double spacing_wavelengths)
{
    const std::size_t n_el = ny * nz;
    CVector a(n_el);
    const double scale = 1.0 / std::sqrt(double(n_el));
    const double ky = 2.0 * pi * spacing_wavelengths * std::sin(elevation) * std::sin(azimuth);
    const double kz = 2.0 * pi * spacing_wavelengths * std::cos(elevation);
    for (std::size_t n = 0; n < n_el; ++n)
    {
        const double iy = double(n % ny);
        const double iz = double(n / ny);
        a(n) = std::polar(scale, iy * ky + iz * kz);
    }
    return a;
}

CMatrix farfield_path_term(const ScenarioGeometry &geom, const FarFieldPathSet &paths, std::size_t l,
                           std::size_t bs_antennas)
{
    const double n_el = double(geom.elements());
    const double amp = std::sqrt(paths.pathloss * double(bs_antennas) * n_el / double(paths.size()));
    const CVector e_star = upa_steering(geom.ris_ny, geom.ris_nz, paths.ris_azimuth[l], paths.ris_elevation[l],
                                        geom.ris_spacing / geom.wavelength);
    const CVector e_bs = ula_steering(bs_antennas, paths.bs_aod[l]);
    return amp * e_star * e_bs.adjoint();
}

CMatrix build_farfield_channel(const ScenarioGeometry &geom, const FarFieldPathSet &paths, std::size_t bs_antennas)
{
    paths.validate();
    CMatrix g = CMatrix::Zero(geom.elements(), bs_antennas);
    for (std::size_t l = 0; l < paths.size(); ++l)
        g += farfield_path_term(geom, paths, l, bs_antennas);
    return g;
}

CMatrix build_farfield_user_channel(const ScenarioGeometry &geom, std::size_t k)
{
    const Vec3 c_ris = geom.ris_center();
    const Vec3 c_user = geom.user_center(k);
    const Vec3 diff = c_user - c_ris;
    const double d = diff.norm();
    if (!(d > 0.0))
        throw GeometryError("build_farfield_user_channel: user coincides with the surface center");
    const Vec3 dir = diff / d;

    // Direction towards the user seen from the surface, and towards the surface seen from the user's ULA.
    const double azimuth = std::atan2(dir.y(), dir.x());
    const double elevation = std::acos(std::clamp(dir.z(), -1.0, 1.0));
    const double user_angle = std::asin(std::clamp(-dir.y(), -1.0, 1.0));

    const std::size_t n_el = geom.elements();
    const std::size_t m_ant = geom.user_antennas;
    const CVector e_star = upa_steering(geom.ris_ny, geom.ris_nz, azimuth, elevation, geom.ris_spacing / geom.wavelength);
    const CVector e_user = ula_steering(m_ant, user_angle, geom.user_spacing / geom.wavelength);

    const double wavenumber = 2.0 * pi / geom.wavelength;
    const Vec3 p0 = element_position(0, geom);
    const Vec3 u0 = geom.user_positions[k];
    const double ref_path = d + dir.dot(u0 - c_user) - dir.dot(p0 - c_ris);
    const cplx gain = std::polar(geom.wavelength / (4.0 * pi * d), -wavenumber * ref_path) *
                      std::sqrt(double(m_ant) * double(n_el));
    return gain * e_user * e_star.transpose();
}

FarFieldPathSet draw_farfield_paths(std::size_t count, double pathloss_gain, Rng &rng)
{
    FarFieldPathSet paths;
    paths.pathloss = pathloss_gain;
    for (std::size_t l = 0; l < count; ++l)
    {
        paths.bs_aod.push_back(uniform(rng, -0.5 * pi, 0.5 * pi));
        paths.ris_azimuth.push_back(uniform(rng, -0.5 * pi, 0.5 * pi));
        paths.ris_elevation.push_back(uniform(rng, 0.0, pi));
    }
    paths.validate();
    return paths;
}

double pathloss(double distance, double c0_db, double d0, double exponent)
{
    if (!(distance > 0.0) || !(d0 > 0.0))
        throw GeometryError("pathloss: distances must be positive");
    return db_to_linear(c0_db) * std::pow(distance / d0, -exponent);
}

double rayleigh_distance(const ScenarioGeometry &geom)
{
    const double wy = double(geom.ris_ny - 1) * geom.ris_spacing;
    const double wz = double(geom.ris_nz - 1) * geom.ris_spacing;
    return 2.0 * (wy * wy + wz * wz) / geom.wavelength;
}

ChannelSet build_channels(const ScenarioGeometry &geom, const FarFieldPathSet &paths, std::size_t bs_antennas)
{
    geom.validate();
    ChannelSet ch;
    ch.g = build_farfield_channel(geom, paths, bs_antennas);
    ch.sides = assign_sides(geom);
    for (std::size_t k = 0; k < geom.users(); ++k)
        ch.h.push_back(build_nearfield_channel(geom, k));
    return ch;
}

} // namespace starnf
