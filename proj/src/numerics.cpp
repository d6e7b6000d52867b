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

#include "starnf/numerics.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace starnf
{

namespace
{

lapack_complex_double *to_lapack(cplx *p)
{
    return p;
}

std::string pivot_message(std::size_t pivot, double value)
{
    char buf[128];
    std::snprintf(buf, sizeof(buf), "matrix is not positive definite: pivot %zu is %.6g", pivot, value);
    return buf;
}

void require_square(const CMatrix &m, const char *what)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw NumericsError(std::string(what) + ": matrix must be square and non-empty");
}

} // namespace

NotPositiveDefinite::NotPositiveDefinite(std::size_t pivot, double value)
    : NumericsError(pivot_message(pivot, value)), pivot_(pivot), value_(value)
{
}

void require_finite(const CMatrix &m, const char *what)
{
    if (!m.allFinite())
        throw NumericsError(std::string(what) + ": matrix has non-finite entries");
}

double hermitian_deviation(const CMatrix &m)
{
    return (m - m.adjoint()).norm();
}

CMatrix hermitian_part(const CMatrix &m)
{
    return 0.5 * (m + m.adjoint());
}

HermitianEig hermitian_eig(const CMatrix &m, Symmetrize symmetrize)
{
    require_square(m, "hermitian_eig");
    require_finite(m, "hermitian_eig");

    CMatrix h;
    if (symmetrize == Symmetrize::yes)
        h = hermitian_part(m);
    else
    {
        if (hermitian_deviation(m) > hermitian_tolerance * m.norm())
            throw NumericsError("hermitian_eig: input is not Hermitian");
        h = m;
    }

    const lapack_int n = static_cast<lapack_int>(h.rows());
    HermitianEig out;
    out.eigenvalues.resize(n);
    if (n == 0)
        return out;
    // zheevd overwrites the input with the eigenvectors.
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, to_lapack(h.data()), n, out.eigenvalues.data());
    if (info != 0)
        throw NumericsError("hermitian_eig: eigenvalue iteration did not converge");

    // LAPACK returns ascending order.
    out.eigenvalues.reverseInPlace();
    out.eigenvectors = h.rowwise().reverse();
    return out;
}

HermitianEig hermitian_eig_above(const CMatrix &m, double threshold, Symmetrize symmetrize)
{
    require_square(m, "hermitian_eig_above");
    require_finite(m, "hermitian_eig_above");

    CMatrix h;
    if (symmetrize == Symmetrize::yes)
        h = hermitian_part(m);
    else
    {
        if (hermitian_deviation(m) > hermitian_tolerance * m.norm())
            throw NumericsError("hermitian_eig_above: input is not Hermitian");
        h = m;
    }

    const lapack_int n = static_cast<lapack_int>(h.rows());
    HermitianEig out;
    if (n == 0)
    {
        out.eigenvalues.resize(0);
        return out;
    }
    // Every eigenvalue is bounded by the Frobenius norm.
    const double upper = std::max(h.norm(), threshold) * 2.0 + 1.0;
    if (!(threshold < upper))
    {
        out.eigenvalues.resize(0);
        out.eigenvectors.resize(n, 0);
        return out;
    }
    RVector w(n);
    CMatrix z(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, to_lapack(h.data()), n, threshold,
                                           upper, 0, 0, 0.0, &found, w.data(), to_lapack(z.data()), n,
                                           support.data());
    if (info != 0)
        throw NumericsError("hermitian_eig_above: eigenvalue iteration did not converge");

    out.eigenvalues = w.head(found).reverse();
    out.eigenvectors = z.leftCols(found).rowwise().reverse();
    return out;
}

CMatrix cholesky_lower(const CMatrix &a)
{
    require_square(a, "cholesky");
    require_finite(a, "cholesky");

    const Eigen::Index n = a.rows();
    CMatrix l = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        double d = a(j, j).real();
        for (Eigen::Index k = 0; k < j; ++k)
            d -= std::norm(l(j, k));
        if (!(d > 0.0))
            throw NotPositiveDefinite(static_cast<std::size_t>(j), d);
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i)
        {
            cplx s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

CMatrix solve_hpd(const CMatrix &a, const CMatrix &b)
{
    if (b.rows() != a.rows())
        throw NumericsError("solve_hpd: right-hand side row count does not match");
    const CMatrix l = cholesky_lower(a);
    CMatrix y = l.triangularView<Eigen::Lower>().solve(b);
    return l.adjoint().triangularView<Eigen::Upper>().solve(y);
}

CMatrix inverse_hpd(const CMatrix &a)
{
    CMatrix inv = solve_hpd(a, CMatrix::Identity(a.rows(), a.cols()));
    return hermitian_part(inv);
}

double logdet_hpd(const CMatrix &a)
{
    const CMatrix l = cholesky_lower(a);
    double s = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i)
        s += std::log(l(i, i).real());
    return 2.0 * s;
}

std::pair<double, double> nuclear_and_spectral_norms(const CMatrix &m)
{
    const HermitianEig eig = hermitian_eig(m, Symmetrize::yes);
    const double lmax = eig.eigenvalues(0);
    const double lmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (lmin < -psd_tolerance * std::max(std::abs(lmax), 1e-300))
        throw NumericsError("nuclear_and_spectral_norms: input is not positive semidefinite");
    return {eig.eigenvalues.cwiseAbs().sum(), eig.eigenvalues.cwiseAbs().maxCoeff()};
}

RVector singular_values(const CMatrix &m)
{
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues();
}

std::size_t numerical_rank(const CMatrix &m, double rel_tol)
{
    const RVector s = singular_values(m);
    if (s.size() == 0 || s(0) == 0.0)
        return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0))
            ++r;
    return r;
}

} // namespace starnf
