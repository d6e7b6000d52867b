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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace starnf
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised by the dense kernels on malformed or out-of-contract input.
class NumericsError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Cholesky breakdown. `pivot()` is the zero-based index of the first pivot that was not strictly positive.
class NotPositiveDefinite : public NumericsError
{
public:
    NotPositiveDefinite(std::size_t pivot, double value);
    std::size_t pivot() const noexcept { return pivot_; }
    double value() const noexcept { return value_; }

private:
    std::size_t pivot_;
    double value_;
};

struct HermitianEig
{
    RVector eigenvalues;  // descending
    CMatrix eigenvectors; // column i pairs with eigenvalues(i)
};

enum class Symmetrize
{
    no,
    yes
};

// Relative Hermiticity tolerance applied when the caller does not request symmetrization.
inline constexpr double hermitian_tolerance = 1e-8;
// Eigenvalues below -psd_tolerance * lambda_max flag a non-PSD input.
inline constexpr double psd_tolerance = 1e-8;

/// Throws NumericsError if any entry is NaN or infinite.
void require_finite(const CMatrix &m, const char *what);

/// Deviation of `m` from Hermitian symmetry, ||m - m^H||_F.
double hermitian_deviation(const CMatrix &m);

/// (m + m^H) / 2.
CMatrix hermitian_part(const CMatrix &m);

/// Spectral decomposition of a Hermitian matrix with eigenvalues sorted in descending order.
HermitianEig hermitian_eig(const CMatrix &m, Symmetrize symmetrize = Symmetrize::no);

/// Eigenpairs with eigenvalue strictly above `threshold`, descending. Only that part of the spectrum is computed.
HermitianEig hermitian_eig_above(const CMatrix &m, double threshold, Symmetrize symmetrize = Symmetrize::no);

/// Lower Cholesky factor L with a = L L^H. Throws NotPositiveDefinite on breakdown.
CMatrix cholesky_lower(const CMatrix &a);

/// Solves a X = b for Hermitian positive definite a.
CMatrix solve_hpd(const CMatrix &a, const CMatrix &b);

/// Inverse of a Hermitian positive definite matrix, symmetrized on return.
CMatrix inverse_hpd(const CMatrix &a);

/// Natural-log determinant of a Hermitian positive definite matrix.
double logdet_hpd(const CMatrix &a);

/// (nuclear norm, spectral norm) of a Hermitian PSD matrix.
std::pair<double, double> nuclear_and_spectral_norms(const CMatrix &m);

/// Singular values, descending.
RVector singular_values(const CMatrix &m);

/// Count of singular values above rel_tol * sigma_max.
std::size_t numerical_rank(const CMatrix &m, double rel_tol);

} // namespace starnf
