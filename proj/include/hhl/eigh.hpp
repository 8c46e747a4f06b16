// Copyright 2026 The hhl-nopost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hhl/numkit.hpp"

namespace hhl::numkit {

/// Spectral decomposition A = Σ_j λ_j |u_j⟩⟨u_j| of a Hermitian matrix.
/// Eigenvalues are sorted ascending; eigenvectors are the columns of
/// `eigenvectors`, orthonormal, with the first component of modulus
/// above 1e-12 made real positive so results are reproducible.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    CMatrix eigenvectors;

    std::size_t dim() const { return eigenvalues.size(); }
    CVector eigenvector(std::size_t j) const { return eigenvectors.column(j); }
    double min_eigenvalue() const { return eigenvalues.front(); }
    double max_eigenvalue() const { return eigenvalues.back(); }

    /// Σ_j f(λ_j) |u_j⟩⟨u_j| for a scalar function of the spectrum.
    template <typename Fn> CMatrix apply_spectral(Fn &&f) const {
        const std::size_t n = dim();
        CMatrix out(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            const cxd fj = f(eigenvalues[j]);
            if (fj == cxd{0.0, 0.0}) {
                continue;
            }
            for (std::size_t row = 0; row < n; ++row) {
                const cxd ur = eigenvectors(row, j);
                if (ur == cxd{0.0, 0.0}) {
                    continue;
                }
                for (std::size_t col = 0; col < n; ++col) {
                    out(row, col) += fj * ur * std::conj(eigenvectors(col, j));
                }
            }
        }
        return out;
    }
};

namespace detail {

inline double off_diagonal_norm(const CMatrix &a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

} // namespace detail

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each sweep annihilates every off-diagonal pair (p,q) with a unitary
/// plane rotation; convergence is quadratic and a few sweeps suffice at
/// the dimensions this library supports.
inline EigenDecomposition eigh(const CMatrix &input) {
    if (!input.is_square()) {
        throw DimMismatchError("eigh: matrix must be square");
    }
    if (!input.is_hermitian(1e-12)) {
        throw NotHermitianError("eigh: matrix is not Hermitian within 1e-12");
    }

    const std::size_t n = input.rows();

    // Work on the exactly Hermitian part so roundoff in the input cannot
    // push the rotations off the Hermitian manifold.
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = (input(i, i) + std::conj(input(i, i))) / 2.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const cxd v = (input(i, j) + std::conj(input(j, i))) / 2.0;
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }

    CMatrix v = CMatrix::identity(n);
    const double scale = std::max(1.0, a.frobenius_norm());
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    while (detail::off_diagonal_norm(a) > 1e-14 * scale) {
        if (++sweep > kMaxSweeps) {
            throw NoConvergenceError("eigh: Jacobi iteration budget exceeded");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cxd apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) {
                    continue;
                }
                // Rotation angle from the phase-stripped real 2x2 block.
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cxd phase = apq / mag;

                // Unitary U: identity except
                //   U(p,p)=c·phase, U(p,q)=s·phase, U(q,p)=-s, U(q,q)=c,
                // then A <- U† A U, V <- V U.
                const cxd upp = c * phase;
                const cxd upq = s * phase;

                for (std::size_t i = 0; i < n; ++i) { // columns p, q
                    const cxd aip = a(i, p);
                    const cxd aiq = a(i, q);
                    a(i, p) = aip * upp - aiq * s;
                    a(i, q) = aip * upq + aiq * c;
                }
                for (std::size_t i = 0; i < n; ++i) { // rows p, q
                    const cxd api = a(p, i);
                    const cxd aqi = a(q, i);
                    a(p, i) = std::conj(upp) * api - s * aqi;
                    a(q, i) = std::conj(upq) * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cxd vip = v(i, p);
                    const cxd viq = v(i, q);
                    v(i, p) = vip * upp - viq * s;
                    v(i, q) = vip * upq + viq * c;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.eigenvalues[j] = a(src, src).real();

        // Deterministic phase: first component of modulus > 1e-12 made
        // real positive.
        cxd phase{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const cxd vi = v(i, src);
            if (std::abs(vi) > 1e-12) {
                phase = std::conj(vi) / std::abs(vi);
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, j) = v(i, src) * phase;
        }
    }
    return out;
}

} // namespace hhl::numkit
