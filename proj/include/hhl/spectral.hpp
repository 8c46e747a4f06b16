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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hhl/eigh.hpp"
#include "hhl/numkit.hpp"

namespace hhl::spectral {

using numkit::CMatrix;
using numkit::CVector;
using numkit::cxd;
using numkit::EigenDecomposition;

/// One linear-system instance in the eigenbasis picture: a positive
/// Hermitian input matrix A, a normalized input state b, and the rotation
/// constant C with 0 < C <= min eigenvalue. The decomposition and the
/// eigenbasis coordinates beta_j = <u_j|b> are computed once on
/// construction and shared by every operation.
class SpectralProblem {
  public:
    static SpectralProblem create(CMatrix a, CVector b, double c) {
        if (!a.is_square() || a.rows() != b.dim()) {
            throw DimMismatchError("SpectralProblem: A and b dimensions disagree");
        }
        if (!a.is_hermitian(1e-12)) {
            throw NotHermitianError("SpectralProblem: A is not Hermitian within 1e-12");
        }
        if (std::abs(b.norm() - 1.0) > 1e-12) {
            throw InvalidArgumentError("SpectralProblem: b must be normalized within 1e-12");
        }
        SpectralProblem p;
        p.eig_ = numkit::eigh(a);
        if (p.eig_.min_eigenvalue() <= 0.0) {
            throw NotPositiveError("SpectralProblem: A must have strictly positive eigenvalues");
        }
        if (!(c > 0.0)) {
            throw InvalidArgumentError("SpectralProblem: C must be positive");
        }
        if (c > p.eig_.min_eigenvalue() * (1.0 + 1e-12)) {
            throw CTooLargeError("SpectralProblem: C exceeds the smallest eigenvalue");
        }
        p.a_ = std::move(a);
        p.b_ = std::move(b);
        p.c_ = std::min(c, p.eig_.min_eigenvalue());
        p.beta_.resize(p.eig_.dim());
        for (std::size_t j = 0; j < p.eig_.dim(); ++j) {
            p.beta_[j] = numkit::inner(p.eig_.eigenvector(j), p.b_);
        }
        return p;
    }

    /// Convenience constructor for the toy-circuit parameterization
    /// C = 2*pi / 2^r.
    static SpectralProblem create_with_r(CMatrix a, CVector b, int r) {
        return create(std::move(a), std::move(b), numkit::kTwoPi / std::pow(2.0, r));
    }

    const CMatrix &a() const { return a_; }
    const CVector &b() const { return b_; }
    double c() const { return c_; }
    const EigenDecomposition &eig() const { return eig_; }
    const std::vector<cxd> &beta() const { return beta_; }
    std::size_t dim() const { return eig_.dim(); }

  private:
    SpectralProblem() = default;

    CMatrix a_;
    CVector b_;
    double c_ = 0.0;
    EigenDecomposition eig_;
    std::vector<cxd> beta_;
};

/// The two post-measurement register states. The unnormalized branches
/// satisfy p_i = ||x_i_unnorm||^2 and p0 + p1 = 1; the normalized ones
/// are x_i_unnorm / sqrt(p_i) (left zero when p_i vanishes).
struct HHLBranches {
    CVector x0_unnorm;
    CVector x1_unnorm;
    double p0 = 0.0;
    double p1 = 0.0;
    CVector x0_norm;
    CVector x1_norm;
};

namespace detail {

inline CVector safe_normalize(const CVector &x, double p) {
    if (p < 1e-30) {
        return CVector(x.dim());
    }
    return (1.0 / std::sqrt(p)) * x;
}

} // namespace detail

/// x = A^{-1} b, computed in the eigenbasis as sum_j (beta_j/lambda_j) u_j.
/// This is the classical oracle every quantum result is checked against.
inline CVector classical_solution(const CMatrix &a, const CVector &b) {
    if (!a.is_square() || a.rows() != b.dim()) {
        throw DimMismatchError("classical_solution: A and b dimensions disagree");
    }
    const EigenDecomposition eig = numkit::eigh(a);
    const double scale = std::max(std::abs(eig.min_eigenvalue()), std::abs(eig.max_eigenvalue()));
    CVector x(b.dim());
    for (std::size_t j = 0; j < eig.dim(); ++j) {
        const double lambda = eig.eigenvalues[j];
        if (std::abs(lambda) < 1e-12 * scale) {
            throw SingularMatrixError("classical_solution: matrix is numerically singular");
        }
        const CVector u = eig.eigenvector(j);
        x = x + (numkit::inner(u, b) / lambda) * u;
    }
    return x;
}

/// Branch states of the algorithm outcome
///   |Psi> = sum_j beta_j |u_j> ( sqrt(1 - C^2/lambda_j^2) |0>_a
///                               + (C/lambda_j) |1>_a ):
/// the ancilla-0 branch sum_j beta_j sqrt(1 - C^2/lambda_j^2) |u_j> and
/// the ancilla-1 branch sum_j beta_j (C/lambda_j) |u_j>, which is the
/// linear-system solution scaled by C.
inline HHLBranches hhl_branches(const SpectralProblem &p) {
    const std::size_t n = p.dim();
    HHLBranches out;
    out.x0_unnorm = CVector(n);
    out.x1_unnorm = CVector(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lambda = p.eig().eigenvalues[j];
        const double ratio = p.c() / lambda;
        const double w0 = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
        const CVector u = p.eig().eigenvector(j);
        out.x0_unnorm = out.x0_unnorm + (p.beta()[j] * w0) * u;
        out.x1_unnorm = out.x1_unnorm + (p.beta()[j] * ratio) * u;
    }
    out.p0 = out.x0_unnorm.norm_sq();
    out.p1 = out.x1_unnorm.norm_sq();
    out.x0_norm = detail::safe_normalize(out.x0_unnorm, out.p0);
    out.x1_norm = detail::safe_normalize(out.x1_unnorm, out.p1);
    return out;
}

/// Operators derived from (A, C) and an observable M, all expressed with
/// the spectrally rescaled A_C = sum_j (lambda_j/C) |u_j><u_j|:
///
///   ac_inv      A_C^{-1} = sum_j (C/lambda_j) |u_j><u_j|
///   a_tilde_inv sum_j sqrt(1 - C^2/lambda_j^2) |u_j><u_j|, the failure-
///               branch map; factorizes as A_C^{-1} D
///   d           sum_j sqrt(lambda_j^2/C^2 - 1) |u_j><u_j|
///   delta       I - D
///   r           [M, Delta]
///   delta_m     Delta M Delta - (M Delta + Delta M), the exact error
///               operator with <x0|M|x0> = <x1|M|x1> + <x1|deltaM|x1>
///   k           (1/2) [[M, A_C], A_C]
///   k_correction (1/2) [[M, Delta], D]
///
/// The double-commutator expansion of delta_m is
///   delta_m = A_C M A_C - 2 M + k + k_correction,
/// an exact operator identity. Both k and k_correction vanish exactly
/// when [M, A] = 0, which for Hermitian A is equivalent to [[M,A],A] = 0;
/// in that regime delta_m reduces to A_C M A_C - 2 M and the
/// postselection-free relation below loses its commutator terms.
struct DerivedOperators {
    CMatrix ac;
    CMatrix ac_inv;
    CMatrix a_tilde_inv;
    CMatrix d;
    CMatrix delta;
    CMatrix r;
    CMatrix delta_m;
    CMatrix k;
    CMatrix k_correction;
};

inline DerivedOperators derived_operators(const SpectralProblem &p, const CMatrix &m) {
    if (!m.is_square() || m.rows() != p.dim()) {
        throw DimMismatchError("derived_operators: M dimension disagrees with A");
    }
    if (!m.is_hermitian(1e-12)) {
        throw NotHermitianError("derived_operators: M is not Hermitian within 1e-12");
    }
    const double c = p.c();
    const auto &eig = p.eig();

    DerivedOperators out;
    out.ac = eig.apply_spectral([c](double lambda) { return cxd{lambda / c, 0.0}; });
    out.ac_inv = eig.apply_spectral([c](double lambda) { return cxd{c / lambda, 0.0}; });
    out.a_tilde_inv = eig.apply_spectral([c](double lambda) {
        const double ratio = c / lambda;
        return cxd{std::sqrt(std::max(0.0, 1.0 - ratio * ratio)), 0.0};
    });
    out.d = eig.apply_spectral([c](double lambda) {
        const double ratio = lambda / c;
        return cxd{std::sqrt(std::max(0.0, ratio * ratio - 1.0)), 0.0};
    });
    out.delta = CMatrix::identity(p.dim()) - out.d;
    out.r = numkit::commutator(m, out.delta);
    out.delta_m = out.delta * m * out.delta - numkit::anticommutator(m, out.delta);
    out.k = 0.5 * numkit::commutator(numkit::commutator(m, out.ac), out.ac);
    out.k_correction = 0.5 * numkit::commutator(out.r, out.d);
    return out;
}

/// <x|M|x> for Hermitian M. The imaginary part is checked against a
/// scale-aware 1e-10 threshold and then discarded.
inline double expectation(const CMatrix &m, const CVector &x) {
    if (!m.is_square() || m.rows() != x.dim()) {
        throw DimMismatchError("expectation: dimension mismatch");
    }
    const cxd value = numkit::inner(x, m * x);
    const double tol = 1e-10 * std::max(1.0, m.max_abs() * x.norm_sq());
    if (std::abs(value.imag()) > tol) {
        throw NotHermitianError("expectation: <x|M|x> has imaginary part " +
                                std::to_string(value.imag()));
    }
    return value.real();
}

/// Terms of the branch-expectation relation, all on unnormalized branch
/// vectors:
///
///   lhs       = <x0|M|x0>
///   mb        = <b|M|b>
///   m1        = <x1|M|x1>
///   k_term    = <x1|K|x1>
///   correction_term = <x1|K_corr|x1>  with K_corr = (1/2)[[M,Delta],D]
///   rhs       = mb - m1 + k_term + correction_term
///
/// lhs == rhs holds for every Hermitian M. Under the postselection-free
/// condition [[M,A],A] = 0 both commutator terms vanish and the relation
/// collapses to <x0|M|x0> = <b|M|b> - <x1|M|x1>, which is what makes the
/// failure branch usable.
struct RelationTerms {
    double lhs = 0.0;
    double rhs = 0.0;
    double k_term = 0.0;
    double correction_term = 0.0;
    double mb = 0.0;
    double m1 = 0.0;
};

inline RelationTerms check_relation_unnormalized(const SpectralProblem &p, const CMatrix &m) {
    const HHLBranches branches = hhl_branches(p);
    const DerivedOperators ops = derived_operators(p, m);
    RelationTerms t;
    t.lhs = expectation(m, branches.x0_unnorm);
    t.mb = expectation(m, p.b());
    t.m1 = expectation(m, branches.x1_unnorm);
    t.k_term = expectation(ops.k, branches.x1_unnorm);
    t.correction_term = expectation(ops.k_correction, branches.x1_unnorm);
    t.rhs = t.mb - t.m1 + t.k_term + t.correction_term;
    return t;
}

/// Postselection-free estimate of <x1|M|x1> from normalized inputs:
/// (Mb - p0*M0) / p1. The caller is responsible for having verified the
/// commutator condition; this is pure arithmetic.
inline double reconstruct_x1_expectation(double mb, double m0, double p0, double p1) {
    if (std::abs(p0 + p1 - 1.0) > 1e-6) {
        throw InvalidArgumentError("reconstruct_x1_expectation: p0 + p1 must be 1");
    }
    if (p1 < 1e-15) {
        throw ZeroSuccessProbabilityError("reconstruct_x1_expectation: p1 is zero");
    }
    return (mb - p0 * m0) / p1;
}

} // namespace hhl::spectral
