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

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "hhl/eigh.hpp"
#include "hhl/numkit.hpp"
#include "hhl/pauli.hpp"

namespace hhl::families {

using numkit::CVector;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Second-derivative stencil matrix: `a` on the diagonal, `b` on both
/// adjacent off-diagonals. The dimension must be a power of two so the
/// matrix embeds into a qubit register.
struct TridiagSpec {
    double a = 0.0;
    double b = 0.0;
    std::size_t n = 2;
};

inline CMatrix tridiag(const TridiagSpec &spec) {
    if (!is_power_of_two(spec.n)) {
        throw NotPowerOfTwoError("tridiag: dimension must be a power of two");
    }
    CMatrix m(spec.n, spec.n);
    for (std::size_t k = 0; k < spec.n; ++k) {
        m(k, k) = spec.a;
        if (k + 1 < spec.n) {
            m(k, k + 1) = spec.b;
            m(k + 1, k) = spec.b;
        }
    }
    return m;
}

/// The index reflection sum_k |k><N-1-k|, which equals X^{(x)n} exactly
/// for N = 2^n: flipping every bit of k maps k to N-1-k.
inline CMatrix x_string_reflection(std::size_t n_dim) {
    if (!is_power_of_two(n_dim)) {
        throw NotPowerOfTwoError("x_string_reflection: dimension must be a power of two");
    }
    CMatrix m(n_dim, n_dim);
    for (std::size_t k = 0; k < n_dim; ++k) {
        m(k, n_dim - 1 - k) = 1.0;
    }
    return m;
}

/// Result of the commutator condition test. `norm_inner` and
/// `norm_double` are max-norms of [M,A] and [[M,A],A]; the verdict
/// compares the double commutator against tol * ||M|| * ||A||^2 so the
/// test is scale invariant.
struct ConditionReport {
    bool is_free = false;
    double norm_inner = 0.0;
    double norm_double = 0.0;
    double scale = 0.0;
};

inline ConditionReport postselection_free_check(const CMatrix &a, const CMatrix &m,
                                                double tol = 1e-10) {
    if (!a.is_square() || !m.is_square() || a.rows() != m.rows()) {
        throw DimMismatchError("postselection_free_check: A and M must be square, equal dims");
    }
    ConditionReport report;
    const CMatrix inner = numkit::commutator(m, a);
    const CMatrix outer = numkit::commutator(inner, a);
    report.norm_inner = inner.max_abs();
    report.norm_double = outer.max_abs();
    report.scale = std::max(1e-300, m.max_abs() * a.max_abs() * a.max_abs());
    report.is_free = report.norm_double <= tol * report.scale;
    return report;
}

/// Conjugated problem (A_U, M_U) = (U A U', U M U').
struct BasisChange {
    CMatrix u;
    CMatrix a_u;
    CMatrix m_u;
};

inline BasisChange make_basis_change(const CMatrix &u, const CMatrix &a, const CMatrix &m) {
    if (!u.is_square() || u.rows() != a.rows() || a.rows() != m.rows()) {
        throw DimMismatchError("make_basis_change: dimension mismatch");
    }
    const CMatrix gram = u * u.dagger();
    if (numkit::max_abs_diff(gram, CMatrix::identity(u.rows())) > 1e-10) {
        throw NotUnitaryError("make_basis_change: U is not unitary within 1e-10");
    }
    return {u, u * a * u.dagger(), u * m * u.dagger()};
}

/// Covariance of the condition under a change of basis:
///   lhs = [[M_U, A_U], A_U],  rhs = U [[M, A], A] U',
/// which agree for any unitary U, so the condition holds in every basis
/// at once. `expectation_residual` checks that the probe expectation
/// value is basis independent.
struct CovarianceCheck {
    CMatrix lhs;
    CMatrix rhs;
    double max_diff = 0.0;
    double expectation_residual = 0.0;
};

inline CovarianceCheck basis_change_covariance(const CMatrix &u, const CMatrix &a,
                                               const CMatrix &m, const CVector &probe) {
    const BasisChange bc = make_basis_change(u, a, m);
    CovarianceCheck check;
    check.lhs = numkit::commutator(numkit::commutator(bc.m_u, bc.a_u), bc.a_u);
    check.rhs = u * numkit::commutator(numkit::commutator(m, a), a) * u.dagger();
    check.max_diff = numkit::max_abs_diff(check.lhs, check.rhs);

    const CVector probe_u = u * probe;
    const numkit::cxd before = numkit::inner(probe, m * probe);
    const numkit::cxd after = numkit::inner(probe_u, bc.m_u * probe_u);
    check.expectation_residual = std::abs(before - after);
    return check;
}

/// Shifts a Hermitian matrix by c*I so its spectrum is strictly positive
/// (c = |lambda_min| + margin when needed). Identity shifts commute with
/// everything, so the postselection-free condition is unchanged.
inline CMatrix shift_positive(const CMatrix &a, double margin = 1.0) {
    const auto eig = numkit::eigh(a);
    const double lambda_min = eig.min_eigenvalue();
    if (lambda_min > 0.0) {
        return a;
    }
    return a + (std::abs(lambda_min) + margin) * CMatrix::identity(a.rows());
}

inline PauliPolynomial load_pauli_polynomial(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    try {
        return parse_pauli_polynomial(in);
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

inline void save_pauli_polynomial(const std::filesystem::path &path,
                                  const PauliPolynomial &poly) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path.string());
    }
    write_pauli_polynomial(out, poly);
}

} // namespace hhl::families
