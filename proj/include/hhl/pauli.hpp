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

#include <cctype>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hhl/numkit.hpp"
#include "hhl/rng.hpp"

namespace hhl::families {

using numkit::CMatrix;
using numkit::cxd;

/// Single-qubit Pauli symbols.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) {
    switch (p) {
    case Pauli::I:
        return 'I';
    case Pauli::X:
        return 'X';
    case Pauli::Y:
        return 'Y';
    default:
        return 'Z';
    }
}

inline Pauli pauli_from_char(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I':
        return Pauli::I;
    case 'X':
        return Pauli::X;
    case 'Y':
        return Pauli::Y;
    case 'Z':
        return Pauli::Z;
    default:
        throw ParseError(std::string("unknown Pauli symbol '") + c + "'");
    }
}

inline CMatrix pauli_matrix(Pauli p) {
    const cxd i{0.0, 1.0};
    switch (p) {
    case Pauli::I:
        return CMatrix::identity(2);
    case Pauli::X:
        return CMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case Pauli::Y:
        return CMatrix{{0.0, -i}, {i, 0.0}};
    default:
        return CMatrix{{1.0, 0.0}, {0.0, -1.0}};
    }
}

/// coefficient * P_0 (x) P_1 (x) ... (x) P_{n-1}, with factors listed from
/// the most significant qubit down. Hermitian iff the coefficient is real.
struct PauliString {
    std::vector<Pauli> factors;
    cxd coefficient{1.0, 0.0};

    std::size_t size() const { return factors.size(); }

    /// Number of non-identity factors.
    std::size_t weight() const {
        std::size_t w = 0;
        for (Pauli p : factors) {
            if (p != Pauli::I) {
                ++w;
            }
        }
        return w;
    }

    bool even_weight() const { return weight() % 2 == 0; }
    bool is_hermitian(double tol = 1e-12) const { return std::abs(coefficient.imag()) <= tol; }

    CMatrix to_matrix() const {
        CMatrix m = CMatrix::identity(1);
        for (Pauli p : factors) {
            m = numkit::kron(m, pauli_matrix(p));
        }
        return coefficient * m;
    }

    std::string str() const {
        std::ostringstream os;
        os << coefficient.real();
        if (coefficient.imag() != 0.0) {
            os << (coefficient.imag() > 0 ? "+" : "-") << std::abs(coefficient.imag()) << "i";
        }
        os << " * ";
        for (Pauli p : factors) {
            os << pauli_char(p);
        }
        return os.str();
    }
};

/// P^{(x)n} with an optional scalar.
inline PauliString pauli_power(Pauli p, std::size_t n, cxd coefficient = cxd{1.0, 0.0}) {
    return PauliString{std::vector<Pauli>(n, p), coefficient};
}

namespace detail {

/// P_a P_b = phase * P_c for non-identity a != b (cyclic: XY = iZ).
inline std::pair<cxd, Pauli> pauli_product_offdiag(Pauli a, Pauli b) {
    const int ia = static_cast<int>(a);
    const int ib = static_cast<int>(b);
    const int ic = 6 - ia - ib; // the remaining label among {1,2,3}
    const bool cyclic = (ib - ia + 3) % 3 == 1;
    return {cyclic ? cxd{0.0, 1.0} : cxd{0.0, -1.0}, static_cast<Pauli>(ic)};
}

} // namespace detail

/// Closed form of the commutator of two uniform Pauli strings,
///   [P1^{(x)K}, P2^{(x)K}] = (e^K - (-e)^K) P3^{(x)K},  e = +/- i,
/// following from P1 P2 = +/- i P3 applied factor by factor. The scalar is
/// zero for even K and has magnitude 2 for odd K.
struct ScaledPauliString {
    cxd scalar;
    PauliString string;

    CMatrix to_matrix() const { return scalar * string.to_matrix(); }
};

inline ScaledPauliString pauli_k_commutator(std::size_t k, Pauli p1 = Pauli::X,
                                            Pauli p2 = Pauli::Y) {
    if (k < 1) {
        throw InvalidArgumentError("pauli_k_commutator: K must be >= 1");
    }
    if (p1 == Pauli::I || p2 == Pauli::I || p1 == p2) {
        throw InvalidArgumentError("pauli_k_commutator: factors must be distinct non-identity");
    }
    const auto [phase, p3] = detail::pauli_product_offdiag(p1, p2);
    cxd forward{1.0, 0.0};
    cxd backward{1.0, 0.0};
    for (std::size_t i = 0; i < k; ++i) {
        forward *= phase;
        backward *= -phase;
    }
    return {forward - backward, pauli_power(p3, k)};
}

/// Identity padding factors out:
///   [P1^{(x)K} (x) I^{(x)(N-K)}, P2^{(x)N}]
///     = (e^K - (-e)^K) P3^{(x)K} (x) P2^{(x)(N-K)}.
inline ScaledPauliString pauli_padded_commutator(std::size_t k, std::size_t n,
                                                 Pauli p1 = Pauli::X, Pauli p2 = Pauli::Y) {
    if (k < 1 || k > n) {
        throw InvalidArgumentError("pauli_padded_commutator: need 1 <= K <= N");
    }
    ScaledPauliString head = pauli_k_commutator(k, p1, p2);
    head.string.factors.resize(n, p2);
    return head;
}

enum class Parity { Even, Odd, Mixed };

/// Sum of coefficient-carrying Pauli strings of a common length.
struct PauliPolynomial {
    std::vector<PauliString> terms;

    std::size_t n_qubits() const { return terms.empty() ? 0 : terms.front().size(); }

    Parity parity() const {
        bool any_even = false;
        bool any_odd = false;
        for (const auto &t : terms) {
            (t.even_weight() ? any_even : any_odd) = true;
        }
        if (any_odd && any_even) {
            return Parity::Mixed;
        }
        return any_odd ? Parity::Odd : Parity::Even;
    }

    CMatrix to_matrix() const {
        if (terms.empty()) {
            throw InvalidArgumentError("PauliPolynomial: no terms");
        }
        const std::size_t n = n_qubits();
        CMatrix sum(std::size_t{1} << n, std::size_t{1} << n);
        for (const auto &t : terms) {
            if (t.size() != n) {
                throw DimMismatchError("PauliPolynomial: terms have unequal length");
            }
            sum = sum + t.to_matrix();
        }
        return sum;
    }
};

/// Random polynomial whose every term places an even number of factors of
/// a single Pauli type, with a real coefficient; the class of input
/// matrices proven to commute with uniform Pauli observables. Terms with
/// odd weight never occur by construction.
inline PauliPolynomial even_pauli_polynomial(std::size_t n_qubits, std::size_t n_terms,
                                             std::uint64_t seed) {
    if (n_qubits < 2) {
        throw InvalidArgumentError("even_pauli_polynomial: need at least 2 qubits");
    }
    if (n_terms < 1) {
        throw InvalidArgumentError("even_pauli_polynomial: need at least one term");
    }
    rng::Xoshiro256ss gen(seed);
    PauliPolynomial poly;
    poly.terms.reserve(n_terms);
    for (std::size_t t = 0; t < n_terms; ++t) {
        const auto type = static_cast<Pauli>(1 + gen.below(3));
        const std::size_t max_pairs = n_qubits / 2;
        const std::size_t weight = 2 * (1 + gen.below(max_pairs));

        // choose `weight` distinct positions
        std::vector<std::size_t> positions(n_qubits);
        for (std::size_t i = 0; i < n_qubits; ++i) {
            positions[i] = i;
        }
        for (std::size_t i = 0; i < weight; ++i) {
            const std::size_t j = i + gen.below(n_qubits - i);
            std::swap(positions[i], positions[j]);
        }

        PauliString term{std::vector<Pauli>(n_qubits, Pauli::I), cxd{0.0, 0.0}};
        for (std::size_t i = 0; i < weight; ++i) {
            term.factors[positions[i]] = type;
        }
        double j = 0.0;
        while (std::abs(j) < 1e-3) {
            j = gen.uniform(-1.0, 1.0);
        }
        term.coefficient = cxd{j, 0.0};
        poly.terms.push_back(std::move(term));
    }
    return poly;
}

/// Text format: one term per line, "J_re J_im P P I P ...". Blank lines
/// and lines starting with '#' are skipped.
inline PauliPolynomial parse_pauli_polynomial(std::istream &in) {
    PauliPolynomial poly;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == '#') {
            continue;
        }
        PauliString term;
        double re = 0.0;
        double im = 0.0;
        try {
            re = std::stod(first);
        } catch (const std::exception &) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected J_re as first token, got '" + first + "'");
        }
        if (!(ls >> im)) {
            throw ParseError("line " + std::to_string(line_no) + ": expected J_im");
        }
        term.coefficient = cxd{re, im};
        std::string tok;
        while (ls >> tok) {
            if (tok.size() != 1) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": Pauli tokens must be single letters, got '" + tok + "'");
            }
            try {
                term.factors.push_back(pauli_from_char(tok[0]));
            } catch (const ParseError &e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (term.factors.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": term has no factors");
        }
        if (!poly.terms.empty() && term.size() != poly.terms.front().size()) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": term length differs from previous terms");
        }
        poly.terms.push_back(std::move(term));
    }
    if (poly.terms.empty()) {
        throw ParseError("no terms found");
    }
    return poly;
}

inline void write_pauli_polynomial(std::ostream &out, const PauliPolynomial &poly) {
    out << std::setprecision(17);
    for (const auto &t : poly.terms) {
        out << t.coefficient.real() << " " << t.coefficient.imag();
        for (Pauli p : t.factors) {
            out << " " << pauli_char(p);
        }
        out << "\n";
    }
}

} // namespace hhl::families
