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
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hhl/errors.hpp"

namespace hhl::numkit {

using cxd = std::complex<double>;

/// Dense storage is capped at 2^12; everything in this library is desk scale.
inline constexpr std::size_t kMaxDim = 4096;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Complex column vector with value semantics.
class CVector {
  public:
    CVector() = default;
    explicit CVector(std::size_t dim) : entries_(dim, cxd{0.0, 0.0}) {}
    CVector(std::initializer_list<cxd> entries) : entries_(entries) {}
    explicit CVector(std::vector<cxd> entries) : entries_(std::move(entries)) {}

    static CVector basis(std::size_t dim, std::size_t k) {
        if (k >= dim) {
            throw IndexOutOfRangeError("basis index out of range");
        }
        CVector v(dim);
        v[k] = 1.0;
        return v;
    }

    std::size_t dim() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    cxd &operator[](std::size_t i) { return entries_[i]; }
    const cxd &operator[](std::size_t i) const { return entries_[i]; }

    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    const std::vector<cxd> &entries() const { return entries_; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto &e : entries_) {
            s += std::norm(e);
        }
        return s;
    }

    double norm() const { return std::sqrt(norm_sq()); }

    CVector normalized() const {
        const double n = norm();
        if (n < 1e-300) {
            throw InvalidArgumentError("cannot normalize a zero vector");
        }
        CVector out = *this;
        for (auto &e : out.entries_) {
            e /= n;
        }
        return out;
    }

    CVector conj() const {
        CVector out = *this;
        for (auto &e : out.entries_) {
            e = std::conj(e);
        }
        return out;
    }

  private:
    std::vector<cxd> entries_;
};

/// ⟨x|y⟩ = Σ conj(x_i) y_i
inline cxd inner(const CVector &x, const CVector &y) {
    if (x.dim() != y.dim()) {
        throw DimMismatchError("inner: dimension mismatch");
    }
    cxd s{0.0, 0.0};
    for (std::size_t i = 0; i < x.dim(); ++i) {
        s += std::conj(x[i]) * y[i];
    }
    return s;
}

inline CVector operator+(const CVector &x, const CVector &y) {
    if (x.dim() != y.dim()) {
        throw DimMismatchError("vector add: dimension mismatch");
    }
    CVector out = x;
    for (std::size_t i = 0; i < y.dim(); ++i) {
        out[i] += y[i];
    }
    return out;
}

inline CVector operator-(const CVector &x, const CVector &y) {
    if (x.dim() != y.dim()) {
        throw DimMismatchError("vector sub: dimension mismatch");
    }
    CVector out = x;
    for (std::size_t i = 0; i < y.dim(); ++i) {
        out[i] -= y[i];
    }
    return out;
}

inline CVector operator*(const cxd &s, const CVector &x) {
    CVector out = x;
    for (auto &e : out) {
        e *= s;
    }
    return out;
}

inline CVector operator*(double s, const CVector &x) { return cxd{s, 0.0} * x; }

/// Row-major dense complex matrix.
class CMatrix {
  public:
    CMatrix() = default;

    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, cxd{0.0, 0.0}) {
        if (rows > kMaxDim || cols > kMaxDim) {
            throw SizeOverflowError("matrix dimension exceeds " + std::to_string(kMaxDim));
        }
    }

    CMatrix(std::initializer_list<std::initializer_list<cxd>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto &row : rows) {
            if (row.size() != cols_) {
                throw DimMismatchError("ragged initializer for CMatrix");
            }
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static CMatrix zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

    static CMatrix diagonal(const std::vector<double> &d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            m(i, i) = d[i];
        }
        return m;
    }

    /// |u⟩⟨v|
    static CMatrix outer(const CVector &u, const CVector &v) {
        CMatrix m(u.dim(), v.dim());
        for (std::size_t i = 0; i < u.dim(); ++i) {
            for (std::size_t j = 0; j < v.dim(); ++j) {
                m(i, j) = u[i] * std::conj(v[j]);
            }
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cxd &operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cxd &operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<cxd> &entries() const { return entries_; }

    double max_abs() const {
        double m = 0.0;
        for (const auto &e : entries_) {
            m = std::max(m, std::abs(e));
        }
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto &e : entries_) {
            s += std::norm(e);
        }
        return std::sqrt(s);
    }

    /// Largest |A_ij - conj(A_ji)| over all entries; 0 for an exactly
    /// Hermitian matrix.
    double hermiticity_defect() const {
        if (!is_square()) {
            return std::numeric_limits<double>::infinity();
        }
        double m = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = i; j < cols_; ++j) {
                m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
            }
        }
        return m;
    }

    bool is_hermitian(double tol = 1e-12) const {
        return is_square() && hermiticity_defect() <= tol * std::max(1.0, max_abs());
    }

    CMatrix dagger() const {
        CMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = std::conj((*this)(i, j));
            }
        }
        return out;
    }

    CVector column(std::size_t j) const {
        CVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            v[i] = (*this)(i, j);
        }
        return v;
    }

    std::string str() const {
        std::ostringstream os;
        os << rows_ << "x" << cols_ << " [";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i == 0 ? "[" : " [");
            for (std::size_t j = 0; j < cols_; ++j) {
                const cxd e = (*this)(i, j);
                os << e.real() << (e.imag() < 0 ? "-" : "+") << std::abs(e.imag()) << "i";
                if (j + 1 < cols_) {
                    os << ", ";
                }
            }
            os << "]";
        }
        os << "]";
        return os.str();
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cxd> entries_;
};

inline CMatrix operator+(const CMatrix &x, const CMatrix &y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimMismatchError("matrix add: dimension mismatch");
    }
    CMatrix out = x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            out(i, j) += y(i, j);
        }
    }
    return out;
}

inline CMatrix operator-(const CMatrix &x, const CMatrix &y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimMismatchError("matrix sub: dimension mismatch");
    }
    CMatrix out = x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            out(i, j) -= y(i, j);
        }
    }
    return out;
}

inline CMatrix operator*(const cxd &s, const CMatrix &x) {
    CMatrix out = x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            out(i, j) *= s;
        }
    }
    return out;
}

inline CMatrix operator*(double s, const CMatrix &x) { return cxd{s, 0.0} * x; }

inline CMatrix operator*(const CMatrix &x, const CMatrix &y) {
    if (x.cols() != y.rows()) {
        throw DimMismatchError("matmul: inner dimension mismatch");
    }
    CMatrix out(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t k = 0; k < x.cols(); ++k) {
            const cxd xik = x(i, k);
            if (xik == cxd{0.0, 0.0}) {
                continue;
            }
            for (std::size_t j = 0; j < y.cols(); ++j) {
                out(i, j) += xik * y(k, j);
            }
        }
    }
    return out;
}

inline CVector operator*(const CMatrix &x, const CVector &v) {
    if (x.cols() != v.dim()) {
        throw DimMismatchError("matvec: dimension mismatch");
    }
    CVector out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        cxd s{0.0, 0.0};
        for (std::size_t j = 0; j < x.cols(); ++j) {
            s += x(i, j) * v[j];
        }
        out[i] = s;
    }
    return out;
}

inline CMatrix matmul(const CMatrix &x, const CMatrix &y) { return x * y; }
inline CVector matvec(const CMatrix &x, const CVector &v) { return x * v; }
inline CMatrix dagger(const CMatrix &x) { return x.dagger(); }

/// XY - YX. Both operands must be square and of equal dimension.
inline CMatrix commutator(const CMatrix &x, const CMatrix &y) {
    if (!x.is_square() || !y.is_square() || x.rows() != y.rows()) {
        throw DimMismatchError("commutator: operands must be square of equal dimension");
    }
    return x * y - y * x;
}

/// XY + YX.
inline CMatrix anticommutator(const CMatrix &x, const CMatrix &y) {
    if (!x.is_square() || !y.is_square() || x.rows() != y.rows()) {
        throw DimMismatchError("anticommutator: operands must be square of equal dimension");
    }
    return x * y + y * x;
}

/// Kronecker product; the left factor owns the more significant qubits.
inline CMatrix kron(const CMatrix &x, const CMatrix &y) {
    if (x.rows() * y.rows() > kMaxDim || x.cols() * y.cols() > kMaxDim) {
        throw SizeOverflowError("kron: result dimension exceeds " + std::to_string(kMaxDim));
    }
    CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (std::size_t i1 = 0; i1 < x.rows(); ++i1) {
        for (std::size_t j1 = 0; j1 < x.cols(); ++j1) {
            const cxd xij = x(i1, j1);
            if (xij == cxd{0.0, 0.0}) {
                continue;
            }
            for (std::size_t i2 = 0; i2 < y.rows(); ++i2) {
                for (std::size_t j2 = 0; j2 < y.cols(); ++j2) {
                    out(i1 * y.rows() + i2, j1 * y.cols() + j2) = xij * y(i2, j2);
                }
            }
        }
    }
    return out;
}

inline double max_abs_diff(const CMatrix &x, const CMatrix &y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimMismatchError("max_abs_diff: dimension mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            m = std::max(m, std::abs(x(i, j) - y(i, j)));
        }
    }
    return m;
}

inline double max_abs_diff(const CVector &x, const CVector &y) {
    if (x.dim() != y.dim()) {
        throw DimMismatchError("max_abs_diff: dimension mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

} // namespace hhl::numkit
