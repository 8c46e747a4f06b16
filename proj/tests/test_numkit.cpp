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

#include <doctest.h>

#include "hhl/eigh.hpp"
#include "hhl/numkit.hpp"
#include "support/generators.hpp"

using namespace hhl;
using numkit::CMatrix;
using numkit::CVector;
using numkit::cxd;

namespace {

const cxd kI{0.0, 1.0};

CMatrix pauli_x() { return CMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
CMatrix pauli_y() { return CMatrix{{0.0, -kI}, {kI, 0.0}}; }
CMatrix pauli_z() { return CMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

} // namespace

TEST_SUITE("numkit") {

    TEST_CASE("vector norm and inner products") {
        const CVector v{3.0, 4.0 * kI};
        CHECK(v.norm() == doctest::Approx(5.0));

        const CVector e0 = CVector::basis(2, 0);
        const CVector e1 = CVector::basis(2, 1);
        CHECK(std::abs(numkit::inner(e0, e1)) == 0.0);
        CHECK(numkit::inner(e0, e0) == cxd{1.0, 0.0});

        // inner is conjugate-linear in the first slot
        const CVector w{kI, 0.0};
        CHECK(numkit::inner(w, e0) == cxd{0.0, -1.0});

        CHECK_THROWS_AS(numkit::inner(e0, CVector(3)), DimMismatchError);
    }

    TEST_CASE("dagger conjugate-transposes") {
        const CMatrix m{{0.0, kI}, {0.0, 0.0}};
        const CMatrix md = m.dagger();
        CHECK(md(0, 0) == cxd{0.0, 0.0});
        CHECK(md(0, 1) == cxd{0.0, 0.0});
        CHECK(md(1, 0) == -kI);
        CHECK(md(1, 1) == cxd{0.0, 0.0});
    }

    TEST_CASE("commutator closed forms") {
        const CMatrix x = pauli_x();
        CHECK(numkit::commutator(x, x).max_abs() == 0.0);

        // [X, Y] = 2i Z
        const CMatrix xy = numkit::commutator(x, pauli_y());
        CHECK(numkit::max_abs_diff(xy, 2.0 * kI * pauli_z()) == 0.0);

        // [diag(1,2), X]
        const CMatrix d{{1.0, 0.0}, {0.0, 2.0}};
        const CMatrix expected{{0.0, -1.0}, {1.0, 0.0}};
        CHECK(numkit::max_abs_diff(numkit::commutator(d, x), expected) == 0.0);

        CHECK_THROWS_AS(numkit::commutator(d, CMatrix::identity(3)), DimMismatchError);
    }

    TEST_CASE("commutator antisymmetry is exact") {
        rng::Xoshiro256ss gen(11);
        for (int rep = 0; rep < 20; ++rep) {
            const CMatrix a = testgen::random_gaussian_matrix(4, gen);
            const CMatrix b = testgen::random_gaussian_matrix(4, gen);
            const CMatrix ab = numkit::commutator(a, b);
            const CMatrix ba = numkit::commutator(b, a);
            CHECK(numkit::max_abs_diff(ab, cxd{-1.0, 0.0} * ba) == 0.0);
        }
    }

    TEST_CASE("kron layouts") {
        const CMatrix x = pauli_x();

        const CMatrix ix = numkit::kron(CMatrix::identity(2), x);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                CHECK(ix(i, j) == x(i, j));
                CHECK(ix(2 + i, 2 + j) == x(i, j));
                CHECK(ix(i, 2 + j) == cxd{0.0, 0.0});
            }
        }

        // X (x) X is the anti-diagonal reflection sum_k |k><3-k|
        const CMatrix xx = numkit::kron(x, x);
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(xx(i, j) == (j == 3 - i ? cxd{1.0, 0.0} : cxd{0.0, 0.0}));
            }
        }

        const CMatrix zz = numkit::kron(pauli_z(), pauli_z());
        CHECK(zz(0, 0) == cxd{1.0, 0.0});
        CHECK(zz(1, 1) == cxd{-1.0, 0.0});
        CHECK(zz(2, 2) == cxd{-1.0, 0.0});
        CHECK(zz(3, 3) == cxd{1.0, 0.0});

        CHECK_THROWS_AS(numkit::kron(CMatrix::identity(128), CMatrix::identity(64)),
                        SizeOverflowError);
    }

    TEST_CASE("kron mixed-product property") {
        rng::Xoshiro256ss gen(23);
        for (int rep = 0; rep < 20; ++rep) {
            const CMatrix a = testgen::random_gaussian_matrix(2, gen);
            const CMatrix b = testgen::random_gaussian_matrix(2, gen);
            const CMatrix c = testgen::random_gaussian_matrix(2, gen);
            const CMatrix d = testgen::random_gaussian_matrix(2, gen);
            const CMatrix lhs = numkit::kron(a, b) * numkit::kron(c, d);
            const CMatrix rhs = numkit::kron(a * c, b * d);
            CHECK(numkit::max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, rhs.max_abs()));
        }
    }

    TEST_CASE("eigh on the 2x2 exemplar") {
        const CMatrix a{{1.5, 0.5}, {0.5, 1.5}};
        const auto eig = numkit::eigh(a);
        REQUIRE(eig.eigenvalues.size() == 2);
        CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));

        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const CVector u0 = eig.eigenvector(0);
        const CVector u1 = eig.eigenvector(1);
        CHECK(numkit::max_abs_diff(u0, CVector{inv_sqrt2, -inv_sqrt2}) <= 1e-12);
        CHECK(numkit::max_abs_diff(u1, CVector{inv_sqrt2, inv_sqrt2}) <= 1e-12);

        // residual oracle: A u = lambda u by direct multiplication
        for (std::size_t j = 0; j < 2; ++j) {
            const CVector u = eig.eigenvector(j);
            const CVector residual = a * u - eig.eigenvalues[j] * u;
            CHECK(residual.norm() <= 1e-12);
        }
    }

    TEST_CASE("eigh trivial spectra") {
        const auto eye = numkit::eigh(CMatrix::identity(4));
        for (double lambda : eye.eigenvalues) {
            CHECK(lambda == doctest::Approx(1.0).epsilon(1e-14));
        }
        // columns stay orthonormal
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                const cxd g = numkit::inner(eye.eigenvector(i), eye.eigenvector(j));
                CHECK(std::abs(g - (i == j ? cxd{1.0, 0.0} : cxd{0.0, 0.0})) <= 1e-10);
            }
        }

        const auto diag = numkit::eigh(CMatrix::diagonal({-3.0, 0.0, 7.0}));
        CHECK(diag.eigenvalues[0] == doctest::Approx(-3.0).epsilon(1e-14));
        CHECK(diag.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(diag.eigenvalues[2] == doctest::Approx(7.0).epsilon(1e-14));
        CHECK(std::abs(diag.eigenvectors(0, 0)) == doctest::Approx(1.0));
        CHECK(std::abs(diag.eigenvectors(1, 1)) == doctest::Approx(1.0));
        CHECK(std::abs(diag.eigenvectors(2, 2)) == doctest::Approx(1.0));
    }

    TEST_CASE("eigh rejects non-Hermitian input") {
        const CMatrix bad{{0.0, 1.0}, {0.0, 0.0}};
        CHECK_THROWS_AS(numkit::eigh(bad), NotHermitianError);
    }

    TEST_CASE("eigh reconstruction on random Hermitian matrices") {
        rng::Xoshiro256ss gen(37);
        for (std::size_t n : {2, 3, 5, 8, 16, 32}) {
            const CMatrix a = testgen::random_hermitian(n, gen);
            const auto eig = numkit::eigh(a);

            const CMatrix rebuilt =
                eig.apply_spectral([](double lambda) { return cxd{lambda, 0.0}; });
            const double scale = std::max(1.0, a.max_abs());
            CHECK(numkit::max_abs_diff(rebuilt, a) <= 1e-10 * scale);

            // ascending order and orthonormality
            for (std::size_t j = 0; j + 1 < n; ++j) {
                CHECK(eig.eigenvalues[j] <= eig.eigenvalues[j + 1]);
            }
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i; j < n; ++j) {
                    const cxd g = numkit::inner(eig.eigenvector(i), eig.eigenvector(j));
                    const cxd want = i == j ? cxd{1.0, 0.0} : cxd{0.0, 0.0};
                    CHECK(std::abs(g - want) <= 1e-10);
                }
            }
        }
    }

    TEST_CASE("eigh phase convention is deterministic") {
        rng::Xoshiro256ss gen(41);
        const CMatrix a = testgen::random_hermitian(6, gen);
        const auto e1 = numkit::eigh(a);
        const auto e2 = numkit::eigh(a);
        CHECK(numkit::max_abs_diff(e1.eigenvectors, e2.eigenvectors) == 0.0);
        for (std::size_t j = 0; j < 6; ++j) {
            const CVector u = e1.eigenvector(j);
            for (std::size_t i = 0; i < 6; ++i) {
                if (std::abs(u[i]) > 1e-12) {
                    CHECK(u[i].imag() == doctest::Approx(0.0).epsilon(1e-12));
                    CHECK(u[i].real() > 0.0);
                    break;
                }
            }
        }
    }
}
