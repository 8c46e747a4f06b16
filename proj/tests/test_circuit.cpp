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

#include <cmath>

#include "hhl/circuit.hpp"
#include "hhl/spectral.hpp"
#include "support/generators.hpp"

using namespace hhl;
using circuit::CircuitSpec;
using circuit::FullState;
using circuit::RotationMode;
using numkit::CMatrix;
using numkit::CVector;
using numkit::cxd;

namespace {

CMatrix toy_a() { return CMatrix{{1.5, 0.5}, {0.5, 1.5}}; }

CVector toy_b(double theta) {
    return CVector{std::cos(theta / 2.0), std::sin(theta / 2.0)};
}

void fill_random(FullState &state, rng::Xoshiro256ss &gen) {
    CVector v = testgen::random_state(state.dim(), gen);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        state.amp(i) = v[i];
    }
}

double state_diff(const FullState &a, const FullState &b) {
    return numkit::max_abs_diff(a.amplitudes(), b.amplitudes());
}

} // namespace

TEST_SUITE("circuit") {

    TEST_CASE("hadamard is an involution") {
        rng::Xoshiro256ss gen(61);
        FullState state(2, 1);
        fill_random(state, gen);
        const FullState before = state;
        circuit::apply_hadamard(state, 2);
        circuit::apply_hadamard(state, 2);
        CHECK(state_diff(state, before) <= 1e-14);
    }

    TEST_CASE("controlled rotation with inactive control is the identity") {
        FullState state(2, 1);
        CVector b{0.0, 1.0};
        state.set_system_state(b); // clock = 0, so any clock-controlled gate idles
        const FullState before = state;
        circuit::apply_controlled_ry(state, state.clock_qubit(0), state.ancilla_qubit(),
                                     numkit::kPi);
        CHECK(state_diff(state, before) == 0.0);
    }

    TEST_CASE("gate index validation") {
        FullState state(2, 1);
        CHECK_THROWS_AS(circuit::apply_hadamard(state, 9), IndexOutOfRangeError);
        CHECK_THROWS_AS(circuit::apply_controlled_ry(state, 1, 1, 0.5), InvalidArgumentError);
        CHECK_THROWS_AS(circuit::apply_controlled_phase(state, 0, 12, 0.5),
                        IndexOutOfRangeError);
    }

    TEST_CASE("inverse QFT maps an integer phase gradient to a basis state") {
        // uniform clock superposition with phases e^{2 pi i k/4} -> |01>
        FullState state(2, 1);
        state.amp(0) = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            const double phase = numkit::kTwoPi * static_cast<double>(k) / 4.0;
            state.amp(k << 1) = 0.5 * cxd{std::cos(phase), std::sin(phase)};
        }
        circuit::qft_inverse(state, circuit::clock_range(state));
        CHECK(std::abs(state.amp(std::size_t{1} << 1) - cxd{1.0, 0.0}) <= 1e-14);
        CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }

    TEST_CASE("QFT matches the Fourier matrix on clock basis states") {
        for (std::size_t nc : {std::size_t{2}, std::size_t{3}}) {
            const std::size_t n_values = std::size_t{1} << nc;
            for (std::size_t j = 0; j < n_values; ++j) {
                FullState state(nc, 1);
                state.amp(0) = 0.0;
                state.amp(j << 1) = 1.0;
                circuit::qft(state, circuit::clock_range(state));
                for (std::size_t k = 0; k < n_values; ++k) {
                    const double angle =
                        numkit::kTwoPi * static_cast<double>(j * k) / n_values;
                    const cxd want =
                        cxd{std::cos(angle), std::sin(angle)} / std::sqrt(double(n_values));
                    CHECK(std::abs(state.amp(k << 1) - want) <= 1e-13);
                }
            }
        }
    }

    TEST_CASE("QFT and its inverse cancel on entangled states") {
        rng::Xoshiro256ss gen(71);
        FullState state(3, 2);
        fill_random(state, gen);
        const FullState before = state;
        circuit::qft(state, circuit::clock_range(state));
        circuit::qft_inverse(state, circuit::clock_range(state));
        CHECK(state_diff(state, before) <= 1e-13);
    }

    TEST_CASE("matrix exponential of the spectrum") {
        const CMatrix z{{1.0, 0.0}, {0.0, -1.0}};
        const CMatrix u = circuit::build_unitary_exp(z, numkit::kPi);
        CHECK(numkit::max_abs_diff(u, -1.0 * CMatrix::identity(2)) <= 1e-14);

        rng::Xoshiro256ss gen(83);
        const CMatrix h = testgen::random_hermitian(4, gen);
        CHECK(numkit::max_abs_diff(circuit::build_unitary_exp(h, 0.0), CMatrix::identity(4)) <=
              1e-12);

        const CMatrix ut = circuit::build_unitary_exp(h, 0.7);
        CHECK(numkit::max_abs_diff(ut * ut.dagger(), CMatrix::identity(4)) <= 1e-10);

        // toy eigenphases at t = pi: -1 on u(1), +1 on u(2)
        const CMatrix toy_u = circuit::build_unitary_exp(toy_a(), numkit::kPi);
        const double s = 1.0 / std::sqrt(2.0);
        const CVector u1{s, -s};
        const CVector u2{s, s};
        CHECK(numkit::max_abs_diff(toy_u * u1, cxd{-1.0, 0.0} * u1) <= 1e-12);
        CHECK(numkit::max_abs_diff(toy_u * u2, u2) <= 1e-12);

        CHECK_THROWS_AS(circuit::build_unitary_exp(CMatrix{{0.0, 1.0}, {0.0, 0.0}}, 1.0),
                        NotHermitianError);
    }

    TEST_CASE("controlled system unitary against a dense oracle") {
        rng::Xoshiro256ss gen(97);
        FullState state(1, 2);
        fill_random(state, gen);
        const CMatrix u = testgen::random_unitary(4, gen);

        const std::size_t ctrl = state.ancilla_qubit();
        CVector before(state.dim());
        for (std::size_t idx = 0; idx < state.dim(); ++idx) {
            before[idx] = state.amp(idx);
        }
        CVector expected(state.dim());
        for (std::size_t idx = 0; idx < state.dim(); ++idx) {
            if ((idx >> ctrl) & 1) {
                const std::size_t base = idx & ~std::size_t{3};
                cxd acc{0.0, 0.0};
                for (std::size_t col = 0; col < 4; ++col) {
                    acc += u(idx & 3, col) * before[base + col];
                }
                expected[idx] = acc;
            } else {
                expected[idx] = before[idx];
            }
        }

        circuit::apply_controlled_system_unitary(state, ctrl, u);
        CHECK(numkit::max_abs_diff(state.amplitudes(), expected) <= 1e-13);
    }

    TEST_CASE("toy circuit reproduces the eigenbasis branch model exactly") {
        const CircuitSpec spec{2, 1, 4, numkit::kTwoPi, RotationMode::ExactArcsin, {}};
        for (double theta : {0.0, 0.31, numkit::kPi / 2.0, 2.2, 4.9}) {
            const CVector b = toy_b(theta);
            const FullState state = circuit::run_hhl_circuit(spec, toy_a(), b);
            CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(circuit::clock_residual(state) <= 1e-10);

            const auto circ = circuit::extract_branches(state);
            const auto model = spectral::hhl_branches(
                spectral::SpectralProblem::create_with_r(toy_a(), b, spec.r));

            CHECK(numkit::max_abs_diff(circ.x0_unnorm, model.x0_unnorm) <= 1e-10);
            CHECK(numkit::max_abs_diff(circ.x1_unnorm, model.x1_unnorm) <= 1e-10);
            CHECK(circ.p0 == doctest::Approx(model.p0).epsilon(1e-10));
            CHECK(circ.p1 == doctest::Approx(model.p1).epsilon(1e-10));
        }
    }

    TEST_CASE("uniform eigenvalue with C = lambda rotates the ancilla fully") {
        CircuitSpec spec{2, 1, 4, numkit::kTwoPi, RotationMode::ExactArcsin, {}};
        spec.c_override = 2.0;
        const CVector b{0.6, 0.8};
        const auto state = circuit::run_hhl_circuit(spec, CMatrix::diagonal({2.0, 2.0}), b);
        const auto br = circuit::extract_branches(state);
        CHECK(br.p1 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(br.p0 == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(numkit::max_abs_diff(br.x1_norm, b) <= 1e-12);
    }

    TEST_CASE("linear-angle mode approaches the branch model as r grows") {
        const CVector b = toy_b(0.0);
        const auto model = spectral::hhl_branches(
            spectral::SpectralProblem::create_with_r(toy_a(), b, 6));

        const CircuitSpec spec{2, 1, 6, numkit::kTwoPi, RotationMode::LinearAngle, {}};
        const auto br = circuit::extract_branches(circuit::run_hhl_circuit(spec, toy_a(), b));
        const double fidelity = std::abs(numkit::inner(br.x1_norm, model.x1_norm));
        CHECK(fidelity >= 1.0 - 1e-3);
    }

    TEST_CASE("circuit input validation") {
        CircuitSpec linear{2, 1, 0, numkit::kTwoPi, RotationMode::LinearAngle, {}};
        CHECK_THROWS_AS(circuit::run_hhl_circuit(linear, toy_a(), toy_b(0.0)),
                        InvalidArgumentError); // r = 0 with linear angles

        const CircuitSpec spec{2, 1, 4, numkit::kTwoPi, RotationMode::ExactArcsin, {}};
        CHECK_THROWS_AS(circuit::run_hhl_circuit(spec, CMatrix::identity(3), toy_b(0.0)),
                        DimMismatchError);
        CHECK_THROWS_AS(
            circuit::run_hhl_circuit(spec, CMatrix{{1.0, 1.0}, {0.0, 1.0}}, toy_b(0.0)),
            NotHermitianError);

        FullState state(2, 1);
        CHECK_THROWS_AS(state.set_system_state(CVector{1.0, 1.0}), InvalidArgumentError);
        CHECK_THROWS_AS(state.set_system_state(CVector{1.0, 0.0, 0.0}), DimMismatchError);
    }

    TEST_CASE("eigenvalues must round into the clock window") {
        const CircuitSpec spec{2, 1, 4, numkit::kTwoPi, RotationMode::ExactArcsin, {}};
        CHECK_THROWS_AS(
            circuit::run_hhl_circuit(spec, CMatrix::diagonal({1.0, 4.0}), CVector{1.0, 0.0}),
            EncodingOverflowError);
        CHECK_THROWS_AS(
            circuit::run_hhl_circuit(spec, CMatrix::diagonal({0.1, 1.0}), CVector{1.0, 0.0}),
            EncodingOverflowError);
    }

    TEST_CASE("branch extraction of a separable state") {
        const double alpha = 0.6;
        const double beta = 0.8;
        const CVector psi{1.0 / std::sqrt(2.0), cxd{0.0, 1.0 / std::sqrt(2.0)}};
        FullState state(2, 1);
        state.amp(0) = 0.0;
        for (std::size_t s = 0; s < 2; ++s) {
            state.amp(s) = alpha * psi[s];
            state.amp(s | (std::size_t{1} << state.ancilla_qubit())) = beta * psi[s];
        }
        const auto br = circuit::extract_branches(state);
        CHECK(br.p1 == doctest::Approx(beta * beta).epsilon(1e-14));
        CHECK(std::abs(numkit::inner(br.x0_norm, psi)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(numkit::inner(br.x1_norm, psi)) == doctest::Approx(1.0).epsilon(1e-14));
    }

    TEST_CASE("clock leakage trips the uncompute guard") {
        FullState state(2, 1);
        state.amp(0) = std::sqrt(1.0 - 1e-6);
        state.amp(std::size_t{1} << 1) = 1e-3; // clock value 1
        CHECK(circuit::clock_residual(state) == doctest::Approx(1e-3));
        CHECK_THROWS_AS(circuit::extract_branches(state), UncomputeLeakError);
        CHECK_NOTHROW(circuit::extract_branches(state, 1e-2));
    }

    TEST_CASE("circuit trace records the gate sequence") {
        const CircuitSpec spec{2, 1, 4, numkit::kTwoPi, RotationMode::LinearAngle, {}};
        circuit::CircuitTrace trace;
        circuit::run_hhl_circuit(spec, toy_a(), toy_b(1.0), &trace);
        REQUIRE(!trace.empty());
        CHECK(trace.front().gate == "h");
        std::size_t cry_count = 0;
        for (const auto &entry : trace) {
            if (entry.gate == "cry") {
                ++cry_count;
            }
        }
        CHECK(cry_count == 2);
    }
}
