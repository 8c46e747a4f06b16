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
#include <optional>
#include <string>
#include <vector>

#include "hhl/eigh.hpp"
#include "hhl/numkit.hpp"
#include "hhl/spectral.hpp"

namespace hhl::circuit {

using numkit::CMatrix;
using numkit::CVector;
using numkit::cxd;

/// How the eigenvalue-controlled ancilla rotation is realized.
///
/// LinearAngle is the layout of the toy circuit: the clock bit of weight
/// 2^m controls Ry(2*pi / (2^r * 2^m)), so the total angle is linear in
/// the clock bits and the |1> amplitude is sin(pi/(2^r * k)) for clock
/// values k with a single set bit. ExactArcsin multiplexes
/// Ry(2*arcsin(C~/k)) over clock values k, which reproduces the C/lambda
/// amplitudes of the branch model exactly for exact encodings.
enum class RotationMode { LinearAngle, ExactArcsin };

inline const char *rotation_mode_name(RotationMode mode) {
    return mode == RotationMode::LinearAngle ? "linear" : "arcsin";
}

/// Register layout and rotation parameters of one circuit instance.
/// The rotation constant is C = 2*pi/2^r unless c_override is set.
struct CircuitSpec {
    std::size_t n_clock = 2;
    std::size_t n_sys = 1;
    int r = 4;
    double t0 = numkit::kTwoPi;
    RotationMode rotation_mode = RotationMode::ExactArcsin;
    std::optional<double> c_override;

    double rotation_constant() const {
        return c_override ? *c_override : numkit::kTwoPi / std::pow(2.0, r);
    }

    /// Rotation constant in clock-encoded units; the multiplexed rotation
    /// must produce amplitude C/lambda = C~/lambda~ with
    /// lambda~ = lambda * t0 / (2*pi).
    double rotation_constant_encoded() const {
        return rotation_constant() * t0 / numkit::kTwoPi;
    }
};

/// Statevector over 1 + n_clock + n_sys qubits.
///
/// Index layout: bit (n_clock + n_sys) is the ancilla (most significant),
/// bits [n_sys, n_sys + n_clock) hold the clock value (bit n_sys + s has
/// weight 2^s, so the clock MSB is the highest of those bits), bits
/// [0, n_sys) hold the system index.
class FullState {
  public:
    FullState(std::size_t n_clock, std::size_t n_sys)
        : n_clock_(n_clock), n_sys_(n_sys) {
        if (n_clock == 0 || n_sys == 0) {
            throw InvalidArgumentError("FullState: need at least one clock and system qubit");
        }
        const std::size_t qubits = 1 + n_clock + n_sys;
        if ((std::size_t{1} << qubits) > numkit::kMaxDim) {
            throw SizeOverflowError("FullState: register exceeds the dense state cap");
        }
        amps_ = CVector(std::size_t{1} << qubits);
        amps_[0] = 1.0;
    }

    std::size_t n_clock() const { return n_clock_; }
    std::size_t n_sys() const { return n_sys_; }
    std::size_t n_qubits() const { return 1 + n_clock_ + n_sys_; }
    std::size_t dim() const { return amps_.dim(); }

    std::size_t system_qubit(std::size_t i) const { return i; }
    std::size_t clock_qubit(std::size_t significance) const { return n_sys_ + significance; }
    std::size_t ancilla_qubit() const { return n_sys_ + n_clock_; }

    cxd &amp(std::size_t idx) { return amps_[idx]; }
    const cxd &amp(std::size_t idx) const { return amps_[idx]; }
    const CVector &amplitudes() const { return amps_; }

    double norm() const { return amps_.norm(); }

    std::size_t clock_value(std::size_t idx) const {
        return (idx >> n_sys_) & ((std::size_t{1} << n_clock_) - 1);
    }
    int ancilla_value(std::size_t idx) const {
        return static_cast<int>(idx >> (n_sys_ + n_clock_));
    }
    std::size_t system_value(std::size_t idx) const {
        return idx & ((std::size_t{1} << n_sys_) - 1);
    }

    /// Loads a normalized system state with ancilla and clock at |0>.
    void set_system_state(const CVector &b) {
        if (b.dim() != (std::size_t{1} << n_sys_)) {
            throw DimMismatchError("set_system_state: dimension mismatch");
        }
        if (std::abs(b.norm() - 1.0) > 1e-12) {
            throw InvalidArgumentError("set_system_state: state must be normalized");
        }
        for (auto &a : amps_) {
            a = 0.0;
        }
        for (std::size_t s = 0; s < b.dim(); ++s) {
            amps_[s] = b[s];
        }
    }

  private:
    std::size_t n_clock_;
    std::size_t n_sys_;
    CVector amps_;
};

namespace detail {

inline void check_qubit(const FullState &state, std::size_t q, const char *who) {
    if (q >= state.n_qubits()) {
        throw IndexOutOfRangeError(std::string(who) + ": qubit index out of range");
    }
}

/// Generic single-qubit gate [[u00, u01], [u10, u11]], optionally
/// conditioned on a control qubit.
inline void apply_1q(FullState &state, std::size_t q, cxd u00, cxd u01, cxd u10, cxd u11,
                     std::optional<std::size_t> control = std::nullopt) {
    const std::size_t bit = std::size_t{1} << q;
    const std::size_t ctrl_bit = control ? (std::size_t{1} << *control) : 0;
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        if ((idx & bit) != 0) {
            continue;
        }
        if (control && (idx & ctrl_bit) == 0) {
            continue;
        }
        const cxd a0 = state.amp(idx);
        const cxd a1 = state.amp(idx | bit);
        state.amp(idx) = u00 * a0 + u01 * a1;
        state.amp(idx | bit) = u10 * a0 + u11 * a1;
    }
}

} // namespace detail

inline void apply_hadamard(FullState &state, std::size_t q) {
    detail::check_qubit(state, q, "apply_hadamard");
    const double s = 1.0 / std::sqrt(2.0);
    detail::apply_1q(state, q, s, s, s, -s);
}

/// Ry(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]
inline void apply_ry(FullState &state, std::size_t q, double theta) {
    detail::check_qubit(state, q, "apply_ry");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    detail::apply_1q(state, q, c, -s, s, c);
}

inline void apply_controlled_ry(FullState &state, std::size_t control, std::size_t target,
                                double theta) {
    detail::check_qubit(state, control, "apply_controlled_ry");
    detail::check_qubit(state, target, "apply_controlled_ry");
    if (control == target) {
        throw InvalidArgumentError("apply_controlled_ry: control equals target");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    detail::apply_1q(state, target, c, -s, s, c, control);
}

/// Phase e^{i theta} on |11>; symmetric in the two qubits.
inline void apply_controlled_phase(FullState &state, std::size_t q1, std::size_t q2,
                                   double theta) {
    detail::check_qubit(state, q1, "apply_controlled_phase");
    detail::check_qubit(state, q2, "apply_controlled_phase");
    if (q1 == q2) {
        throw InvalidArgumentError("apply_controlled_phase: qubits must differ");
    }
    const std::size_t mask = (std::size_t{1} << q1) | (std::size_t{1} << q2);
    const cxd phase{std::cos(theta), std::sin(theta)};
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        if ((idx & mask) == mask) {
            state.amp(idx) *= phase;
        }
    }
}

inline void apply_swap(FullState &state, std::size_t q1, std::size_t q2) {
    detail::check_qubit(state, q1, "apply_swap");
    detail::check_qubit(state, q2, "apply_swap");
    if (q1 == q2) {
        return;
    }
    const std::size_t b1 = std::size_t{1} << q1;
    const std::size_t b2 = std::size_t{1} << q2;
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        if ((idx & b1) != 0 && (idx & b2) == 0) {
            std::swap(state.amp(idx), state.amp((idx & ~b1) | b2));
        }
    }
}

/// Contiguous qubit range [first, first + count); the bit at
/// first + count - 1 is the most significant of the encoded value.
struct QubitRange {
    std::size_t first = 0;
    std::size_t count = 0;
};

inline QubitRange clock_range(const FullState &state) {
    return {state.clock_qubit(0), state.n_clock()};
}

/// QFT over the range with the convention
///   QFT |j> = 2^{-n/2} sum_k exp(2*pi*i*j*k / 2^n) |k>,
/// so an integer phase gradient exp(2*pi*i*k*m/2^n) maps back to the
/// basis state |m> under the inverse transform.
inline void qft(FullState &state, QubitRange range) {
    const std::size_t n = range.count;
    auto qubit = [&](std::size_t significance) { return range.first + significance; };
    for (std::size_t s = n; s-- > 0;) {
        apply_hadamard(state, qubit(s));
        for (std::size_t sp = s; sp-- > 0;) {
            const double angle = numkit::kTwoPi / std::pow(2.0, static_cast<double>(s - sp + 1));
            apply_controlled_phase(state, qubit(sp), qubit(s), angle);
        }
    }
    for (std::size_t s = 0; s < n / 2; ++s) {
        apply_swap(state, qubit(s), qubit(n - 1 - s));
    }
}

inline void qft_inverse(FullState &state, QubitRange range) {
    const std::size_t n = range.count;
    auto qubit = [&](std::size_t significance) { return range.first + significance; };
    for (std::size_t s = 0; s < n / 2; ++s) {
        apply_swap(state, qubit(s), qubit(n - 1 - s));
    }
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t sp = 0; sp < s; ++sp) {
            const double angle = -numkit::kTwoPi / std::pow(2.0, static_cast<double>(s - sp + 1));
            apply_controlled_phase(state, qubit(sp), qubit(s), angle);
        }
        apply_hadamard(state, qubit(s));
    }
}

/// exp(i A t) = sum_j exp(i lambda_j t) |u_j><u_j| for Hermitian A.
inline CMatrix build_unitary_exp(const CMatrix &a, double t) {
    if (!a.is_hermitian(1e-12)) {
        throw NotHermitianError("build_unitary_exp: matrix is not Hermitian within 1e-12");
    }
    return numkit::eigh(a).apply_spectral(
        [t](double lambda) { return cxd{std::cos(lambda * t), std::sin(lambda * t)}; });
}

/// Applies a dense unitary to the whole system register when the control
/// qubit is set. System bits are the least significant, so each block is
/// a contiguous slice of the amplitude vector.
inline void apply_controlled_system_unitary(FullState &state, std::size_t control,
                                            const CMatrix &u) {
    detail::check_qubit(state, control, "apply_controlled_system_unitary");
    const std::size_t sys_dim = std::size_t{1} << state.n_sys();
    if (u.rows() != sys_dim || u.cols() != sys_dim) {
        throw DimMismatchError("apply_controlled_system_unitary: dimension mismatch");
    }
    if (control < state.n_sys()) {
        throw InvalidArgumentError(
            "apply_controlled_system_unitary: control lies inside the system register");
    }
    const std::size_t ctrl_bit = std::size_t{1} << control;
    std::vector<cxd> scratch(sys_dim);
    for (std::size_t base = 0; base < state.dim(); base += sys_dim) {
        if ((base & ctrl_bit) == 0) {
            continue;
        }
        for (std::size_t srow = 0; srow < sys_dim; ++srow) {
            cxd acc{0.0, 0.0};
            for (std::size_t scol = 0; scol < sys_dim; ++scol) {
                acc += u(srow, scol) * state.amp(base + scol);
            }
            scratch[srow] = acc;
        }
        for (std::size_t srow = 0; srow < sys_dim; ++srow) {
            state.amp(base + srow) = scratch[srow];
        }
    }
}

/// One recorded gate application, serializable by the CLI.
struct TraceEntry {
    std::string gate;
    std::vector<std::size_t> targets;
    std::vector<std::size_t> controls;
    std::vector<double> params;
};

using CircuitTrace = std::vector<TraceEntry>;

namespace detail {

inline void record(CircuitTrace *trace, TraceEntry entry) {
    if (trace != nullptr) {
        trace->push_back(std::move(entry));
    }
}

inline void ancilla_rotation(FullState &state, const CircuitSpec &spec, CircuitTrace *trace) {
    const std::size_t ancilla = state.ancilla_qubit();
    if (spec.rotation_mode == RotationMode::LinearAngle) {
        // Clock bit of weight 2^m controls Ry(2*pi / (2^r * 2^m)); at
        // n_clock = 2 these are the two angles of the toy circuit, with
        // the bit encoding lambda~ = 1 carrying the larger one.
        for (std::size_t m = 0; m < state.n_clock(); ++m) {
            const double angle =
                numkit::kTwoPi / (std::pow(2.0, spec.r) * std::pow(2.0, static_cast<double>(m)));
            apply_controlled_ry(state, state.clock_qubit(m), ancilla, angle);
            record(trace, {"cry", {ancilla}, {state.clock_qubit(m)}, {angle}});
        }
        return;
    }

    // Clock-value-multiplexed Ry(2*arcsin(C~/k)). Clock value 0 cannot be
    // inverted and is left untouched; ratios above 1 (possible only for
    // clock values no valid eigenvalue occupies) are clamped.
    const double c_encoded = spec.rotation_constant_encoded();
    const std::size_t n_clock_values = std::size_t{1} << state.n_clock();
    const std::size_t sys_dim = std::size_t{1} << state.n_sys();
    const std::size_t ancilla_bit = std::size_t{1} << ancilla;
    for (std::size_t k = 1; k < n_clock_values; ++k) {
        const double ratio = std::min(1.0, c_encoded / static_cast<double>(k));
        const double theta = 2.0 * std::asin(ratio);
        const double c = std::cos(theta / 2.0);
        const double s = std::sin(theta / 2.0);
        for (std::size_t sys = 0; sys < sys_dim; ++sys) {
            const std::size_t idx0 = (k << state.n_sys()) | sys;
            const std::size_t idx1 = idx0 | ancilla_bit;
            const cxd a0 = state.amp(idx0);
            const cxd a1 = state.amp(idx1);
            state.amp(idx0) = c * a0 - s * a1;
            state.amp(idx1) = s * a0 + c * a1;
        }
        record(trace, {"mux_ry", {ancilla}, {}, {static_cast<double>(k), theta}});
    }
}

} // namespace detail

/// Full toy-architecture run: Hadamards and controlled exp(iAt) powers,
/// inverse QFT (phase estimation), the eigenvalue-controlled ancilla
/// rotation, then the uncompute of the estimation block. Returns the
/// pre-measurement state.
///
/// The clock encodes lambda~ = lambda * t0 / (2*pi): the clock bit of
/// weight 2^m controls exp(i A t0 2^m / 2^n_clock). Every eigenvalue must
/// round into [1, 2^n_clock - 1].
inline FullState run_hhl_circuit(const CircuitSpec &spec, const CMatrix &a, const CVector &b,
                                 CircuitTrace *trace = nullptr) {
    const std::size_t sys_dim = std::size_t{1} << spec.n_sys;
    if (a.rows() != sys_dim || !a.is_square()) {
        throw DimMismatchError("run_hhl_circuit: A must be 2^n_sys square");
    }
    if (spec.rotation_mode == RotationMode::LinearAngle && spec.r < 1) {
        throw InvalidArgumentError("run_hhl_circuit: LinearAngle requires r >= 1");
    }
    if (!(spec.t0 > 0.0)) {
        throw InvalidArgumentError("run_hhl_circuit: t0 must be positive");
    }
    if (!a.is_hermitian(1e-12)) {
        throw NotHermitianError("run_hhl_circuit: A is not Hermitian within 1e-12");
    }

    const auto eig = numkit::eigh(a);
    const auto max_clock = (std::size_t{1} << spec.n_clock) - 1;
    for (double lambda : eig.eigenvalues) {
        const double encoded = lambda * spec.t0 / numkit::kTwoPi;
        const long long rounded = std::llround(encoded);
        if (rounded < 1 || static_cast<std::size_t>(rounded) > max_clock) {
            throw EncodingOverflowError("run_hhl_circuit: eigenvalue " + std::to_string(lambda) +
                                        " encodes to " + std::to_string(encoded) +
                                        ", outside [1, " + std::to_string(max_clock) + "]");
        }
    }

    FullState state(spec.n_clock, spec.n_sys);
    state.set_system_state(b);

    for (std::size_t m = 0; m < spec.n_clock; ++m) {
        apply_hadamard(state, state.clock_qubit(m));
        detail::record(trace, {"h", {state.clock_qubit(m)}, {}, {}});
    }

    const double base_time = spec.t0 / std::pow(2.0, static_cast<double>(spec.n_clock));
    for (std::size_t m = 0; m < spec.n_clock; ++m) {
        const double t = base_time * std::pow(2.0, static_cast<double>(m));
        const CMatrix u = eig.apply_spectral(
            [t](double lambda) { return cxd{std::cos(lambda * t), std::sin(lambda * t)}; });
        apply_controlled_system_unitary(state, state.clock_qubit(m), u);
        detail::record(trace, {"cexp_iAt", {}, {state.clock_qubit(m)}, {t}});
    }

    qft_inverse(state, clock_range(state));
    detail::record(trace, {"qft_inverse", {state.clock_qubit(0)}, {}, {}});

    detail::ancilla_rotation(state, spec, trace);

    // uncompute the estimation block
    qft(state, clock_range(state));
    detail::record(trace, {"qft", {state.clock_qubit(0)}, {}, {}});
    for (std::size_t m = spec.n_clock; m-- > 0;) {
        const double t = base_time * std::pow(2.0, static_cast<double>(m));
        const CMatrix u = eig.apply_spectral(
            [t](double lambda) { return cxd{std::cos(lambda * t), -std::sin(lambda * t)}; });
        apply_controlled_system_unitary(state, state.clock_qubit(m), u);
        detail::record(trace, {"cexp_-iAt", {}, {state.clock_qubit(m)}, {t}});
    }
    for (std::size_t m = spec.n_clock; m-- > 0;) {
        apply_hadamard(state, state.clock_qubit(m));
        detail::record(trace, {"h", {state.clock_qubit(m)}, {}, {}});
    }
    return state;
}

/// Norm of the amplitude component with a nonzero clock value; zero when
/// the uncompute returned the clock register exactly to |0...0>.
inline double clock_residual(const FullState &state) {
    double leak_sq = 0.0;
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        if (state.clock_value(idx) != 0) {
            leak_sq += std::norm(state.amp(idx));
        }
    }
    return std::sqrt(leak_sq);
}

/// Projects the ancilla and strips the clock register, producing the same
/// branch bundle the eigenbasis model emits. Residual clock population
/// above `leak_threshold` aborts: the uncompute did not disentangle the
/// estimation register.
inline spectral::HHLBranches extract_branches(const FullState &state,
                                              double leak_threshold = 1e-6) {
    const double residual = clock_residual(state);
    if (residual > leak_threshold) {
        throw UncomputeLeakError("extract_branches: clock residual " +
                                 std::to_string(residual) + " exceeds threshold " +
                                 std::to_string(leak_threshold));
    }
    const std::size_t sys_dim = std::size_t{1} << state.n_sys();
    spectral::HHLBranches out;
    out.x0_unnorm = CVector(sys_dim);
    out.x1_unnorm = CVector(sys_dim);
    for (std::size_t sys = 0; sys < sys_dim; ++sys) {
        out.x0_unnorm[sys] = state.amp(sys);
        out.x1_unnorm[sys] =
            state.amp(sys | (std::size_t{1} << state.ancilla_qubit()));
    }
    out.p0 = out.x0_unnorm.norm_sq();
    out.p1 = out.x1_unnorm.norm_sq();
    out.x0_norm = spectral::detail::safe_normalize(out.x0_unnorm, out.p0);
    out.x1_norm = spectral::detail::safe_normalize(out.x1_unnorm, out.p1);
    return out;
}

} // namespace hhl::circuit
