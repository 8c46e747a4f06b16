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
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hhl/circuit.hpp"
#include "hhl/parallel.hpp"
#include "hhl/pauli.hpp"
#include "hhl/rng.hpp"

namespace hhl::estimator {

using numkit::CVector;
using numkit::cxd;

/// Shot budget and seeding. Trials are independent repetitions used for
/// sample-statistics; trial t runs with seed `seed + t`.
struct SamplingPlan {
    std::size_t n_shots = 1;
    std::uint64_t seed = 0;
    std::size_t n_trials = 1;
};

struct EstimateWithError {
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
};

/// Measurement record: counts per (ancilla bit, system basis index) in
/// the measurement basis of the sampled Pauli string, plus what is needed
/// to turn outcomes back into eigenvalues.
struct ShotTally {
    std::map<std::pair<int, std::size_t>, std::uint64_t> counts;
    std::size_t n_shots = 0;
    std::uint64_t eigen_mask = 0; // system bits where the Pauli factor is non-identity
    double coefficient = 1.0;

    double eigenvalue(std::size_t system_index) const {
        const int parity = __builtin_popcountll(system_index & eigen_mask) & 1;
        return parity ? -coefficient : coefficient;
    }
};

namespace detail {

inline void apply_1q_raw(CVector &amps, std::size_t q, cxd u00, cxd u01, cxd u10, cxd u11) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t idx = 0; idx < amps.dim(); ++idx) {
        if ((idx & bit) != 0) {
            continue;
        }
        const cxd a0 = amps[idx];
        const cxd a1 = amps[idx | bit];
        amps[idx] = u00 * a0 + u01 * a1;
        amps[idx | bit] = u10 * a0 + u11 * a1;
    }
}

/// Rotates system qubit q into the measurement basis of its Pauli factor:
/// H for X, H S' for Y, nothing for Z or I. The factor list is MSB first,
/// so system qubit q carries factors[size-1-q].
inline void rotate_to_pauli_basis(CVector &amps, const families::PauliString &m) {
    const double s = 1.0 / std::sqrt(2.0);
    const std::size_t n = m.size();
    for (std::size_t q = 0; q < n; ++q) {
        switch (m.factors[n - 1 - q]) {
        case families::Pauli::X:
            apply_1q_raw(amps, q, s, s, s, -s);
            break;
        case families::Pauli::Y:
            apply_1q_raw(amps, q, 1.0, 0.0, 0.0, cxd{0.0, -1.0}); // S'
            apply_1q_raw(amps, q, s, s, s, -s);                   // H
            break;
        default:
            break;
        }
    }
}

inline std::vector<double> cumulative_probabilities(const CVector &amps) {
    std::vector<double> cdf(amps.dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.dim(); ++i) {
        acc += std::norm(amps[i]);
        cdf[i] = acc;
    }
    return cdf;
}

inline std::size_t draw(const std::vector<double> &cdf, rng::Xoshiro256ss &gen) {
    const double total = cdf.back();
    const double u = gen.uniform01() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        std::distance(cdf.begin(), it), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

inline std::uint64_t mask_of(const families::PauliString &m) {
    std::uint64_t mask = 0;
    const std::size_t n = m.size();
    for (std::size_t q = 0; q < n; ++q) {
        if (m.factors[n - 1 - q] != families::Pauli::I) {
            mask |= std::uint64_t{1} << q;
        }
    }
    return mask;
}

inline void require_measurable(const families::PauliString &m, std::size_t n_sys) {
    if (m.size() != n_sys) {
        throw NotPauliStringError("observable length does not match the system register");
    }
    if (std::abs(m.coefficient.imag()) > 1e-12) {
        throw NotPauliStringError("observable coefficient must be real for measurement");
    }
}

} // namespace detail

/// Samples (ancilla, system) outcomes of the pre-measurement state in the
/// measurement basis of the Pauli string `m`; the clock register is
/// marginalized. Given the same generator state the tally is bit
/// identical.
inline ShotTally sample_with_rng(const circuit::FullState &state,
                                 const families::PauliString &m, std::size_t n_shots,
                                 rng::Xoshiro256ss &gen) {
    detail::require_measurable(m, state.n_sys());
    CVector amps = state.amplitudes();
    detail::rotate_to_pauli_basis(amps, m);
    const auto cdf = detail::cumulative_probabilities(amps);

    ShotTally tally;
    tally.n_shots = n_shots;
    tally.eigen_mask = detail::mask_of(m);
    tally.coefficient = m.coefficient.real();
    for (std::size_t shot = 0; shot < n_shots; ++shot) {
        const std::size_t idx = detail::draw(cdf, gen);
        const auto key = std::make_pair(state.ancilla_value(idx), state.system_value(idx));
        ++tally.counts[key];
    }
    return tally;
}

inline ShotTally sample(const circuit::FullState &state, const families::PauliString &m,
                        const SamplingPlan &plan) {
    rng::Xoshiro256ss gen(plan.seed);
    return sample_with_rng(state, m, plan.n_shots, gen);
}

/// Direct Pauli estimate on a bare register state (used for <b|M|b>,
/// which gets its own independent shot budget).
inline EstimateWithError sample_state_expectation(const CVector &psi,
                                                  const families::PauliString &m,
                                                  std::size_t n_shots,
                                                  rng::Xoshiro256ss &gen) {
    if (psi.dim() != (std::size_t{1} << m.size())) {
        throw NotPauliStringError("observable length does not match the state");
    }
    if (std::abs(m.coefficient.imag()) > 1e-12) {
        throw NotPauliStringError("observable coefficient must be real for measurement");
    }
    CVector amps = psi;
    detail::rotate_to_pauli_basis(amps, m);
    const auto cdf = detail::cumulative_probabilities(amps);
    const std::uint64_t mask = detail::mask_of(m);
    const double coeff = m.coefficient.real();

    double sum = 0.0;
    for (std::size_t shot = 0; shot < n_shots; ++shot) {
        const std::size_t idx = detail::draw(cdf, gen);
        const int parity = __builtin_popcountll(idx & mask) & 1;
        sum += parity ? -coeff : coeff;
    }
    const double mean = sum / static_cast<double>(n_shots);
    const double var = std::max(0.0, coeff * coeff - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(n_shots)), n_shots};
}

/// Conditional estimates per ancilla branch plus the success probability.
/// A branch with zero shots is reported absent; `require` converts the
/// absence into an EmptyBranchError for callers that cannot proceed.
struct BranchEstimates {
    std::optional<EstimateWithError> m0;
    std::optional<EstimateWithError> m1;
    EstimateWithError p1;
    std::size_t n0 = 0;
    std::size_t n1 = 0;

    const EstimateWithError &require(int branch) const {
        const auto &opt = branch == 0 ? m0 : m1;
        if (!opt) {
            throw EmptyBranchError(branch, "no shots landed in ancilla branch " +
                                               std::to_string(branch));
        }
        return *opt;
    }
};

inline BranchEstimates estimate_expectations(const ShotTally &tally) {
    if (tally.n_shots == 0 || tally.counts.empty()) {
        throw InvalidArgumentError("estimate_expectations: empty tally");
    }
    double sum[2] = {0.0, 0.0};
    std::uint64_t count[2] = {0, 0};
    for (const auto &[key, c] : tally.counts) {
        const auto &[ancilla, sys] = key;
        sum[ancilla] += tally.eigenvalue(sys) * static_cast<double>(c);
        count[ancilla] += c;
    }

    BranchEstimates out;
    out.n0 = count[0];
    out.n1 = count[1];

    const double n = static_cast<double>(tally.n_shots);
    const double p1 = static_cast<double>(count[1]) / n;
    out.p1 = {p1, std::sqrt(std::max(0.0, p1 * (1.0 - p1)) / n), tally.n_shots};

    const double coeff_sq = tally.coefficient * tally.coefficient;
    for (int branch = 0; branch < 2; ++branch) {
        if (count[branch] == 0) {
            continue;
        }
        const double nb = static_cast<double>(count[branch]);
        const double mean = sum[branch] / nb;
        const double var = std::max(0.0, coeff_sq - mean * mean);
        const EstimateWithError est{mean, std::sqrt(var / nb), count[branch]};
        (branch == 0 ? out.m0 : out.m1) = est;
    }
    return out;
}

/// (Mb - (1 - p1) M0) / p1 with first-order propagation over the three
/// independent estimates:
///   var = (var_Mb + p0^2 var_M0) / p1^2 + ((M0 - Mb) / p1^2)^2 var_p1.
inline EstimateWithError reconstruct_from_samples(const EstimateWithError &mb,
                                                  const EstimateWithError &m0,
                                                  const EstimateWithError &p1) {
    if (!(p1.mean > 0.0)) {
        throw ZeroSuccessProbabilityError("reconstruct_from_samples: p1 estimate is zero");
    }
    const double p0 = 1.0 - p1.mean;
    const double mean = (mb.mean - p0 * m0.mean) / p1.mean;

    const double inv_p1 = 1.0 / p1.mean;
    const double d_mb = inv_p1;
    const double d_m0 = -p0 * inv_p1;
    const double d_p1 = (m0.mean - mb.mean) * inv_p1 * inv_p1;
    const double var = d_mb * d_mb * mb.std * mb.std + d_m0 * d_m0 * m0.std * m0.std +
                       d_p1 * d_p1 * p1.std * p1.std;
    return {mean, std::sqrt(var), p1.n};
}

/// Mean and sample standard deviation of a repeatable experiment over
/// plan.n_trials independent runs; trial t receives seed plan.seed + t.
/// Trials execute concurrently; the aggregate does not depend on the
/// thread count.
inline EstimateWithError trial_statistics(const std::function<double(std::uint64_t)> &experiment,
                                          const SamplingPlan &plan) {
    if (plan.n_trials == 0) {
        throw InvalidArgumentError("trial_statistics: need at least one trial");
    }
    std::vector<double> values(plan.n_trials);
    parallel::parallel_for(plan.n_trials, [&](std::size_t t) {
        values[t] = experiment(plan.seed + static_cast<std::uint64_t>(t));
    });

    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(plan.n_trials);

    double std_dev = 0.0;
    if (plan.n_trials > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - mean) * (v - mean);
        }
        std_dev = std::sqrt(ss / static_cast<double>(plan.n_trials - 1));
    }
    return {mean, std_dev, plan.n_trials};
}

} // namespace hhl::estimator
