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

// Experiment drivers behind the CLI: the builtin toy problem, the
// theta/r statevector sweeps and the sampled shot sweeps, plus CSV and
// run-manifest emission. Everything here is deterministic given the
// configuration and seed; sweep points run on a worker pool and results
// are ordered by parameter after collection.

#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhl/circuit.hpp"
#include "hhl/estimator.hpp"
#include "hhl/families.hpp"
#include "hhl/matrix_io.hpp"
#include "hhl/parallel.hpp"
#include "hhl/spectral.hpp"
#include "hhl/version.hpp"

namespace hhl::experiments {

using numkit::CMatrix;
using numkit::CVector;
using numkit::cxd;

/// The 2x2 exemplar system.
inline CMatrix toy_matrix() { return CMatrix{{1.5, 0.5}, {0.5, 1.5}}; }

/// |b(theta)> = cos(theta/2) |0> + sin(theta/2) |1>
inline CVector toy_b(double theta) {
    return CVector{std::cos(theta / 2.0), std::sin(theta / 2.0)};
}

inline families::PauliString toy_observable() {
    return families::PauliString{{families::Pauli::X}, cxd{1.0, 0.0}};
}

/// Input-state angles: 100 uniform points over [0, 2*pi) by default, or
/// seeded uniform-random angles when `random` is set.
struct ThetaGrid {
    std::size_t count = 100;
    bool random = false;
    std::uint64_t seed = 0;

    std::vector<double> values() const {
        std::vector<double> out(count);
        if (random) {
            rng::Xoshiro256ss gen(seed);
            for (auto &v : out) {
                v = gen.uniform(0.0, numkit::kTwoPi);
            }
        } else {
            for (std::size_t i = 0; i < count; ++i) {
                out[i] = numkit::kTwoPi * static_cast<double>(i) / static_cast<double>(count);
            }
        }
        return out;
    }
};

// ---------------------------------------------------------------------
// statevector sweeps (2-level problem)

struct ThetaSweepRow {
    double theta = 0.0;
    double m_classical = 0.0;
    double m_x1 = 0.0;
    double m_reconstructed = 0.0;
    double p1 = 0.0;
};

/// Runs the circuit per angle and evaluates the observable on the exact
/// branch states: the direct success-branch value, the reconstruction
/// from the failure branch, and the classical reference.
inline std::vector<ThetaSweepRow> theta_sweep(const circuit::CircuitSpec &spec,
                                              const CMatrix &a, const CMatrix &m,
                                              const ThetaGrid &grid) {
    const auto thetas = grid.values();
    std::vector<ThetaSweepRow> rows(thetas.size());
    parallel::parallel_for(thetas.size(), [&](std::size_t i) {
        const CVector b = toy_b(thetas[i]);
        const auto branches =
            circuit::extract_branches(circuit::run_hhl_circuit(spec, a, b));

        ThetaSweepRow row;
        row.theta = thetas[i];
        row.p1 = branches.p1;
        row.m_x1 = spectral::expectation(m, branches.x1_norm);
        const double mb = spectral::expectation(m, b);
        const double m0 = spectral::expectation(m, branches.x0_norm);
        row.m_reconstructed =
            spectral::reconstruct_x1_expectation(mb, m0, branches.p0, branches.p1);
        row.m_classical =
            spectral::expectation(m, spectral::classical_solution(a, b).normalized());
        rows[i] = row;
    });
    return rows;
}

struct RSweepRow {
    int r = 0;
    double p1 = 0.0;
    double fidelity_error = 0.0;
    double observable_error = 0.0;
};

/// Theta-grid averages per rotation parameter r: success probability,
/// 1 - |<x1|x_classical>|^2, and |M_x1 - M_classical|.
inline std::vector<RSweepRow> r_sweep(int r_min, int r_max, const circuit::CircuitSpec &base,
                                      const CMatrix &a, const CMatrix &m,
                                      const ThetaGrid &grid) {
    if (r_min > r_max) {
        throw InvalidArgumentError("r_sweep: empty r range");
    }
    const auto thetas = grid.values();
    const std::size_t n_r = static_cast<std::size_t>(r_max - r_min + 1);
    std::vector<RSweepRow> rows(n_r);

    parallel::parallel_for(n_r, [&](std::size_t ri) {
        circuit::CircuitSpec spec = base;
        spec.r = r_min + static_cast<int>(ri);

        RSweepRow row;
        row.r = spec.r;
        for (double theta : thetas) {
            const CVector b = toy_b(theta);
            const auto branches =
                circuit::extract_branches(circuit::run_hhl_circuit(spec, a, b));
            const CVector x_cl = spectral::classical_solution(a, b).normalized();
            const double overlap = std::abs(numkit::inner(branches.x1_norm, x_cl));
            row.p1 += branches.p1;
            row.fidelity_error += 1.0 - overlap * overlap;
            row.observable_error += std::abs(spectral::expectation(m, branches.x1_norm) -
                                             spectral::expectation(m, x_cl));
        }
        const double n = static_cast<double>(thetas.size());
        row.p1 /= n;
        row.fidelity_error /= n;
        row.observable_error /= n;
        rows[ri] = row;
    });
    return rows;
}

// ---------------------------------------------------------------------
// sampled experiments

/// One seeded repetition: the success-probability estimate, the direct
/// conditional estimate on the a=1 branch, and the reconstruction from
/// the a=0 branch (absent when the needed branch received no shots).
struct TrialOutcome {
    estimator::EstimateWithError p1;
    std::optional<estimator::EstimateWithError> m_direct;
    std::optional<estimator::EstimateWithError> m_rec;
};

/// Runs `n_trials` independent seeded trials against a fixed circuit
/// state. Each trial samples the algorithm output and, with a separate
/// budget from the same stream, the input state for <b|M|b>.
inline std::vector<TrialOutcome> run_sampling_trials(const circuit::CircuitSpec &spec,
                                                     const CMatrix &a, const CVector &b,
                                                     const families::PauliString &m,
                                                     std::size_t n_shots, std::size_t n_trials,
                                                     std::uint64_t base_seed) {
    const circuit::FullState state = circuit::run_hhl_circuit(spec, a, b);
    std::vector<TrialOutcome> outcomes(n_trials);
    parallel::parallel_for(n_trials, [&](std::size_t t) {
        rng::Xoshiro256ss gen(base_seed + static_cast<std::uint64_t>(t));
        const auto tally = estimator::sample_with_rng(state, m, n_shots, gen);
        const auto est = estimator::estimate_expectations(tally);
        const auto mb = estimator::sample_state_expectation(b, m, n_shots, gen);

        TrialOutcome out;
        out.p1 = est.p1;
        out.m_direct = est.m1;
        if (est.m0 && est.p1.mean > 0.0) {
            out.m_rec = estimator::reconstruct_from_samples(mb, *est.m0, est.p1);
        }
        outcomes[t] = out;
    });
    return outcomes;
}

/// Trial-level summary of one sweep point.
struct SweepStats {
    double x = 0.0; // r or n_shots
    double p1_mean = 0.0;
    double p1_rel_std = 0.0;
    std::optional<double> mean_m_direct;
    std::optional<double> std_m_direct;
    std::optional<double> mean_m_rec;
    std::optional<double> std_m_rec;
    /// fraction of trials whose reconstructed within-trial std is at
    /// least the direct one (both present)
    double frac_rec_std_dominates = 0.0;
    std::size_t n_trials = 0;
};

namespace detail {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
};

inline MeanStd mean_std(const std::vector<double> &xs) {
    MeanStd out;
    out.n = xs.size();
    if (xs.empty()) {
        return out;
    }
    for (double x : xs) {
        out.mean += x;
    }
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) {
            ss += (x - out.mean) * (x - out.mean);
        }
        out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

} // namespace detail

inline SweepStats summarize_trials(double x, const std::vector<TrialOutcome> &outcomes) {
    SweepStats stats;
    stats.x = x;
    stats.n_trials = outcomes.size();

    std::vector<double> p1s;
    std::vector<double> directs;
    std::vector<double> recs;
    std::size_t both = 0;
    std::size_t rec_dominates = 0;
    for (const auto &o : outcomes) {
        p1s.push_back(o.p1.mean);
        if (o.m_direct) {
            directs.push_back(o.m_direct->mean);
        }
        if (o.m_rec) {
            recs.push_back(o.m_rec->mean);
        }
        if (o.m_direct && o.m_rec) {
            ++both;
            if (o.m_rec->std >= o.m_direct->std) {
                ++rec_dominates;
            }
        }
    }

    const auto p1_stats = detail::mean_std(p1s);
    stats.p1_mean = p1_stats.mean;
    stats.p1_rel_std = p1_stats.mean > 0.0 ? p1_stats.std / p1_stats.mean : 0.0;

    if (!directs.empty()) {
        const auto d = detail::mean_std(directs);
        stats.mean_m_direct = d.mean;
        stats.std_m_direct = d.std;
    }
    if (!recs.empty()) {
        const auto r = detail::mean_std(recs);
        stats.mean_m_rec = r.mean;
        stats.std_m_rec = r.std;
    }
    stats.frac_rec_std_dominates =
        both > 0 ? static_cast<double>(rec_dominates) / static_cast<double>(both) : 0.0;
    return stats;
}

/// Shot-count sweep at fixed r. Each sweep point gets a disjoint seed
/// block so trials never share a stream across points.
inline std::vector<SweepStats> shots_sweep(const circuit::CircuitSpec &spec, const CMatrix &a,
                                           const CVector &b, const families::PauliString &m,
                                           const std::vector<std::size_t> &shot_counts,
                                           std::size_t n_trials, std::uint64_t seed) {
    std::vector<SweepStats> rows;
    rows.reserve(shot_counts.size());
    std::uint64_t block = seed;
    for (std::size_t shots : shot_counts) {
        const auto outcomes = run_sampling_trials(spec, a, b, m, shots, n_trials, block);
        rows.push_back(summarize_trials(static_cast<double>(shots), outcomes));
        block += n_trials;
    }
    return rows;
}

/// Rotation-parameter sweep at a fixed shot budget.
inline std::vector<SweepStats> r_sampling_sweep(int r_min, int r_max,
                                                const circuit::CircuitSpec &base,
                                                const CMatrix &a, const CVector &b,
                                                const families::PauliString &m,
                                                std::size_t n_shots, std::size_t n_trials,
                                                std::uint64_t seed) {
    if (r_min > r_max) {
        throw InvalidArgumentError("r_sampling_sweep: empty r range");
    }
    std::vector<SweepStats> rows;
    std::uint64_t block = seed;
    for (int r = r_min; r <= r_max; ++r) {
        circuit::CircuitSpec spec = base;
        spec.r = r;
        const auto outcomes = run_sampling_trials(spec, a, b, m, n_shots, n_trials, block);
        rows.push_back(summarize_trials(static_cast<double>(r), outcomes));
        block += n_trials;
    }
    return rows;
}

// ---------------------------------------------------------------------
// solve (exact statevector report, any dimension)

struct SolveReport {
    std::vector<double> eigenvalues;
    double c = 0.0;
    double p0 = 0.0;
    double p1 = 0.0;
    double mb = 0.0;
    double m0 = 0.0;
    double m1 = 0.0;
    double m_reconstructed = 0.0;
    double m_classical = 0.0;
    families::ConditionReport condition;
    /// |<x0|M|x0> - <b|M|b> + <x1|M|x1>| on unnormalized branches; zero
    /// exactly when the postselection-free condition holds.
    double relation_residual = 0.0;
};

inline SolveReport solve_statevector(const CMatrix &a, const CVector &b, const CMatrix &m,
                                     double c_value) {
    const auto problem = spectral::SpectralProblem::create(a, b, c_value);
    const auto branches = spectral::hhl_branches(problem);

    SolveReport report;
    report.eigenvalues = problem.eig().eigenvalues;
    report.c = problem.c();
    report.p0 = branches.p0;
    report.p1 = branches.p1;
    report.mb = spectral::expectation(m, b);
    report.m0 = branches.p0 > 1e-15 ? spectral::expectation(m, branches.x0_norm) : 0.0;
    report.m1 = spectral::expectation(m, branches.x1_norm);
    report.m_reconstructed =
        spectral::reconstruct_x1_expectation(report.mb, report.m0, branches.p0, branches.p1);
    report.m_classical =
        spectral::expectation(m, spectral::classical_solution(a, b).normalized());
    report.condition = families::postselection_free_check(a, m);

    const auto terms = spectral::check_relation_unnormalized(problem, m);
    report.relation_residual = std::abs(terms.lhs - (terms.mb - terms.m1));
    return report;
}

// ---------------------------------------------------------------------
// CSV / manifest output

namespace detail {

inline std::string cell(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string cell(const std::optional<double> &v) { return v ? cell(*v) : ""; }

} // namespace detail

inline void write_csv(const std::filesystem::path &path, const std::string &header,
                      const std::vector<std::vector<std::string>> &rows) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path.string());
    }
    out << header << "\n";
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << row[i] << (i + 1 < row.size() ? "," : "");
        }
        out << "\n";
    }
}

inline void write_theta_csv(const std::filesystem::path &path,
                            const std::vector<ThetaSweepRow> &rows) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto &r : rows) {
        cells.push_back({detail::cell(r.theta), detail::cell(r.m_classical),
                         detail::cell(r.m_x1), detail::cell(r.m_reconstructed),
                         detail::cell(r.p1)});
    }
    write_csv(path, "theta,M_classical,M_x1,M_reconstructed_from_x0,p1", cells);
}

inline void write_r_csv(const std::filesystem::path &path, const std::vector<RSweepRow> &rows) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto &r : rows) {
        cells.push_back({std::to_string(r.r), detail::cell(r.p1),
                         detail::cell(r.fidelity_error), detail::cell(r.observable_error)});
    }
    write_csv(path, "r,p1,fidelity_error,observable_error", cells);
}

inline void write_sweep_csv(const std::filesystem::path &path, const std::string &x_name,
                            const std::vector<SweepStats> &rows) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto &r : rows) {
        cells.push_back({detail::cell(r.x), detail::cell(r.p1_rel_std),
                         detail::cell(r.std_m_direct), detail::cell(r.std_m_rec),
                         detail::cell(r.mean_m_direct), detail::cell(r.mean_m_rec)});
    }
    write_csv(path,
              x_name + ",p1_rel_std,std_M_direct,std_M_reconstructed,mean_M_direct,"
                       "mean_M_reconstructed",
              cells);
}

/// JSON echo of the run configuration; written next to each CSV so every
/// output is reproducible from its manifest alone.
inline void write_manifest(const std::filesystem::path &path, const std::string &command,
                           const nlohmann::json &config) {
    nlohmann::json doc{
        {"tool", "hhl-nopost"}, {"version", kVersion}, {"command", command}, {"config", config}};
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path.string());
    }
    out << doc.dump(2) << "\n";
}

inline nlohmann::json trace_to_json(const circuit::CircuitTrace &trace) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &entry : trace) {
        arr.push_back({{"gate", entry.gate},
                       {"targets", entry.targets},
                       {"controls", entry.controls},
                       {"params", entry.params}});
    }
    return arr;
}

} // namespace hhl::experiments
