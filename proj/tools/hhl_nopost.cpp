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

// hhl-nopost: experiment runner for the postselection-free HHL toolkit.
//
// Subcommands
//   solve            exact statevector report for one problem instance
//   theta-sweep      observable values over input angles (CSV)
//   r-sweep          success probability and solution error vs r (CSV)
//   shots-sweep      sampled estimator statistics vs shot count (CSV)
//   std-sweep        sampled estimator statistics vs r (CSV)
//   check-condition  commutator condition test for user matrices

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hhl/experiments.hpp"

namespace {

using hhl::numkit::CMatrix;
using hhl::numkit::CVector;
namespace numkit = hhl::numkit;
namespace families = hhl::families;
namespace spectral = hhl::spectral;
namespace circuit = hhl::circuit;
namespace experiments = hhl::experiments;
namespace io = hhl::io;

struct Options {
    int r = 4;
    double c = 0.0; // 0 means "derive from r"
    std::size_t n_clock = 2;
    double t0 = numkit::kTwoPi;
    std::string mode; // empty means "command default"
    std::size_t shots = 1000000;
    std::size_t trials = 100;
    std::uint64_t seed = 12345;
    std::string matrix_a;
    std::string matrix_m;
    std::string vector_b;
    std::string pauli_a;
    std::string pauli_m;
    std::string out;
    std::string dump_circuit;
    double theta = 0.0;
    std::size_t thetas = 100;
    bool random_theta = false;
    int r_min = 2;
    int r_max = 7;
    bool shift_positive = false;
};

void add_common_options(CLI::App *cmd, Options &opt) {
    cmd->add_option("--r", opt.r, "rotation parameter r, C = 2*pi/2^r (default 4)");
    cmd->add_option("--c", opt.c, "rotation constant C directly (overrides --r)");
    cmd->add_option("--n-clock", opt.n_clock, "clock qubits (default 2)");
    cmd->add_option("--t0", opt.t0, "evolution time t0 (default 2*pi)");
    cmd->add_option("--mode", opt.mode, "ancilla rotation mode: linear|arcsin");
    cmd->add_option("--shots", opt.shots, "shots per estimate (default 1e6)");
    cmd->add_option("--trials", opt.trials, "independent trials (default 100)");
    cmd->add_option("--seed", opt.seed, "base RNG seed; trial t uses seed+t");
    cmd->add_option("--matrix-a", opt.matrix_a, "input matrix A (JSON)");
    cmd->add_option("--matrix-m", opt.matrix_m, "observable M (JSON)");
    cmd->add_option("--vector-b", opt.vector_b, "input state b (JSON)");
    cmd->add_option("--pauli-a", opt.pauli_a, "input matrix A (Pauli polynomial text)");
    cmd->add_option("--pauli-m", opt.pauli_m, "observable M (Pauli polynomial text)");
    cmd->add_option("--out", opt.out, "output directory for CSV and manifest");
    cmd->add_option("--theta", opt.theta, "input angle for single-instance commands");
    cmd->add_option("--thetas", opt.thetas, "number of theta grid points (default 100)");
    cmd->add_flag("--random-theta", opt.random_theta,
                  "sample thetas uniformly at random instead of a uniform grid");
    cmd->add_option("--r-min", opt.r_min, "sweep start (default 2)");
    cmd->add_option("--r-max", opt.r_max, "sweep end (default 7)");
    cmd->add_flag("--shift-positive", opt.shift_positive,
                  "shift A by a multiple of I to make its spectrum positive");
}

circuit::RotationMode parse_mode(const std::string &mode, circuit::RotationMode fallback) {
    if (mode.empty()) {
        return fallback;
    }
    if (mode == "linear") {
        return circuit::RotationMode::LinearAngle;
    }
    if (mode == "arcsin") {
        return circuit::RotationMode::ExactArcsin;
    }
    throw hhl::InvalidArgumentError("unknown --mode '" + mode + "' (expected linear|arcsin)");
}

CMatrix resolve_matrix_a(const Options &opt) {
    CMatrix a;
    if (!opt.pauli_a.empty()) {
        a = families::load_pauli_polynomial(opt.pauli_a).to_matrix();
    } else if (!opt.matrix_a.empty()) {
        a = io::load_matrix_json(opt.matrix_a);
    } else {
        a = experiments::toy_matrix();
    }
    if (opt.shift_positive) {
        a = families::shift_positive(a);
    }
    return a;
}

CMatrix resolve_matrix_m(const Options &opt, std::size_t dim) {
    if (!opt.pauli_m.empty()) {
        return families::load_pauli_polynomial(opt.pauli_m).to_matrix();
    }
    if (!opt.matrix_m.empty()) {
        return io::load_matrix_json(opt.matrix_m);
    }
    std::size_t n_qubits = 0;
    while ((std::size_t{1} << n_qubits) < dim) {
        ++n_qubits;
    }
    if ((std::size_t{1} << n_qubits) != dim) {
        throw hhl::InvalidArgumentError(
            "no observable given and the dimension is not a power of two; pass --matrix-m");
    }
    return families::pauli_power(families::Pauli::X, n_qubits).to_matrix();
}

/// Sampled commands measure Pauli strings only; general --matrix-m files
/// are a statevector-mode feature.
families::PauliString resolve_pauli_m(const Options &opt, std::size_t n_qubits) {
    if (!opt.matrix_m.empty()) {
        throw hhl::NotPauliStringError(
            "sampled commands measure Pauli strings; pass --pauli-m instead of --matrix-m");
    }
    if (opt.pauli_m.empty()) {
        return families::pauli_power(families::Pauli::X, n_qubits);
    }
    const auto poly = families::load_pauli_polynomial(opt.pauli_m);
    if (poly.terms.size() != 1) {
        throw hhl::NotPauliStringError("--pauli-m must contain exactly one term for sampling");
    }
    return poly.terms.front();
}

CVector resolve_vector_b(const Options &opt, std::size_t dim) {
    if (opt.vector_b.empty()) {
        if (dim != 2) {
            throw hhl::InvalidArgumentError("pass --vector-b for systems larger than 2x2");
        }
        return experiments::toy_b(opt.theta);
    }
    CVector b = io::load_vector_json(opt.vector_b);
    if (b.dim() != dim) {
        throw hhl::DimMismatchError("--vector-b dimension does not match A");
    }
    if (std::abs(b.norm() - 1.0) > 1e-6) {
        throw hhl::InvalidArgumentError("--vector-b must be normalized (within 1e-6)");
    }
    return b.normalized();
}

double resolve_c(const Options &opt) {
    return opt.c > 0.0 ? opt.c : numkit::kTwoPi / std::pow(2.0, opt.r);
}

std::filesystem::path output_dir(const Options &opt) {
    const std::filesystem::path dir = opt.out.empty() ? "." : opt.out;
    std::filesystem::create_directories(dir);
    return dir;
}

nlohmann::json config_json(const Options &opt, circuit::RotationMode mode) {
    return nlohmann::json{{"r", opt.r},
                          {"c", resolve_c(opt)},
                          {"n_clock", opt.n_clock},
                          {"t0", opt.t0},
                          {"mode", circuit::rotation_mode_name(mode)},
                          {"shots", opt.shots},
                          {"trials", opt.trials},
                          {"seed", opt.seed},
                          {"theta", opt.theta},
                          {"thetas", opt.thetas},
                          {"random_theta", opt.random_theta},
                          {"r_min", opt.r_min},
                          {"r_max", opt.r_max},
                          {"matrix_a", opt.matrix_a},
                          {"matrix_m", opt.matrix_m},
                          {"vector_b", opt.vector_b},
                          {"pauli_a", opt.pauli_a},
                          {"pauli_m", opt.pauli_m},
                          {"shift_positive", opt.shift_positive}};
}

circuit::CircuitSpec circuit_spec(const Options &opt, circuit::RotationMode mode,
                                  std::size_t n_sys) {
    circuit::CircuitSpec spec;
    spec.n_clock = opt.n_clock;
    spec.n_sys = n_sys;
    spec.r = opt.r;
    spec.t0 = opt.t0;
    spec.rotation_mode = mode;
    if (opt.c > 0.0) {
        spec.c_override = opt.c;
    }
    return spec;
}

experiments::ThetaGrid theta_grid(const Options &opt) {
    return {opt.thetas, opt.random_theta, opt.seed};
}

int run_solve(const Options &opt) {
    const CMatrix a = resolve_matrix_a(opt);
    const CVector b = resolve_vector_b(opt, a.rows());
    const CMatrix m = resolve_matrix_m(opt, a.rows());
    const double c = resolve_c(opt);

    const auto report = experiments::solve_statevector(a, b, m, c);

    std::cout << std::setprecision(10);
    std::cout << "eigenvalues =";
    for (double lambda : report.eigenvalues) {
        std::cout << " " << lambda;
    }
    std::cout << "\nC    = " << report.c;
    std::cout << "\np0   = " << report.p0 << "\np1   = " << report.p1;
    std::cout << "\nM_b  = " << report.mb << "\nM_x0 = " << report.m0;
    std::cout << "\nM_x1 = " << report.m1;
    std::cout << "\nM_reconstructed = " << report.m_reconstructed;
    std::cout << "\nM_classical     = " << report.m_classical;
    std::cout << "\ncondition: |[M,A]| = " << report.condition.norm_inner
              << ", |[[M,A],A]| = " << report.condition.norm_double
              << ", postselection-free: " << (report.condition.is_free ? "yes" : "no");
    std::cout << "\nrelation residual (unnormalized) = " << report.relation_residual << "\n";

    if (!opt.dump_circuit.empty()) {
        const auto mode = parse_mode(opt.mode, circuit::RotationMode::ExactArcsin);
        std::size_t n_sys = 0;
        while ((std::size_t{1} << n_sys) < a.rows()) {
            ++n_sys;
        }
        circuit::CircuitTrace trace;
        circuit::run_hhl_circuit(circuit_spec(opt, mode, n_sys), a, b, &trace);
        std::ofstream trace_out(opt.dump_circuit);
        trace_out << experiments::trace_to_json(trace).dump(2) << "\n";
        std::cout << "circuit trace written to " << opt.dump_circuit << "\n";
    }

    if (!opt.out.empty()) {
        const auto dir = output_dir(opt);
        const auto mode = parse_mode(opt.mode, circuit::RotationMode::ExactArcsin);
        nlohmann::json result{{"eigenvalues", report.eigenvalues},
                              {"c", report.c},
                              {"p0", report.p0},
                              {"p1", report.p1},
                              {"M_b", report.mb},
                              {"M_x0", report.m0},
                              {"M_x1", report.m1},
                              {"M_reconstructed", report.m_reconstructed},
                              {"M_classical", report.m_classical},
                              {"norm_inner", report.condition.norm_inner},
                              {"norm_double", report.condition.norm_double},
                              {"is_free", report.condition.is_free},
                              {"relation_residual", report.relation_residual}};
        std::ofstream result_out(dir / "solve.json");
        result_out << result.dump(2) << "\n";
        experiments::write_manifest(dir / "solve_manifest.json", "solve",
                                    config_json(opt, mode));
    }
    return 0;
}

CMatrix two_level_matrix(const Options &opt) {
    const CMatrix a = resolve_matrix_a(opt);
    if (a.rows() != 2) {
        throw hhl::InvalidArgumentError("theta/r sweeps drive a 2-level problem; A must be 2x2");
    }
    return a;
}

int run_theta_sweep(const Options &opt) {
    const CMatrix a = two_level_matrix(opt);
    const CMatrix m = resolve_matrix_m(opt, 2);
    const auto mode = parse_mode(opt.mode, circuit::RotationMode::ExactArcsin);
    const auto rows = experiments::theta_sweep(circuit_spec(opt, mode, 1), a, m,
                                               theta_grid(opt));

    double max_gap = 0.0;
    for (const auto &row : rows) {
        max_gap = std::max(max_gap, std::abs(row.m_x1 - row.m_classical));
    }

    const auto dir = output_dir(opt);
    experiments::write_theta_csv(dir / "theta_sweep.csv", rows);
    experiments::write_manifest(dir / "theta_sweep_manifest.json", "theta-sweep",
                                config_json(opt, mode));
    std::cout << "theta-sweep: " << rows.size() << " rows, max |M_x1 - M_classical| = "
              << max_gap << "\nwrote " << (dir / "theta_sweep.csv").string() << "\n";
    return 0;
}

int run_r_sweep(const Options &opt) {
    const CMatrix a = two_level_matrix(opt);
    const CMatrix m = resolve_matrix_m(opt, 2);
    const auto mode = parse_mode(opt.mode, circuit::RotationMode::LinearAngle);
    const auto rows = experiments::r_sweep(opt.r_min, opt.r_max, circuit_spec(opt, mode, 1),
                                           a, m, theta_grid(opt));

    const auto dir = output_dir(opt);
    experiments::write_r_csv(dir / "r_sweep.csv", rows);
    experiments::write_manifest(dir / "r_sweep_manifest.json", "r-sweep",
                                config_json(opt, mode));
    std::cout << "r-sweep: r in [" << opt.r_min << ", " << opt.r_max << "], "
              << circuit::rotation_mode_name(mode) << " mode\nwrote "
              << (dir / "r_sweep.csv").string() << "\n";
    return 0;
}

std::vector<std::size_t> shot_ladder(std::size_t max_shots) {
    std::vector<std::size_t> shots;
    for (std::size_t s = 1000; s < max_shots; s *= 10) {
        shots.push_back(s);
    }
    if (shots.empty() || shots.back() != max_shots) {
        shots.push_back(max_shots);
    }
    return shots;
}

int run_shots_sweep(const Options &opt) {
    const CMatrix a = two_level_matrix(opt);
    const CVector b = resolve_vector_b(opt, 2);
    const auto m = resolve_pauli_m(opt, 1);
    const auto mode = parse_mode(opt.mode, circuit::RotationMode::LinearAngle);

    const auto rows = experiments::shots_sweep(circuit_spec(opt, mode, 1), a, b, m,
                                               shot_ladder(opt.shots), opt.trials, opt.seed);
    const auto dir = output_dir(opt);
    experiments::write_sweep_csv(dir / "shots_sweep.csv", "n_shots", rows);
    experiments::write_manifest(dir / "shots_sweep_manifest.json", "shots-sweep",
                                config_json(opt, mode));
    std::cout << "shots-sweep: " << rows.size() << " shot counts x " << opt.trials
              << " trials\nwrote " << (dir / "shots_sweep.csv").string() << "\n";
    return 0;
}

int run_std_sweep(const Options &opt) {
    const CMatrix a = two_level_matrix(opt);
    const CVector b = resolve_vector_b(opt, 2);
    const auto m = resolve_pauli_m(opt, 1);
    const auto mode = parse_mode(opt.mode, circuit::RotationMode::LinearAngle);

    // r = 7 and above starves the a=1 branch at realistic budgets
    const int r_hi = std::min(opt.r_max, 6);
    const auto rows = experiments::r_sampling_sweep(opt.r_min, r_hi,
                                                    circuit_spec(opt, mode, 1), a, b, m,
                                                    opt.shots, opt.trials, opt.seed);
    const auto dir = output_dir(opt);
    experiments::write_sweep_csv(dir / "std_sweep.csv", "r", rows);
    experiments::write_manifest(dir / "std_sweep_manifest.json", "std-sweep",
                                config_json(opt, mode));
    std::cout << "std-sweep: r in [" << opt.r_min << ", " << r_hi << "] at " << opt.shots
              << " shots x " << opt.trials << " trials\nwrote "
              << (dir / "std_sweep.csv").string() << "\n";
    return 0;
}

int run_check_condition(const Options &opt) {
    const CMatrix a = resolve_matrix_a(opt);
    const CMatrix m = resolve_matrix_m(opt, a.rows());
    const auto report = families::postselection_free_check(a, m);

    std::cout << std::setprecision(10);
    std::cout << "|[M,A]|_max     = " << report.norm_inner << "\n"
              << "|[[M,A],A]|_max = " << report.norm_double << "\n"
              << "scale           = " << report.scale << "\n"
              << "postselection-free: " << (report.is_free ? "yes" : "no") << "\n";

    if (report.is_free) {
        const auto eig = numkit::eigh(a);
        if (eig.min_eigenvalue() <= 0.0) {
            std::cout << "spectrum not positive; skipping the relation residual "
                         "(rerun with --shift-positive)\n";
        } else {
            CVector probe;
            if (!opt.vector_b.empty()) {
                probe = resolve_vector_b(opt, a.rows());
            } else {
                probe = CVector(a.rows());
                for (std::size_t i = 0; i < probe.dim(); ++i) {
                    probe[i] = 1.0;
                }
                probe = probe.normalized();
            }
            const double c = opt.c > 0.0 ? opt.c : eig.min_eigenvalue();
            const auto problem = spectral::SpectralProblem::create(a, probe, c);
            const auto terms = spectral::check_relation_unnormalized(problem, m);
            std::cout << "relation residual |<x0|M|x0> - <b|M|b> + <x1|M|x1>| = "
                      << std::abs(terms.lhs - (terms.mb - terms.m1)) << " (C = " << c
                      << ")\n";
        }
    } else {
        const double c = resolve_c(opt);
        std::cout << "K term scale: |[[M,A],A]|/(2 C^2) = "
                  << report.norm_double / (2.0 * c * c) << " (C = " << c << ")\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"postselection-free HHL toolkit"};
    app.require_subcommand(1);

    Options opt;
    auto *solve = app.add_subcommand("solve", "exact statevector report for one instance");
    solve->add_option("--dump-circuit", opt.dump_circuit, "write the gate trace as JSON");
    auto *theta = app.add_subcommand("theta-sweep", "observable values over input angles");
    auto *rsweep = app.add_subcommand("r-sweep", "precision and success probability vs r");
    auto *shots = app.add_subcommand("shots-sweep", "sampled estimators vs shot count");
    auto *stds = app.add_subcommand("std-sweep", "sampled estimators vs r at fixed shots");
    auto *check = app.add_subcommand("check-condition", "commutator condition test");
    for (auto *cmd : {solve, theta, rsweep, shots, stds, check}) {
        add_common_options(cmd, opt);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            return run_solve(opt);
        }
        if (theta->parsed()) {
            return run_theta_sweep(opt);
        }
        if (rsweep->parsed()) {
            return run_r_sweep(opt);
        }
        if (shots->parsed()) {
            return run_shots_sweep(opt);
        }
        if (stds->parsed()) {
            return run_std_sweep(opt);
        }
        if (check->parsed()) {
            return run_check_condition(opt);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
