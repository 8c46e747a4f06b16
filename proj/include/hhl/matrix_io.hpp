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

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "hhl/numkit.hpp"

namespace hhl::io {

using numkit::CMatrix;
using numkit::CVector;
using numkit::cxd;

/// File schema: {"rows": n, "cols": m, "data": [[re, im], ...]} with the
/// entries in row-major order. Vectors use the same schema with a single
/// column (or a single row).

inline nlohmann::json matrix_to_json(const CMatrix &m) {
    nlohmann::json data = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            data.push_back({m(i, j).real(), m(i, j).imag()});
        }
    }
    return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const nlohmann::json &j, const std::string &context = "matrix") {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
        throw ParseError(context + ": expected object with rows, cols, data");
    }
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto &data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols) {
        throw ParseError(context + ": data must hold rows*cols entries, got " +
                         std::to_string(data.size()) + " for " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
    CMatrix m(rows, cols);
    std::size_t idx = 0;
    for (const auto &entry : data) {
        if (!entry.is_array() || entry.size() != 2) {
            throw ParseError(context + ": data entry " + std::to_string(idx) +
                             " must be a [re, im] pair");
        }
        m(idx / cols, idx % cols) = cxd{entry[0].get<double>(), entry[1].get<double>()};
        ++idx;
    }
    return m;
}

inline nlohmann::json load_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

inline CMatrix load_matrix_json(const std::filesystem::path &path) {
    return matrix_from_json(load_json_file(path), path.string());
}

inline void save_matrix_json(const std::filesystem::path &path, const CMatrix &m) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path.string());
    }
    out << matrix_to_json(m).dump(2) << "\n";
}

inline CVector load_vector_json(const std::filesystem::path &path) {
    const CMatrix m = load_matrix_json(path);
    if (m.cols() != 1 && m.rows() != 1) {
        throw ParseError(path.string() + ": vector file must have a single row or column");
    }
    CVector v(m.rows() * m.cols());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        v[i] = m.cols() == 1 ? m(i, 0) : m(0, i);
    }
    return v;
}

inline void save_vector_json(const std::filesystem::path &path, const CVector &v) {
    CMatrix m(v.dim(), 1);
    for (std::size_t i = 0; i < v.dim(); ++i) {
        m(i, 0) = v[i];
    }
    save_matrix_json(path, m);
}

} // namespace hhl::io
