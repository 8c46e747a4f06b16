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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hhl/matrix_io.hpp"
#include "hhl/rng.hpp"
#include "support/generators.hpp"

using namespace hhl;
using numkit::CMatrix;
using numkit::CVector;
using numkit::cxd;

namespace {

std::filesystem::path temp_file(const std::string &name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_SUITE("io") {

    TEST_CASE("matrix json round trip") {
        rng::Xoshiro256ss gen(5);
        const CMatrix m = testgen::random_gaussian_matrix(5, gen);
        const auto path = temp_file("hhl_io_matrix.json");
        io::save_matrix_json(path, m);
        const CMatrix loaded = io::load_matrix_json(path);
        CHECK(numkit::max_abs_diff(m, loaded) == 0.0);
        std::filesystem::remove(path);
    }

    TEST_CASE("vector json round trip and row orientation") {
        const CVector v{cxd{1.0, -2.0}, cxd{0.0, 3.5}, cxd{-4.0, 0.0}};
        const auto path = temp_file("hhl_io_vector.json");
        io::save_vector_json(path, v);
        CHECK(numkit::max_abs_diff(io::load_vector_json(path), v) == 0.0);

        {
            std::ofstream out(path);
            out << R"({"rows": 1, "cols": 2, "data": [[1.0, 0.0], [0.0, 1.0]]})";
        }
        const CVector row = io::load_vector_json(path);
        REQUIRE(row.dim() == 2);
        CHECK(row[1] == cxd{0.0, 1.0});
        std::filesystem::remove(path);
    }

    TEST_CASE("parse errors carry context") {
        const auto path = temp_file("hhl_io_bad.json");
        {
            std::ofstream out(path);
            out << R"({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]})";
        }
        CHECK_THROWS_AS(io::load_matrix_json(path), ParseError);

        {
            std::ofstream out(path);
            out << "not json";
        }
        CHECK_THROWS_AS(io::load_matrix_json(path), ParseError);

        CHECK_THROWS_AS(io::load_matrix_json(temp_file("hhl_io_does_not_exist.json")),
                        ParseError);

        {
            std::ofstream out(path);
            out << R"({"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1]]})";
        }
        CHECK_THROWS_AS(io::load_matrix_json(path), ParseError);
        std::filesystem::remove(path);
    }

    TEST_CASE("vector files must be a single row or column") {
        const auto path = temp_file("hhl_io_notvec.json");
        {
            std::ofstream out(path);
            out << R"({"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]})";
        }
        CHECK_THROWS_AS(io::load_vector_json(path), ParseError);
        std::filesystem::remove(path);
    }
}
