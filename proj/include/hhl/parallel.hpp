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
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hhl::parallel {

/// Runs fn(0..n-1) across a small thread pool. Results must be written to
/// per-index slots by the caller, which keeps the output independent of
/// the thread count. The first exception thrown by any task is rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn,
                         unsigned max_threads = 0) {
    if (n == 0) {
        return;
    }
    unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
    if (hw == 0) {
        hw = 1;
    }
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }

    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    std::exception_ptr first_error;
    std::mutex error_mutex;

    for (unsigned t = 0; t < n_threads; ++t) {
        workers.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < n; i += n_threads) {
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        });
    }
    for (auto &w : workers) {
        w.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace hhl::parallel
