/*
   Copyright 2026 The equilab authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef EQUILAB_PARALLEL_HPP
#define EQUILAB_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace equilab {

/// Runs fn(chunk_index, begin, end) over [0, total) split into contiguous
/// chunks, one per worker.  Chunk boundaries depend only on `total` and the
/// worker count is capped, so callers that write results into chunk-indexed
/// slots stay deterministic.
inline void parallel_chunks(std::size_t total,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                            std::size_t max_workers = 0) {
    if (total == 0) return;
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (max_workers != 0 && max_workers < hw) hw = max_workers;
    std::size_t workers = hw < total ? hw : total;
    if (workers <= 1) {
        fn(0, 0, total);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t base = total / workers, rem = total % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t len = base + (w < rem ? 1 : 0);
        std::size_t end = begin + len;
        pool.emplace_back([&, w, begin, end] {
            try {
                fn(w, begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace equilab

#endif
