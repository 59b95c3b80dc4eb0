// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace chain_escape::detail {

/// Worker count from CHAIN_ESCAPE_THREADS (0 or unset = hardware concurrency).
inline unsigned thread_count()
{
    unsigned n = 0;
    if (const char* env = std::getenv("CHAIN_ESCAPE_THREADS")) {
        try {
            n = static_cast<unsigned>(std::stoul(env));
        } catch (...) {
            n = 0;
        }
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker and there are no cross-index reductions, so results do not depend
/// on the schedule.
template <typename Body>
void parallel_for(std::size_t count, Body&& body, std::size_t min_chunk = 64)
{
    const std::size_t workers =
        std::min<std::size_t>(thread_count(), (count + min_chunk - 1) / std::max<std::size_t>(min_chunk, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += workers) body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace chain_escape::detail
