#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace fixpoint {

/// Runs body(i) for i in [0, count) on up to `threads` workers; 0 or 1
/// runs inline. Each index is visited exactly once, so callers writing
/// into a pre-sized vector at position i get results independent of the
/// worker count. `body` must not throw.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
    const std::size_t workers = std::min(threads, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t begin = count * w / workers;
            const std::size_t end = count * (w + 1) / workers;
            for (std::size_t i = begin; i < end; ++i) body(i);
        });
    }
}

}  // namespace fixpoint
