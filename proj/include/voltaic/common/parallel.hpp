#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace voltaic {

/// Resolves a requested worker count: 0 means every logical core.
inline std::size_t resolve_threads(std::size_t requested)
{
    if (requested == 0) {
        requested = std::max(1u, std::thread::hardware_concurrency());
    }
    return requested;
}

/// Static round-robin partition: worker w handles indices w, w+W, w+2W, ...
/// `init(w)` runs once on the worker thread before its first index, so each
/// worker can own its own state. Output placement is the caller's job (by
/// index), which keeps results independent of completion order.
template <typename Init, typename Body>
void for_each_index_partitioned(std::size_t count, std::size_t threads, Init&& init, Body&& body)
{
    std::size_t workers = std::min(resolve_threads(threads), count);
    if (workers <= 1) {
        if (count > 0) {
            auto state = init(std::size_t{0});
            for (std::size_t i = 0; i < count; ++i) {
                body(state, i);
            }
        }
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                auto state = init(w);
                for (std::size_t i = w; i < count; i += workers) {
                    body(state, i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

template <typename Body>
void for_each_index(std::size_t count, std::size_t threads, Body&& body)
{
    for_each_index_partitioned(
        count, threads, [](std::size_t) { return 0; },
        [&](int&, std::size_t i) { body(i); });
}

} // namespace voltaic
