#ifndef TORICMIRROR_PARALLEL_HPP
#define TORICMIRROR_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace toricmirror
{

// Default worker count: TORICMIRROR_JOBS if set and positive, else 1.
inline int default_jobs()
{
    if (const char *v = std::getenv("TORICMIRROR_JOBS")) {
        try {
            const int n = std::stoi(v);
            if (n > 0) return n;
        } catch (const std::exception &) {
        }
    }
    return 1;
}

// Runs fn(0..n-1) on up to `jobs` threads. Results must be written to
// per-index slots, which keeps assembly order independent of scheduling.
// The exception of the lowest failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn &&fn)
{
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto &t : pool) t.join();
    }
    for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace toricmirror

#endif
