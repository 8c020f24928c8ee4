#include "etalab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace etalab {
namespace {
std::atomic<unsigned> g_jobs{1};
thread_local bool t_inside = false;
}  // namespace

void set_jobs(unsigned n) { g_jobs = std::max(1u, n); }

unsigned jobs() { return g_jobs; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(g_jobs, n));
    // Nested loops run inline so the worker count stays bounded.
    if (workers <= 1 || t_inside) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex mu;
    auto run = [&] {
        t_inside = true;
        for (;;) {
            const std::size_t i = next++;
            if (i >= n) {
                break;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first) {
                    first = std::current_exception();
                }
                next = n;
            }
        }
        t_inside = false;
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(run);
    }
    run();
    for (auto& t : pool) {
        t.join();
    }
    if (first) {
        std::rethrow_exception(first);
    }
}

}  // namespace etalab
