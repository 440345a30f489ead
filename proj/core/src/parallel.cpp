// SPDX-License-Identifier: Apache-2.0
#include "xcorr/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

#include "xcorr/errors.hpp"

namespace xcorr {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) {
    if (threads < 1) throw DomainError("thread count must be >= 1");
    g_threads.store(threads);
}

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            if (failed.load()) continue;
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace xcorr
