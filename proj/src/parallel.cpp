#include "geomorph/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>
#include <vector>

namespace geomorph {

int resolve_workers(int requested) {
    int workers = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* cap = std::getenv(kMaxThreadsEnv)) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(cap, cap + std::strlen(cap), value);
        if (ec == std::errc() && *ptr == '\0' && value > 0) workers = std::min(workers, value);
    }
    return std::max(workers, 1);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(n);
    const auto run = [&](std::size_t i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) run(i);
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace geomorph
