#ifndef AERIS_PARALLEL_HPP
#define AERIS_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace aeris {

// Worker-count policy: AERIS_THREADS caps the pool; otherwise hardware
// concurrency. Work is handed out as indexed blocks and every block's
// output slot is owned by its index, so results never depend on how many
// workers ran.
inline unsigned worker_count() {
    if (const char* env = std::getenv("AERIS_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) {
            return static_cast<unsigned>(parsed);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <typename Fn>
void parallel_for_blocks(std::size_t block_count, Fn&& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(worker_count(), block_count));
    if (workers <= 1) {
        for (std::size_t b = 0; b < block_count; ++b) {
            fn(b);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= block_count) {
                    return;
                }
                fn(b);
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
}

} // namespace aeris

#endif
