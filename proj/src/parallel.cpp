#include "svysamp/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace svysamp {

namespace {
std::size_t g_worker_override = 0;
}

void set_worker_override(std::size_t workers) {
    g_worker_override = workers;
}

std::size_t worker_count() {
    if (g_worker_override > 0) {
        return g_worker_override;
    }
    if (const char* env = std::getenv("SAMPLER_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) {
            return static_cast<std::size_t>(parsed);
        }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

void parallel_chunks(std::uint64_t total, std::uint64_t chunk_size,
                     const std::function<void(std::size_t, std::uint64_t,
                                              std::uint64_t)>& fn) {
    if (total == 0) {
        return;
    }
    if (chunk_size == 0) {
        chunk_size = 1;
    }
    const std::size_t num_chunks =
        static_cast<std::size_t>((total + chunk_size - 1) / chunk_size);

    auto run_chunk = [&](std::size_t c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk_size;
        const std::uint64_t end = std::min(total, begin + chunk_size);
        fn(c, begin, end);
    };

    const std::size_t workers = std::min(worker_count(), num_chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < num_chunks; ++c) {
            run_chunk(c);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t c = next.fetch_add(1);
                if (c >= num_chunks) {
                    return;
                }
                run_chunk(c);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

} // namespace svysamp
