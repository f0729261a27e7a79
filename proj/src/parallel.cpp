#include "fpx/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fpx {

int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("FPX_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

void parallel_for_blocks(size_t n,
                         const std::function<void(size_t, size_t)>& fn) {
    const int workers = max_threads();
    if (n == 0) return;
    if (workers == 1 || n < 128) {
        fn(0, n);
        return;
    }
    const size_t chunks = std::min<size_t>(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (size_t c = 0; c < chunks; ++c) {
        const size_t begin = n * c / chunks;
        const size_t end = n * (c + 1) / chunks;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fpx
