#include "gvar/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gvar {

namespace {
std::atomic<unsigned> thread_count{1};
}

void set_threads(unsigned n) { thread_count.store(std::max(1u, n)); }

unsigned threads() { return thread_count.load(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn)
{
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
        work();
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace gvar
