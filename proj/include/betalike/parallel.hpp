#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace betalike::par {

// Thread cap shared by all kernels. 0 means "whatever OpenMP gives us",
// 1 forces the serial reference path. Initialized from BETALIKE_THREADS.
int thread_cap();
void set_thread_cap(int cap);
void init_from_env();

/// RAII cap override, used by tests to compare parallel and serial runs.
struct ScopedCap {
    explicit ScopedCap(int cap) : prev_(thread_cap()) { set_thread_cap(cap); }
    ~ScopedCap() { set_thread_cap(prev_); }
    ScopedCap(const ScopedCap&) = delete;
    ScopedCap& operator=(const ScopedCap&) = delete;

private:
    int prev_;
};

/// Serial reference kernel: body(i) for i in [0, n).
template <typename F>
void run_serial(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

/// OpenMP kernel. Each index writes only its own slot, so results are
/// bitwise identical to run_serial regardless of thread count.
template <typename F>
void run(std::size_t n, F&& body) {
#ifdef _OPENMP
    const int cap = thread_cap();
    if (cap != 1 && n > 1) {
        const int nt = cap > 0 ? cap : omp_get_max_threads();
        std::exception_ptr eptr = nullptr;
        std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(betalike_par_capture)
                {
                    if (!failed.exchange(true)) eptr = std::current_exception();
                }
            }
        }
        if (eptr) std::rethrow_exception(eptr);
        return;
    }
#endif
    run_serial(n, std::forward<F>(body));
}

}  // namespace betalike::par
