#include "betalike/parallel.hpp"

#include <cstdlib>
#include <string>

namespace betalike::par {

namespace {
std::atomic<int>& cap_storage() {
    static std::atomic<int> cap{0};
    return cap;
}
}  // namespace

int thread_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_thread_cap(int cap) { cap_storage().store(cap < 0 ? 0 : cap, std::memory_order_relaxed); }

void init_from_env() {
    const char* env = std::getenv("BETALIKE_THREADS");
    if (!env) return;
    try {
        set_thread_cap(std::stoi(env));
    } catch (...) {
        // Unparseable value: keep the default.
    }
}

}  // namespace betalike::par
