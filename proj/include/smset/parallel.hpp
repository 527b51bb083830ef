#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace smset {

/// Worker count for sample-parallel suite loops: SMSET_WORKERS if set,
/// otherwise the OpenMP default.
int worker_count();

namespace detail {
/// OpenMP loop over [0, n); captures the first exception thrown by any
/// iteration and rethrows it after the team joins.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);
}

/// Serial reference runner. Kept alongside the OpenMP kernel so the two can
/// be compared in tests and benchmarks.
template <typename R, typename F>
std::vector<R> map_samples_serial(std::size_t n, F&& fn) {
    std::vector<R> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
}

/// OpenMP map over sample indices with deterministic merge: slot i holds
/// fn(i) regardless of scheduling or worker count.
template <typename R, typename F>
std::vector<R> map_samples(std::size_t n, F&& fn) {
    std::vector<R> out(n);
    detail::parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace smset
