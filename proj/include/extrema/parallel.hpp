#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "extrema/rng.hpp"

namespace extrema {

/// Worker count: explicit request if positive, else EXTREMA_THREADS, else
/// hardware concurrency. Always at least 1.
unsigned resolve_threads(int requested = 0);

/*!
 * Run body(i) for i in [0, count) on up to `threads` workers.
 *
 * Indices are split into contiguous static blocks; callers write results
 * into per-index slots, which keeps reductions independent of scheduling.
 * The first exception thrown by any worker is rethrown on the caller.
 */
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

/// Like parallel_for, but body also receives the worker id in [0, threads).
void parallel_for_worker(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t, unsigned)>& body);

/// out[i] = fn(i, rng_i) with rng_i = Rng(seed, i). T must not be bool.
template <class T, class Fn>
std::vector<T> map_trials(std::size_t trials, std::uint64_t seed, unsigned threads, Fn&& fn) {
    std::vector<T> out(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        Rng rng(seed, i);
        out[i] = fn(i, rng);
    });
    return out;
}

}  // namespace extrema
