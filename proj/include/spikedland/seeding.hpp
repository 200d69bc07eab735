#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace spiked {

/// One round of the splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the independent stream for trial `trial` under master seed `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

using Rng = std::mt19937_64;
Rng make_rng(std::uint64_t seed, std::uint64_t trial);

/// Worker count used by the Monte Carlo drivers; 0 means hardware concurrency.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each i must write only to its own slot, so
/// results do not depend on the worker count or on completion order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace spiked
