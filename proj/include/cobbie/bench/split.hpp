#pragma once
// Deterministic stratified splitting by category.

#include <cstdint>
#include <utility>

#include "cobbie/bench/task.hpp"

namespace cobbie::bench {

// Within each category, tasks sorted by task_id are shuffled with a seeded
// mt19937_64 and cut at floor(count * fraction); the remainder goes to test.
// Tasks carrying an explicit split label keep it. Returned tasks have their
// split field filled in.
std::pair<std::vector<BenchTask>, std::vector<BenchTask>> stratified_split(
    const std::vector<BenchTask>& tasks, double fraction = 0.5, std::uint64_t seed = 42);

}  // namespace cobbie::bench
