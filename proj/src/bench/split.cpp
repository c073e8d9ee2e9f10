#include "cobbie/bench/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace cobbie::bench {

std::pair<std::vector<BenchTask>, std::vector<BenchTask>> stratified_split(
    const std::vector<BenchTask>& tasks, double fraction, std::uint64_t seed) {
    std::vector<BenchTask> train, test;
    std::map<int, std::vector<BenchTask>> by_category;
    for (const auto& t : tasks) {
        if (t.split == "train_dev")
            train.push_back(t);
        else if (t.split == "test")
            test.push_back(t);
        else
            by_category[t.category].push_back(t);
    }
    // one engine across categories, consumed in ascending category order
    std::mt19937_64 rng(seed);
    for (auto& [category, bucket] : by_category) {
        std::sort(bucket.begin(), bucket.end(),
                  [](const BenchTask& a, const BenchTask& b) { return a.task_id < b.task_id; });
        std::shuffle(bucket.begin(), bucket.end(), rng);
        auto cut = static_cast<std::size_t>(
            std::floor(static_cast<double>(bucket.size()) * fraction));
        for (std::size_t i = 0; i < bucket.size(); ++i) {
            BenchTask t = bucket[i];
            t.split = i < cut ? "train_dev" : "test";
            (i < cut ? train : test).push_back(std::move(t));
        }
    }
    return {std::move(train), std::move(test)};
}

}  // namespace cobbie::bench
