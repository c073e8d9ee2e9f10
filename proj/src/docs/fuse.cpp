#include "cobbie/docs/fuse.hpp"

#include <algorithm>
#include <map>

namespace cobbie::docs {

std::vector<std::pair<std::string, double>> rrf_fuse(
    const std::vector<std::vector<std::string>>& ranked_lists, int rrf_constant) {
    std::map<std::string, double> score;
    for (const auto& list : ranked_lists) {
        for (std::size_t i = 0; i < list.size(); ++i)
            score[list[i]] += 1.0 / (rrf_constant + static_cast<double>(i + 1));
    }
    std::vector<std::pair<std::string, double>> out(score.begin(), score.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace cobbie::docs
