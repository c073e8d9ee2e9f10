#pragma once
// Reciprocal rank fusion.

#include <string>
#include <vector>

namespace cobbie::docs {

// score(d) = sum over lists containing d of 1/(rrf_constant + rank), rank
// starting at 1; descending score, ties by chunk_id ascending.
std::vector<std::pair<std::string, double>> rrf_fuse(
    const std::vector<std::vector<std::string>>& ranked_lists, int rrf_constant = 60);

}  // namespace cobbie::docs
