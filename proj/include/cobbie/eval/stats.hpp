#pragma once
// Statistics over eval records: rates, bootstrap intervals, McNemar tests.

#include <cstdint>
#include <functional>
#include <optional>

#include "cobbie/eval/judge.hpp"

namespace cobbie::eval {

// All rates exclude system_error records. Empty after exclusion -> throws
// std::invalid_argument.
double abstention_rate(const std::vector<EvalRecord>& records);
double accuracy(const std::vector<EvalRecord>& records);
// correct / attempted; nullopt when every record abstained.
std::optional<double> accuracy_attempted(const std::vector<EvalRecord>& records);
// Pass rate of one criterion (1..4) over non-abstained records.
double criterion_pass_rate(const std::vector<EvalRecord>& records, int criterion);

// Metric over a resample, given as pointers into the original record list.
using Metric = std::function<double(const std::vector<const EvalRecord*>&)>;

double accuracy_of(const std::vector<const EvalRecord*>& records);
double abstention_rate_of(const std::vector<const EvalRecord*>& records);

// Percentile interval via nearest-rank quantiles; deterministic under seed.
std::pair<double, double> bootstrap_ci(const std::vector<EvalRecord>& records,
                                       const Metric& metric, int resamples = 10000,
                                       double level = 0.95, std::uint64_t seed = 0);

struct PairedTask {
    std::string task_id;
    bool correct_a = false;
    bool correct_b = false;
};

struct McNemarResult {
    long b = 0;  // A correct, B wrong
    long c = 0;  // A wrong, B correct
    std::optional<double> statistic;  // chi-square method only
    double p_value = 1.0;
    std::string method;  // "exact" | "chi2"
};

// Exact two-sided binomial when b + c < 25, else continuity-corrected
// chi-square with 1 df.
McNemarResult mcnemar(const std::vector<PairedTask>& paired);

std::string significance_stars(double p);

}  // namespace cobbie::eval
