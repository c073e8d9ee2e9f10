#include "cobbie/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cobbie::eval {

namespace {

std::vector<const EvalRecord*> usable(const std::vector<EvalRecord>& records) {
    std::vector<const EvalRecord*> out;
    for (const auto& r : records)
        if (!r.system_error) out.push_back(&r);
    if (out.empty()) throw std::invalid_argument("no usable eval records");
    return out;
}

}  // namespace

double abstention_rate_of(const std::vector<const EvalRecord*>& records) {
    if (records.empty()) return 0.0;
    long abstained = 0;
    for (const EvalRecord* r : records) abstained += r->abstained;
    return static_cast<double>(abstained) / static_cast<double>(records.size());
}

double accuracy_of(const std::vector<const EvalRecord*>& records) {
    if (records.empty()) return 0.0;
    long correct = 0;
    for (const EvalRecord* r : records) correct += r->correct();
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

double abstention_rate(const std::vector<EvalRecord>& records) {
    return abstention_rate_of(usable(records));
}

double accuracy(const std::vector<EvalRecord>& records) { return accuracy_of(usable(records)); }

std::optional<double> accuracy_attempted(const std::vector<EvalRecord>& records) {
    auto u = usable(records);
    long attempted = 0, correct = 0;
    for (const EvalRecord* r : u) {
        if (r->abstained) continue;
        ++attempted;
        correct += r->correct();
    }
    if (attempted == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(attempted);
}

double criterion_pass_rate(const std::vector<EvalRecord>& records, int criterion) {
    if (criterion < 1 || criterion > 4) throw std::invalid_argument("criterion out of range");
    auto u = usable(records);
    long attempted = 0, passed = 0;
    for (const EvalRecord* r : u) {
        if (r->abstained) continue;
        ++attempted;
        const std::optional<bool>* c[] = {&r->faithfulness, &r->completeness, &r->transparency,
                                          &r->relevance};
        passed += c[criterion - 1]->value_or(false);
    }
    if (attempted == 0) throw std::invalid_argument("no attempted answers");
    return static_cast<double>(passed) / static_cast<double>(attempted);
}

std::pair<double, double> bootstrap_ci(const std::vector<EvalRecord>& records,
                                       const Metric& metric, int resamples, double level,
                                       std::uint64_t seed) {
    auto base = usable(records);
    if (resamples < 1) throw std::invalid_argument("resamples must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, base.size() - 1);
    std::vector<double> stats(resamples);
    std::vector<const EvalRecord*> sample(base.size());
    for (int i = 0; i < resamples; ++i) {
        for (auto& slot : sample) slot = base[pick(rng)];
        stats[i] = metric(sample);
    }
    std::sort(stats.begin(), stats.end());
    // nearest-rank quantile: smallest value with at least q of the mass below
    auto quantile = [&](double q) {
        auto rank = static_cast<std::size_t>(std::ceil(q * resamples));
        rank = std::clamp<std::size_t>(rank, 1, stats.size());
        return stats[rank - 1];
    };
    double tail = (1.0 - level) / 2.0;
    return {quantile(tail), quantile(1.0 - tail)};
}

McNemarResult mcnemar(const std::vector<PairedTask>& paired) {
    McNemarResult res;
    for (const auto& t : paired) {
        res.b += t.correct_a && !t.correct_b;
        res.c += !t.correct_a && t.correct_b;
    }
    long n = res.b + res.c;
    if (n == 0) {
        res.method = "exact";
        res.p_value = 1.0;
        return res;
    }
    if (n < 25) {
        res.method = "exact";
        // two-sided exact binomial: doubled min tail, capped at 1
        long k = std::min(res.b, res.c);
        double tail = 0.0, coeff = 1.0;  // C(n, 0)
        for (long i = 0; i <= k; ++i) {
            tail += coeff;
            coeff = coeff * static_cast<double>(n - i) / static_cast<double>(i + 1);
        }
        res.p_value = std::min(1.0, 2.0 * tail * std::pow(0.5, static_cast<double>(n)));
        return res;
    }
    res.method = "chi2";
    double stat = std::pow(std::abs(static_cast<double>(res.b - res.c)) - 1.0, 2) /
                  static_cast<double>(n);
    res.statistic = stat;
    // chi-square survival with 1 df
    res.p_value = std::erfc(std::sqrt(stat / 2.0));
    return res;
}

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "ns";
}

}  // namespace cobbie::eval
