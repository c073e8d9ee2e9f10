#include "cobbie/bench/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <tuple>
#include <filesystem>
#include <fstream>
#include <map>

#include "cobbie/eval/judge.hpp"

namespace cobbie::bench {

using cobbie::eval::EvalRecord;

namespace {

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
    return buf;
}

std::string num3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string num4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::vector<const EvalRecord*> usable(const CellResult& cell) {
    std::vector<const EvalRecord*> out;
    for (const auto& r : cell.records)
        if (!r.system_error) out.push_back(&r);
    return out;
}

struct CellStats {
    std::size_t n = 0;
    std::string accuracy_pct = "n/a", ci_low = "n/a", ci_high = "n/a";
    std::string abstention_pct = "n/a", attempted_pct = "n/a";
    // per category 1..4: (pct, correct, total)
    std::array<std::tuple<std::string, long, long>, 4> category{};
    // criterion pass rates c1..c4
    std::array<std::string, 4> criterion{"n/a", "n/a", "n/a", "n/a"};
};

CellStats cell_stats(const CellResult& cell, const ReportOptions& options) {
    CellStats s;
    auto u = usable(cell);
    s.n = u.size();
    if (u.empty()) return s;
    s.accuracy_pct = pct(cobbie::eval::accuracy_of(u));
    s.abstention_pct = pct(cobbie::eval::abstention_rate_of(u));
    auto ci = cobbie::eval::bootstrap_ci(cell.records, cobbie::eval::accuracy_of,
                                         options.bootstrap_resamples, 0.95,
                                         options.bootstrap_seed);
    s.ci_low = num3(ci.first);
    s.ci_high = num3(ci.second);

    long attempted = 0, attempted_correct = 0;
    std::array<long, 4> cat_n{}, cat_correct{}, crit_pass{};
    for (const EvalRecord* r : u) {
        if (r->category >= 1 && r->category <= 4) {
            cat_n[r->category - 1] += 1;
            cat_correct[r->category - 1] += r->correct();
        }
        if (r->abstained) continue;
        ++attempted;
        attempted_correct += r->correct();
        const std::optional<bool>* c[] = {&r->faithfulness, &r->completeness, &r->transparency,
                                          &r->relevance};
        for (int k = 0; k < 4; ++k) crit_pass[k] += c[k]->value_or(false);
    }
    if (attempted > 0) {
        s.attempted_pct = pct(static_cast<double>(attempted_correct) / attempted);
        for (int k = 0; k < 4; ++k)
            s.criterion[k] = pct(static_cast<double>(crit_pass[k]) / attempted);
    }
    for (int k = 0; k < 4; ++k) {
        std::string p = cat_n[k] ? pct(static_cast<double>(cat_correct[k]) / cat_n[k]) : "n/a";
        s.category[k] = {p, cat_correct[k], cat_n[k]};
    }
    return s;
}

struct Pairwise {
    std::string a, b;
    cobbie::eval::McNemarResult test;
};

std::vector<Pairwise> pairwise_tests(const MatrixReport& report) {
    std::vector<Pairwise> out;
    for (std::size_t i = 0; i < report.cells.size(); ++i)
        for (std::size_t j = i + 1; j < report.cells.size(); ++j) {
            std::map<std::string, bool> a;
            for (const auto& r : report.cells[i].records)
                if (!r.system_error) a[r.task_id] = r.correct();
            std::vector<cobbie::eval::PairedTask> paired;
            for (const auto& r : report.cells[j].records) {
                auto it = a.find(r.task_id);
                if (it == a.end() || r.system_error) continue;
                paired.push_back({r.task_id, it->second, r.correct()});
            }
            out.push_back({report.cells[i].config_id, report.cells[j].config_id,
                           cobbie::eval::mcnemar(paired)});
        }
    return out;
}

}  // namespace

std::string render_markdown(const MatrixReport& report, const ReportOptions& options) {
    std::string md = "# Benchmark report\n\n## Accuracy\n\n";
    md += "| config | n | accuracy | abstention | accuracy (attempted) |\n";
    md += "|---|---|---|---|---|\n";
    std::vector<CellStats> stats;
    for (const auto& cell : report.cells) stats.push_back(cell_stats(cell, options));
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        const auto& s = stats[i];
        std::string acc = s.accuracy_pct == "n/a"
                              ? "n/a"
                              : s.accuracy_pct + "% [" + s.ci_low + ", " + s.ci_high + "]";
        md += "| " + report.cells[i].config_id + " | " + std::to_string(s.n) + " | " + acc +
              " | " + (s.abstention_pct == "n/a" ? "n/a" : s.abstention_pct + "%") + " | " +
              (s.attempted_pct == "n/a" ? "n/a" : s.attempted_pct + "%") + " |\n";
    }

    md += "\n## Accuracy by category\n\n";
    md += "| config | category 1 | category 2 | category 3 | category 4 |\n";
    md += "|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        md += "| " + report.cells[i].config_id + " |";
        for (int k = 0; k < 4; ++k) {
            auto& [p, correct, n] = stats[i].category[k];
            if (n == 0)
                md += " n/a |";
            else
                md += " " + p + "% (" + std::to_string(correct) + "/" + std::to_string(n) +
                      ") |";
        }
        md += "\n";
    }

    md += "\n## Criterion pass rates (attempted answers)\n\n";
    md += "| config | faithfulness | completeness | transparency | relevance |\n";
    md += "|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        md += "| " + report.cells[i].config_id + " |";
        for (int k = 0; k < 4; ++k)
            md += stats[i].criterion[k] == "n/a" ? std::string(" n/a |")
                                                 : " " + stats[i].criterion[k] + "% |";
        md += "\n";
    }

    md += "\n## Pairwise McNemar tests\n\n";
    md += "| A | B | b | c | method | p | significance |\n";
    md += "|---|---|---|---|---|---|---|\n";
    for (const auto& pw : pairwise_tests(report)) {
        md += "| " + pw.a + " | " + pw.b + " | " + std::to_string(pw.test.b) + " | " +
              std::to_string(pw.test.c) + " | " + pw.test.method + " | " +
              num4(pw.test.p_value) + " | " +
              cobbie::eval::significance_stars(pw.test.p_value) + " |\n";
    }
    return md;
}

std::string render_csv(const MatrixReport& report, const ReportOptions& options) {
    std::string csv = "section,config,field,value\n";
    std::vector<CellStats> stats;
    for (const auto& cell : report.cells) stats.push_back(cell_stats(cell, options));
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        const auto& id = report.cells[i].config_id;
        const auto& s = stats[i];
        csv += "accuracy," + id + ",n," + std::to_string(s.n) + "\n";
        csv += "accuracy," + id + ",accuracy_pct," + s.accuracy_pct + "\n";
        csv += "accuracy," + id + ",ci_low," + s.ci_low + "\n";
        csv += "accuracy," + id + ",ci_high," + s.ci_high + "\n";
        csv += "accuracy," + id + ",abstention_pct," + s.abstention_pct + "\n";
        csv += "accuracy," + id + ",attempted_pct," + s.attempted_pct + "\n";
        for (int k = 0; k < 4; ++k) {
            auto& [p, correct, n] = s.category[k];
            csv += "category," + id + ",category_" + std::to_string(k + 1) + "_pct," +
                   (n == 0 ? "n/a" : p) + "\n";
            csv += "category," + id + ",category_" + std::to_string(k + 1) + "_correct," +
                   std::to_string(correct) + "\n";
            csv += "category," + id + ",category_" + std::to_string(k + 1) + "_n," +
                   std::to_string(n) + "\n";
        }
        static const char* names[] = {"faithfulness", "completeness", "transparency",
                                      "relevance"};
        for (int k = 0; k < 4; ++k)
            csv += "criterion," + id + "," + names[k] + "_pct," + s.criterion[k] + "\n";
    }
    for (const auto& pw : pairwise_tests(report)) {
        std::string pair = pw.a + " vs " + pw.b;
        csv += "mcnemar," + pair + ",b," + std::to_string(pw.test.b) + "\n";
        csv += "mcnemar," + pair + ",c," + std::to_string(pw.test.c) + "\n";
        csv += "mcnemar," + pair + ",method," + pw.test.method + "\n";
        csv += "mcnemar," + pair + ",p," + num4(pw.test.p_value) + "\n";
        csv += "mcnemar," + pair + ",significance," +
               cobbie::eval::significance_stars(pw.test.p_value) + "\n";
    }
    return csv;
}

void emit_report(const MatrixReport& report, const std::string& output_dir,
                 const ReportOptions& options) {
    std::filesystem::create_directories(output_dir);
    std::ofstream md(output_dir + "/report.md", std::ios::binary);
    md << render_markdown(report, options);
    std::ofstream csv(output_dir + "/report.csv", std::ios::binary);
    csv << render_csv(report, options);
}

MatrixReport load_report(const std::string& records_dir) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(records_dir))
        if (entry.path().extension() == ".ldjson") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    MatrixReport report;
    for (const auto& path : files) {
        CellResult cell;
        cell.config_id = std::filesystem::path(path).stem().string();
        cell.records = cobbie::eval::load_records(path);
        report.cells.push_back(std::move(cell));
    }
    return report;
}

}  // namespace cobbie::bench
