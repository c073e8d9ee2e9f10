#pragma once
// Report emission: markdown tables with CSV twins carrying identical numbers.

#include "cobbie/bench/runner.hpp"

namespace cobbie::bench {

struct ReportOptions {
    int bootstrap_resamples = 10000;
    std::uint64_t bootstrap_seed = 0;
};

// Accuracy matrix with bootstrap CIs, per-category matrix, per-criterion
// quality matrix, and a pairwise McNemar grid with significance stars.
std::string render_markdown(const MatrixReport& report, const ReportOptions& options = {});
std::string render_csv(const MatrixReport& report, const ReportOptions& options = {});

// Writes report.md and report.csv into the directory.
void emit_report(const MatrixReport& report, const std::string& output_dir,
                 const ReportOptions& options = {});

// Reassembles a report from the record files run_matrix left behind.
MatrixReport load_report(const std::string& records_dir);

}  // namespace cobbie::bench
