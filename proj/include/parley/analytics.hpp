#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace parley::analytics {

/// Per-instance cost record joined from a transcript and its verdict.
struct CostRecord {
    std::string task_id;
    std::string workflow;
    std::int64_t total_tokens = 0;
    std::map<std::string, std::int64_t> per_role_tokens;
    std::int64_t query_length_tokens = 0;  // prompt tokens of the first call
    int success = 0;                       // {0,1}
    std::chrono::milliseconds wall_time{0};
    double estimated_fraction = 0.0;  // share of tokens that came from the local estimator
};

struct WorkflowSummary {
    std::string workflow;
    int n = 0;
    std::int64_t cost_sum = 0;  // exact; mean is rounded only at emission
    int successes = 0;
    std::int64_t cost_min = 0;
    std::int64_t cost_max = 0;

    double mean_cost() const { return n ? static_cast<double>(cost_sum) / n : 0.0; }
    double success_rate() const { return n ? static_cast<double>(successes) / n : 0.0; }
};

/// Monotone bin edges; bin i covers [edges[i], edges[i+1]).
struct BinningSpec {
    std::vector<std::int64_t> edges;

    void validate() const;
    static BinningSpec default_token_bins();  // 0,1k,2k,4k,8k,16k,32k,64k
};

struct Histogram {
    std::vector<std::int64_t> counts;  // per bin
    std::int64_t underflow = 0;
    std::int64_t overflow = 0;

    std::int64_t mass() const;
};

struct SplitHistogram {
    BinningSpec bins;
    Histogram success;
    Histogram fail;
};

struct ScatterPoint {
    std::string task_id;
    std::string workflow;
    std::int64_t query_length = 0;
    std::int64_t total_tokens = 0;
    int success = 0;
};

struct RunReport {
    std::vector<WorkflowSummary> per_workflow;  // sorted by workflow name
    SplitHistogram histogram;
    std::vector<ScatterPoint> scatter;
};

/// Groups records by workflow and computes the full report. Pure function of
/// the record list.
RunReport aggregate_run(const std::vector<CostRecord>& records,
                        const BinningSpec& bins = BinningSpec::default_token_bins());

/// Success/fail histograms over identical edges; when split_by_success is
/// false everything lands in the success histogram. Values past the last edge
/// go to the overflow bin, values below the first edge to the underflow bin.
SplitHistogram cost_distribution(const std::vector<CostRecord>& records, bool split_by_success,
                                 const BinningSpec& bins);

/// One point per record, stable-sorted by task id.
std::vector<ScatterPoint> scatter_query_cost(const std::vector<CostRecord>& records);

enum class ReportFormat { table_text, delimited_data };

struct EmittedFiles {
    std::vector<std::filesystem::path> paths;
};

/// Deterministic byte output. table_text writes report.txt; delimited_data
/// writes records.csv (workflow,task_id,query_length,total_tokens,success),
/// summary.csv, and histogram.csv.
EmittedFiles emit_report(const RunReport& report, ReportFormat format,
                         const std::filesystem::path& out_dir);

std::string render_table(const RunReport& report);
std::string render_records_csv(const RunReport& report);
std::string render_summary_csv(const RunReport& report);
std::string render_histogram_csv(const RunReport& report);

}  // namespace parley::analytics
