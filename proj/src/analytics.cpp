#include "parley/analytics.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "parley/error.hpp"
#include "parley/jsonl.hpp"

namespace parley::analytics {

void BinningSpec::validate() const {
    if (edges.size() < 2)
        throw Error(ErrorKind::contract, "binning spec needs at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i] <= edges[i - 1])
            throw Error(ErrorKind::contract, "binning edges must be strictly increasing");
}

BinningSpec BinningSpec::default_token_bins() {
    return BinningSpec{{0, 1000, 2000, 4000, 8000, 16000, 32000, 64000}};
}

std::int64_t Histogram::mass() const {
    std::int64_t m = underflow + overflow;
    for (std::int64_t c : counts) m += c;
    return m;
}

SplitHistogram cost_distribution(const std::vector<CostRecord>& records, bool split_by_success,
                                 const BinningSpec& bins) {
    bins.validate();
    SplitHistogram out;
    out.bins = bins;
    const std::size_t nbins = bins.edges.size() - 1;
    out.success.counts.assign(nbins, 0);
    out.fail.counts.assign(nbins, 0);
    for (const CostRecord& r : records) {
        Histogram& h = (!split_by_success || r.success) ? out.success : out.fail;
        if (r.total_tokens < bins.edges.front()) {
            h.underflow += 1;
        } else if (r.total_tokens >= bins.edges.back()) {
            h.overflow += 1;
        } else {
            auto it = std::upper_bound(bins.edges.begin(), bins.edges.end(), r.total_tokens);
            h.counts[static_cast<std::size_t>(it - bins.edges.begin()) - 1] += 1;
        }
    }
    return out;
}

std::vector<ScatterPoint> scatter_query_cost(const std::vector<CostRecord>& records) {
    std::vector<ScatterPoint> points;
    points.reserve(records.size());
    for (const CostRecord& r : records)
        points.push_back({r.task_id, r.workflow, r.query_length_tokens, r.total_tokens, r.success});
    std::stable_sort(points.begin(), points.end(),
                     [](const ScatterPoint& a, const ScatterPoint& b) {
                         return a.task_id < b.task_id;
                     });
    return points;
}

RunReport aggregate_run(const std::vector<CostRecord>& records, const BinningSpec& bins) {
    if (records.empty()) throw Error(ErrorKind::contract, "no cost records to aggregate");
    std::map<std::string, WorkflowSummary> groups;
    for (const CostRecord& r : records) {
        auto [it, fresh] = groups.try_emplace(r.workflow);
        WorkflowSummary& s = it->second;
        if (fresh) {
            s.workflow = r.workflow;
            s.cost_min = r.total_tokens;
            s.cost_max = r.total_tokens;
        }
        s.n += 1;
        s.cost_sum += r.total_tokens;
        s.successes += r.success;
        s.cost_min = std::min(s.cost_min, r.total_tokens);
        s.cost_max = std::max(s.cost_max, r.total_tokens);
    }
    RunReport report;
    for (auto& [_, summary] : groups) report.per_workflow.push_back(summary);
    report.histogram = cost_distribution(records, true, bins);
    report.scatter = scatter_query_cost(records);
    return report;
}

namespace {

// Exact rational rounding (half up) to `decimals` places, emitted as text.
std::string fixed_ratio(std::int64_t numerator, std::int64_t denominator, int decimals) {
    if (denominator == 0) return "0";
    std::int64_t scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    std::int64_t scaled = (2 * numerator * scale + denominator) / (2 * denominator);
    std::ostringstream ss;
    ss << scaled / scale;
    if (decimals > 0) {
        std::int64_t frac = scaled % scale;
        std::string digits = std::to_string(frac);
        ss << '.' << std::string(static_cast<std::size_t>(decimals) - digits.size(), '0')
           << digits;
    }
    return ss.str();
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string render_table(const RunReport& report) {
    std::ostringstream out;
    out << pad("workflow", 22) << pad("n", 6) << pad("mean_cost", 12) << pad("success_rate", 14)
        << pad("cost_min", 10) << "cost_max\n";
    for (const WorkflowSummary& s : report.per_workflow) {
        out << pad(s.workflow, 22) << pad(std::to_string(s.n), 6)
            << pad(fixed_ratio(s.cost_sum, s.n, 2), 12)
            << pad(fixed_ratio(s.successes, s.n, 4), 14) << pad(std::to_string(s.cost_min), 10)
            << s.cost_max << '\n';
    }
    out << "\ntoken-cost histogram (success / fail)\n";
    const auto& edges = report.histogram.bins.edges;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        std::string label = "[" + std::to_string(edges[i]) + ", " + std::to_string(edges[i + 1]) +
                            ")";
        out << pad(label, 22) << report.histogram.success.counts[i] << " / "
            << report.histogram.fail.counts[i] << '\n';
    }
    out << pad("underflow", 22) << report.histogram.success.underflow << " / "
        << report.histogram.fail.underflow << '\n';
    out << pad("overflow", 22) << report.histogram.success.overflow << " / "
        << report.histogram.fail.overflow << '\n';
    return out.str();
}

std::string render_records_csv(const RunReport& report) {
    std::ostringstream out;
    out << "workflow,task_id,query_length,total_tokens,success\n";
    for (const ScatterPoint& p : report.scatter)
        out << p.workflow << ',' << p.task_id << ',' << p.query_length << ',' << p.total_tokens
            << ',' << p.success << '\n';
    return out.str();
}

std::string render_summary_csv(const RunReport& report) {
    std::ostringstream out;
    out << "workflow,n,mean_cost,success_rate,cost_min,cost_max\n";
    for (const WorkflowSummary& s : report.per_workflow)
        out << s.workflow << ',' << s.n << ',' << fixed_ratio(s.cost_sum, s.n, 2) << ','
            << fixed_ratio(s.successes, s.n, 4) << ',' << s.cost_min << ',' << s.cost_max << '\n';
    return out.str();
}

std::string render_histogram_csv(const RunReport& report) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,success_count,fail_count\n";
    const auto& edges = report.histogram.bins.edges;
    out << "-inf," << edges.front() << ',' << report.histogram.success.underflow << ','
        << report.histogram.fail.underflow << '\n';
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        out << edges[i] << ',' << edges[i + 1] << ',' << report.histogram.success.counts[i] << ','
            << report.histogram.fail.counts[i] << '\n';
    out << edges.back() << ",inf," << report.histogram.success.overflow << ','
        << report.histogram.fail.overflow << '\n';
    return out.str();
}

EmittedFiles emit_report(const RunReport& report, ReportFormat format,
                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    EmittedFiles files;
    if (format == ReportFormat::table_text) {
        auto path = out_dir / "report.txt";
        jsonl::write_text(path, render_table(report));
        files.paths.push_back(path);
    } else {
        auto records = out_dir / "records.csv";
        jsonl::write_text(records, render_records_csv(report));
        files.paths.push_back(records);
        auto summary = out_dir / "summary.csv";
        jsonl::write_text(summary, render_summary_csv(report));
        files.paths.push_back(summary);
        auto histogram = out_dir / "histogram.csv";
        jsonl::write_text(histogram, render_histogram_csv(report));
        files.paths.push_back(histogram);
    }
    return files;
}

}  // namespace parley::analytics
