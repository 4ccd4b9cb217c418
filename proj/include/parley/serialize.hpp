#pragma once

#include <filesystem>
#include <vector>

#include "parley/analytics.hpp"
#include "parley/judging.hpp"
#include "parley/jsonl.hpp"
#include "parley/workflow.hpp"

namespace parley {

// JSON shapes for persisted artifacts. Field order is fixed so identical runs
// produce identical bytes.

jsonl::json to_json(const DecodingConfig& d);
jsonl::json to_json(const Message& m);
jsonl::json to_json(const WorkflowConfig& cfg);
jsonl::json to_json(const Transcript& t);
jsonl::json to_json(const TaskScore& s, const std::string& task_id, Domain domain);
jsonl::json to_json(const analytics::CostRecord& r);

DecodingConfig decoding_from_json(const jsonl::json& j);
Transcript transcript_from_json(const jsonl::json& j);
analytics::CostRecord cost_record_from_json(const jsonl::json& j);

/// Line-delimited dataset records {id, domain, input, ground_truth | test_suite}.
std::vector<TaskInstance> load_dataset(const std::filesystem::path& path,
                                       const std::string& dataset_name);

}  // namespace parley
