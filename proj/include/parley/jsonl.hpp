#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace parley::jsonl {

using json = nlohmann::ordered_json;

/// Parses a line-delimited JSON file; blank lines are skipped, a bad line is
/// Error(parse) naming the file and line number.
std::vector<json> read_file(const std::filesystem::path& path);

/// Writes records one per line, atomically (temp file + rename).
void write_file(const std::filesystem::path& path, const std::vector<json>& records);

void append_line(const std::filesystem::path& path, const json& record);

/// Atomic whole-file write for single-record artifacts.
void write_text(const std::filesystem::path& path, const std::string& text);

std::string read_text(const std::filesystem::path& path);

}  // namespace parley::jsonl
