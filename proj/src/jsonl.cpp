#include "parley/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "parley/error.hpp"

namespace parley::jsonl {

std::vector<json> read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    std::vector<json> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw Error(ErrorKind::parse,
                        path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
        out << text;
        if (!out) throw Error(ErrorKind::io, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_file(const std::filesystem::path& path, const std::vector<json>& records) {
    std::ostringstream out;
    for (const auto& rec : records) out << rec.dump() << '\n';
    write_text(path, out.str());
}

void append_line(const std::filesystem::path& path, const json& record) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error(ErrorKind::io, "cannot append to " + path.string());
    out << record.dump() << '\n';
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace parley::jsonl
