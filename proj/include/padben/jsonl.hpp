#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace padben {

// Streams a JSONL file line by line. Blank lines are skipped. Parse failures
// raise ErrorCode::parse with the 1-based line number.
void for_each_jsonl(const std::string& path,
                    const std::function<void(const nlohmann::json&, std::size_t line_no)>& fn);

std::vector<nlohmann::json> read_jsonl(const std::string& path);

// Writes one compact JSON document per line. Creates parent directories.
void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace padben
