#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace spinmf {

/// "%.17g": round-trips every finite double. Non-finite values print as
/// nan / inf / -inf.
std::string format_double(double x);

/// JSON number, with non-finite values stored as null.
nlohmann::json json_number(double x);
nlohmann::json json_array(const std::vector<double>& xs);
double double_from_json(const nlohmann::json& j);
std::vector<double> doubles_from_json(const nlohmann::json& j);

/// Writes text with LF endings, throwing Io on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Parses JSON text; on failure throws Parse with the byte offset.
nlohmann::json parse_json(const std::string& text, const std::string& source);

/// Creates `dir` if needed and proves it is writable with a probe file.
void ensure_writable_directory(const std::filesystem::path& dir);

/// 64-bit FNV-1a of `text`, as 16 hex digits. Stable across platforms.
std::string fnv1a_hex(const std::string& text);

}  // namespace spinmf
