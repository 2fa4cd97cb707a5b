#include "spinmf/text_io.hpp"

#include "spinmf/error.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace spinmf {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::json json_array(const std::vector<double>& xs) {
  auto arr = nlohmann::json::array();
  for (double x : xs) arr.push_back(json_number(x));
  return arr;
}

double double_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) fail(ErrorKind::Parse, "expected a number, got " + j.dump());
  return j.get<double>();
}

std::vector<double> doubles_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail(ErrorKind::Parse, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(double_from_json(x));
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Parse, source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " +
                               e.what());
  }
}

void ensure_writable_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create directory '" + dir.string() + "': " + ec.message());
  const auto probe = dir / ".spinmf_write_probe";
  {
    std::ofstream out(probe, std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "directory '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace spinmf
