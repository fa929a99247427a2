#include "output.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "iselect/serialization.hpp"

namespace iselect::cli {

CsvBuilder::CsvBuilder(std::initializer_list<std::string_view> header) {
  bool first = true;
  for (std::string_view h : header) {
    if (!first) buffer_.push_back(',');
    buffer_.append(h);
    first = false;
  }
  buffer_.push_back('\n');
}

void CsvBuilder::separator() {
  if (row_open_) buffer_.push_back(',');
  row_open_ = true;
}

CsvBuilder& CsvBuilder::number(double x) {
  separator();
  fmt::format_to(std::back_inserter(buffer_), "{:.17g}", x);
  return *this;
}

CsvBuilder& CsvBuilder::integer(long long x) {
  separator();
  fmt::format_to(std::back_inserter(buffer_), "{}", x);
  return *this;
}

CsvBuilder& CsvBuilder::empty() {
  separator();
  return *this;
}

void CsvBuilder::end_row() {
  buffer_.push_back('\n');
  row_open_ = false;
  ++rows_;
}

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(fmt::format("cannot open '{}' for writing: {}", tmp.string(), std::strerror(errno)));
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError(fmt::format("write to '{}' failed", tmp.string()));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError(fmt::format("cannot move output into '{}': {}", path.string(), ec.message()));
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path, const std::string& key) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot read '{}' ({})", path.string(), key));
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(key, fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
}

std::size_t CsvTable::column(std::string_view name, const std::string& key) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError(key, fmt::format("CSV referenced by '{}' has no '{}' column", key, name));
}

CsvTable read_csv(const std::filesystem::path& path, const std::string& key) {
  std::ifstream f(path);
  if (!f) throw ConfigError(key, fmt::format("key '{}' names unreadable file '{}'", key, path.string()));
  const auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw ConfigError(key, fmt::format("CSV referenced by '{}' is empty", key));
  t.header = split(line);
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw ConfigError(key, fmt::format("CSV referenced by '{}' has a ragged row", key));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace iselect::cli
