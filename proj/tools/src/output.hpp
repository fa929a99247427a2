#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace iselect::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV text with a header row; numbers carry 17 significant digits.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::initializer_list<std::string_view> header);

  CsvBuilder& number(double x);
  CsvBuilder& integer(long long x);
  CsvBuilder& empty();
  void end_row();

  std::size_t rows() const { return rows_; }
  std::string_view text() const { return {buffer_.data(), buffer_.size()}; }

 private:
  void separator();

  fmt::memory_buffer buffer_;
  std::size_t rows_ = 0;
  bool row_open_ = false;
};

std::string format_number(double x);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Parses a JSON file; unreadable files raise IoError, malformed ones ConfigError.
nlohmann::json read_json_file(const std::filesystem::path& path, const std::string& key);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header, or throws ConfigError naming `key`.
  std::size_t column(std::string_view name, const std::string& key) const;
};

CsvTable read_csv(const std::filesystem::path& path, const std::string& key);

}  // namespace iselect::cli
