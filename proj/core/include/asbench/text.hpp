#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asbench {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-string decimal parse; nullopt on trailing junk or non-finite values.
std::optional<double> parse_double(std::string_view text) noexcept;
std::optional<long long> parse_integer(std::string_view text) noexcept;

std::string_view trim(std::string_view text) noexcept;
std::vector<std::string> split_fields(std::string_view line, char separator = ',');

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Line-oriented reader for the comma-separated tables; tracks 1-based line numbers,
/// strips '\r' and skips blank lines.
class LineReader {
 public:
  LineReader(std::string contents, std::string file_name);

  bool next(std::string_view& line);
  [[nodiscard]] std::size_t line_number() const noexcept { return line_number_; }
  [[nodiscard]] const std::string& file_name() const noexcept { return file_name_; }

  [[noreturn]] void fail(const std::string& reason) const;

 private:
  std::string contents_;
  std::string file_name_;
  std::size_t pos_ = 0;
  std::size_t line_number_ = 0;
};

}  // namespace asbench
