#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fairlens::csv {

/// A parsed CSV document. `line_numbers[i]` is the 1-based physical line on
/// which record `i` of `rows` started (the header is line 1).
struct Document {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  /// Index of a header column, or npos.
  std::size_t column(std::string_view name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// RFC 4180: comma delimiter, double-quoted fields with "" escapes, CRLF or LF
/// line endings, embedded newlines inside quotes. A UTF-8 BOM is skipped.
/// Every record must have as many fields as the header.
Document parse(std::string_view text);
Document read_file(const std::filesystem::path& path);

/// Quotes a field only when it contains a delimiter, quote or newline.
std::string escape(std::string_view field);

}  // namespace fairlens::csv
