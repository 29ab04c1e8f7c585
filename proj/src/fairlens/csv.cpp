#include "fairlens/csv.hpp"


#include "fairlens/error.hpp"
#include "fairlens/io.hpp"

namespace fairlens::csv {

std::size_t Document::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return npos;
}

namespace {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> records;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    if (record_has_content || !current.fields.empty()) {
      end_field();
      records.push_back(std::move(current));
    }
    current = Record{};
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw parse_error("line " + std::to_string(line) + ": unexpected quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        if (field_was_quoted) {
          throw parse_error("line " + std::to_string(line) + ": characters after closing quote");
        }
        field.push_back(c);
        record_has_content = true;
    }
  }
  if (in_quotes) throw parse_error("unterminated quoted field at end of input");
  end_record();
  return records;
}

}  // namespace

Document parse(std::string_view text) {
  auto records = split_records(text);
  if (records.empty()) throw parse_error("CSV input has no header row");

  Document doc;
  doc.header = std::move(records.front().fields);
  doc.rows.reserve(records.size() - 1);
  doc.line_numbers.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != doc.header.size()) {
      throw parse_error("line " + std::to_string(records[r].line) + ": expected " +
                        std::to_string(doc.header.size()) + " fields, found " +
                        std::to_string(records[r].fields.size()));
    }
    doc.rows.push_back(std::move(records[r].fields));
    doc.line_numbers.push_back(records[r].line);
  }
  return doc;
}

Document read_file(const std::filesystem::path& path) { return parse(read_text_file(path)); }

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace fairlens::csv
