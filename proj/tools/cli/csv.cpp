#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "snts/error.hpp"
#include "snts/keyvalue.hpp"

namespace snts::cli {

namespace {

bool is_number_token(const std::string& s) {
  if (s.empty()) return false;
  try {
    (void)parse_double(s);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

/// Resolves a header name or 1-based column number.
std::size_t resolve_column(const std::string& selector, const std::vector<std::string>& header, std::size_t width,
                           const std::string& source) {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == selector) return c;
  }
  try {
    const auto pos = parse_int(selector);
    if (pos >= 1 && static_cast<std::size_t>(pos) <= width) return static_cast<std::size_t>(pos - 1);
  } catch (const ParseError&) {
  }
  throw ParseError(source + ": column '" + selector + "' not found");
}

}  // namespace

std::string DataFrameIn::label(std::size_t i) const {
  if (i >= 1 && i <= index.size()) return index[i - 1];
  return std::to_string(i);
}

std::size_t DataFrameIn::find_label(const std::string& wanted) const {
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] == wanted) return i + 1;
  }
  try {
    const auto pos = parse_int(wanted);
    if (pos >= 1 && static_cast<std::size_t>(pos) <= values.size()) return static_cast<std::size_t>(pos);
  } catch (const ParseError&) {
  }
  throw InvalidArgument("no row labelled '" + wanted + "' in " + source);
}

std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  fields.push_back(trim(cur));
  return fields;
}

DataFrameIn parse_csv(const std::string& text, const CsvOptions& opts, const std::string& source) {
  DataFrameIn df;
  df.source = source;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) {
      ++df.skipped_blank_lines;
      continue;
    }
    std::vector<std::string> rec;
    try {
      rec = split_csv_record(line);
    } catch (const ParseError& e) {
      throw ParseError(source + ": line " + std::to_string(lineno) + ": " + e.what());
    }
    if (opts.has_header && header.empty() && records.empty()) {
      header = std::move(rec);
      continue;
    }
    records.push_back(std::move(rec));
    record_lines.push_back(lineno);
  }
  if (records.empty()) throw ParseError(source + ": no data rows");

  const std::size_t width = opts.has_header ? header.size() : records.front().size();
  const std::size_t value_col =
      opts.value_column.empty() ? width - 1 : resolve_column(opts.value_column, header, width, source);
  std::optional<std::size_t> index_col;
  if (opts.index_column) {
    index_col = resolve_column(*opts.index_column, header, width, source);
  } else if (width >= 2 && value_col != 0) {
    index_col = 0;
  }
  df.value_name = value_col < header.size() ? header[value_col] : "value";
  if (index_col) df.index_name = *index_col < header.size() ? header[*index_col] : "index";

  df.values.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where =
        source + ": row " + std::to_string(r + 1) + " (line " + std::to_string(record_lines[r]) + ")";
    if (value_col >= rec.size()) throw ParseError(where + ": missing column " + std::to_string(value_col + 1));
    const std::string& cell = rec[value_col];
    if (!is_number_token(cell)) throw ParseError(where + ": non-numeric value '" + cell + "'");
    df.values.push_back(parse_double(cell));
    if (index_col) df.index.push_back(*index_col < rec.size() ? rec[*index_col] : "");
  }
  return df;
}

DataFrameIn ingest_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), opts, path);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string series_to_csv(const std::vector<double>& values, const std::string& value_name) {
  std::string out = "index," + value_name + "\n";
  for (std::size_t i = 0; i < values.size(); ++i) out += std::to_string(i + 1) + "," + format_double(values[i]) + "\n";
  return out;
}

}  // namespace snts::cli
