#include "snls/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "snls/error.hpp"

namespace snls {
namespace {

void dump(const Json& v, int indent, std::string& out) {
  const std::string pad(2 * static_cast<std::size_t>(indent + 1), ' ');
  const std::string close_pad(2 * static_cast<std::size_t>(indent), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        dump(item, indent + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(v[i], indent + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const Json& value) {
  std::string out;
  dump(value, 0, out);
  out += "\n";
  return out;
}

void SeriesTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorCode::kParameter, "series row has " + std::to_string(row.size()) +
                                           " values for " + std::to_string(columns.size()) +
                                           " columns");
  }
  rows.push_back(std::move(row));
}

std::string SeriesTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string plot_data_text(const std::string& csv_text, const std::vector<std::string>& columns) {
  std::istringstream in(csv_text);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);

  std::vector<std::size_t> picks;
  for (const auto& name : columns) {
    std::size_t idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) idx = i;
    }
    if (idx == header.size()) {
      std::string available;
      for (const auto& h : header) available += (available.empty() ? "" : ", ") + h;
      throw Error(ErrorCode::kConfig,
                  "unknown column '" + name + "'; available columns: " + available);
    }
    picks.push_back(idx);
  }
  if (picks.empty()) throw Error(ErrorCode::kConfig, "no columns selected");

  std::string out = "#";
  for (const auto& name : columns) out += " " + name;
  out += "\n";
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kIo, "series row has " + std::to_string(fields.size()) +
                                      " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < picks.size(); ++i) out += (i ? " " : "") + fields[picks[i]];
    out += "\n";
  }
  return out;
}

void emit_plot_data(const std::string& series_csv, const std::vector<std::string>& columns,
                    const std::string& output_path) {
  write_text_file(output_path, plot_data_text(read_text_file(series_csv), columns));
}

}  // namespace snls
