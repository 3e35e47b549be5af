#include "rffses/records.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rffses/errors.hpp"

namespace rffses {

record& record::put(const std::string& key, field_value value) {
  fields_[key] = std::move(value);
  return *this;
}

const field_value* record::find(const std::string& key) const {
  auto it = fields_.find(key);
  return it == fields_.end() ? nullptr : &it->second;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_field(const field_value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>)
          return x;
        else if constexpr (std::is_same_v<T, double>)
          return format_double(x);
        else
          return std::to_string(x);
      },
      v);
}

void write_records(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<record>& records, bool json) {
  if (json) {
    for (const auto& r : records) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (const auto& key : header) {
        const auto* v = r.find(key);
        if (!v) {
          obj[key] = nullptr;
          continue;
        }
        std::visit(
            [&](const auto& x) {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, double>) {
                if (std::isfinite(x))
                  obj[key] = x;
                else
                  obj[key] = format_double(x);
              } else {
                obj[key] = x;
              }
            },
            *v);
      }
      out << obj.dump() << '\n';
    }
    return;
  }
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& r : records) {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (k) out << ',';
      if (const auto* v = r.find(header[k])) {
        std::string cell = format_field(*v);
        for (auto& ch : cell)
          if (ch == ',' || ch == '\n') ch = ';';
        out << cell;
      }
    }
    out << '\n';
  }
}

std::vector<std::map<std::string, std::string>> read_csv_records(std::istream& in) {
  auto split_line = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = split_line(line);
  std::vector<std::map<std::string, std::string>> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) throw parse_error("CSV column count mismatch", line_no);
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < header.size(); ++k) row[header[k]] = cells[k];
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace rffses
