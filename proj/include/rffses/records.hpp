#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace rffses {

using field_value = std::variant<std::int64_t, double, std::string>;

// One experiment cell's output. Fields are looked up by header name when
// written; a header column the record does not set is written empty.
class record {
 public:
  template <typename T>
  record& set(const std::string& key, const T& value) {
    if constexpr (std::is_same_v<T, bool>)
      return put(key, std::int64_t{value ? 1 : 0});
    else if constexpr (std::is_integral_v<T>)
      return put(key, static_cast<std::int64_t>(value));
    else if constexpr (std::is_floating_point_v<T>)
      return put(key, static_cast<double>(value));
    else
      return put(key, std::string(value));
  }

  const field_value* find(const std::string& key) const;

 private:
  record& put(const std::string& key, field_value value);
  std::map<std::string, field_value> fields_;
};

// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);
std::string format_field(const field_value& v);

// CSV with a header line, or one JSON object per line with the same keys.
void write_records(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<record>& records, bool json);

// Parses CSV written by write_records back into string maps (no quoting needed:
// fields never contain commas).
std::vector<std::map<std::string, std::string>> read_csv_records(std::istream& in);

}  // namespace rffses
