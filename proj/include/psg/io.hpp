#pragma once

// CSV output with RFC 4180 quoting and fixed 12-significant-digit floats.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "psg/errors.hpp"

namespace psg {

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

template <class T>
std::string to_cell(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return format_real(static_cast<double>(v));
  } else if constexpr (std::is_integral_v<T>) {
    return std::to_string(v);
  } else {
    return std::string(v);
  }
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
    write_line(header);
  }

  template <class... Ts>
  void row(const Ts&... values) {
    write_line({to_cell(values)...});
  }

  void row_cells(const std::vector<std::string>& cells) { write_line(cells); }

 private:
  void write_line(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                              std::to_string(columns_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_escape(cells[i]);
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace psg
