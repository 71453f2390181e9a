#pragma once

// CSV emission and parsing for survival tables. Reals print in shortest
// round-trip form, so parse(print(x)) == x bit-exactly.

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "rankedmm/model.hpp"
#include "rankedmm/survival.hpp"

namespace rankedmm {

inline std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw param_error("not a real number: '" + text + "'");
  }
  return value;
}

inline constexpr const char* kSurvivalCsvHeader = "lambda,l,d,survival";

inline void emit_survival_csv(const SurvivalTable& table, std::ostream& out) {
  out << kSurvivalCsvHeader << '\n';
  for (int l = 0; l <= table.l_max; ++l) {
    out << format_double(table.lambda) << ',' << l << ','
        << format_double(table.d[static_cast<std::size_t>(l)]) << ','
        << format_double(table.survival[static_cast<std::size_t>(l)]) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write failure while emitting survival CSV");
}

inline SurvivalTable parse_survival_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSurvivalCsvHeader) {
    throw param_error("survival CSV must start with header '" +
                      std::string(kSurvivalCsvHeader) + "'");
  }
  SurvivalTable table;
  table.l_max = -1;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string lambda_field, l_field, d_field, survival_field;
    if (!std::getline(row, lambda_field, ',') || !std::getline(row, l_field, ',') ||
        !std::getline(row, d_field, ',') || !std::getline(row, survival_field)) {
      throw param_error("malformed survival CSV row: '" + line + "'");
    }
    const double lambda = parse_double(lambda_field);
    const int l = static_cast<int>(parse_double(l_field));
    if (first) {
      table.lambda = lambda;
      first = false;
    } else if (lambda != table.lambda) {
      throw param_error("survival CSV mixes lambda values");
    }
    if (l != table.l_max + 1) throw param_error("survival CSV rows must be ordered by l");
    table.l_max = l;
    const double d = parse_double(d_field);
    table.d.push_back(d);
    table.survival.push_back(parse_double(survival_field));
    if (std::isinf(d) && table.overflow_l < 0) table.overflow_l = l;
  }
  if (first) throw param_error("survival CSV has no rows");
  return table;
}

}  // namespace rankedmm
