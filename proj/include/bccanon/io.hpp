#pragma once

// Matrix files and command reports.
//
// Matrix file: {"rows": r, "cols": c, "data": [[[re, im], ...], ...]}
// Floats are written with 17 significant digits and always carry a decimal
// point or exponent, so every double (including -0.0) reads back bit-equal.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bccanon/matcore.hpp"

namespace bccanon {

using Json = nlohmann::json;

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    data.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw Error(ErrorCode::ParseError, "matrix object needs rows, cols and data");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    throw Error(ErrorCode::ParseError, "rows and cols must be integers");
  }
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows < 1 || cols < 1) throw Error(ErrorCode::DimensionMismatch, "rows and cols must be positive");
  const Json& data = j["data"];
  if (!data.is_array()) throw Error(ErrorCode::ParseError, "data must be an array of rows");
  if (static_cast<long long>(data.size()) != rows) {
    throw Error(ErrorCode::DimensionMismatch, "data has " + std::to_string(data.size()) + " rows, expected " +
                                                  std::to_string(rows));
  }
  ComplexMatrix m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    const Json& row = data[i];
    if (!row.is_array()) throw Error(ErrorCode::ParseError, "row " + std::to_string(i) + " is not an array");
    if (static_cast<long long>(row.size()) != cols) {
      throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                                                    " entries, expected " + std::to_string(cols));
    }
    for (long long k = 0; k < cols; ++k) {
      const Json& e = row[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(ErrorCode::ParseError, "entry (" + std::to_string(i) + "," + std::to_string(k) +
                                               ") is not a [re, im] pair");
      }
      m(i, k) = {e[0].get<double>(), e[1].get<double>()};
    }
  }
  if (!all_finite(m)) throw Error(ErrorCode::ParseError, "matrix contains a non-finite number");
  return m;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline void dump(const Json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: keys sorted
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Numeric leaves ([re, im] pairs) stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump(e, out, flat ? -1 : indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

/// Deterministic serialization: sorted keys, 17-digit floats.
/// indent < 0 gives a single line.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::dump(j, out, indent, 0);
  return out;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline ComplexMatrix parse_matrix_file(const std::string& path) {
  const Json j = read_json_file(path);
  try {
    return matrix_from_json(j);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text << '\n';
}

inline void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
  write_text_file(path, dump_json(matrix_to_json(m)));
}

struct Report {
  std::string command;
  std::vector<std::string> inputs;
  std::string verdict;
  std::map<std::string, Json> metrics;  // numbers only; key set fixed per command
  std::map<std::string, ComplexMatrix> factors;
};

enum class ReportFormat { Json, Text };

inline Json report_to_json(const Report& r) {
  Json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["verdict"] = r.verdict;
  j["metrics"] = Json::object();
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = v;
  if (!r.factors.empty()) {
    j["factors"] = Json::object();
    for (const auto& [k, m] : r.factors) j["factors"][k] = matrix_to_json(m);
  }
  return j;
}

inline std::string format_report(const Report& r, ReportFormat mode) {
  if (mode == ReportFormat::Json) return dump_json(report_to_json(r));
  std::ostringstream os;
  os << "command: " << r.command << '\n';
  for (const auto& in : r.inputs) os << "input: " << in << '\n';
  os << "verdict: " << r.verdict << '\n';
  for (const auto& [k, v] : r.metrics) {
    os << k << " = " << (v.is_number_float() ? detail::format_double(v.get<double>()) : v.dump()) << '\n';
  }
  for (const auto& [k, m] : r.factors) os << "factor " << k << ": " << m.rows() << "x" << m.cols() << '\n';
  return os.str();
}

}  // namespace bccanon
