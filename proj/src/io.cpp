#include "sdpi/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sdpi {

namespace {

using nlohmann::json;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

double parse_real(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");
  const std::string owned(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(owned.c_str(), &end);
  if (end != owned.c_str() + owned.size() || errno == ERANGE) {
    throw Error(ErrorCode::ParseError, "not a number: '" + owned + "'");
  }
  return v;
}

double probability_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_probability(v.get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, where + ": " + e.what());
    }
  }
  throw Error(ErrorCode::ParseError, where + ": expected a number or a rational string");
}

Labels labels_from_json(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing \"") + key + "\"");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must be an array");
  Labels out;
  for (const auto& v : arr) {
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_number_integer()) {
      out.push_back(std::to_string(v.get<long long>()));
    } else {
      out.push_back(v.dump());
    }
  }
  return out;
}

JointDistribution table_joint(std::initializer_list<std::initializer_list<double>> rows, Labels xl,
                              Labels yl) {
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (const double v : row) m(r, c++) = v;
    ++r;
  }
  return JointDistribution::from(std::move(m), std::move(xl), std::move(yl), kIngestTolerance);
}

double builtin_parameter(std::string_view name, std::size_t prefix) {
  const double v = parse_probability(name.substr(prefix));
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorCode::ValidationError, "parameter of '" + std::string(name) + "' must lie in (0, 1)");
  }
  return v;
}

}  // namespace

double parse_probability(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_real(text);
  const double num = parse_real(text.substr(0, slash));
  const double den = parse_real(text.substr(slash + 1));
  if (den == 0.0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

JointDistribution parse_joint_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "at " + line_column(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");
  Labels xl = labels_from_json(doc, "x_labels");
  Labels yl = labels_from_json(doc, "y_labels");
  if (!doc.contains("pxy") || !doc.at("pxy").is_array()) {
    throw Error(ErrorCode::ParseError, "missing array \"pxy\"");
  }
  const json& rows = doc.at("pxy");
  if (rows.size() != xl.size()) throw Error(ErrorCode::ShapeMismatch, "pxy needs one row per x label");
  Eigen::MatrixXd m(static_cast<Index>(xl.size()), static_cast<Index>(yl.size()));
  for (std::size_t x = 0; x < rows.size(); ++x) {
    const json& row = rows[x];
    if (!row.is_array() || row.size() != yl.size()) {
      throw Error(ErrorCode::ShapeMismatch, "pxy row " + std::to_string(x) + " needs one entry per y label");
    }
    for (std::size_t y = 0; y < row.size(); ++y) {
      m(static_cast<Index>(x), static_cast<Index>(y)) =
          probability_from_json(row[y], "pxy[" + std::to_string(x) + "][" + std::to_string(y) + "]");
    }
  }
  return JointDistribution::from(std::move(m), std::move(xl), std::move(yl), kIngestTolerance);
}

std::string joint_to_json(const JointDistribution& j) {
  json doc;
  doc["x_labels"] = j.x_labels();
  doc["y_labels"] = j.y_labels();
  json rows = json::array();
  for (Index x = 0; x < j.size_x(); ++x) {
    json row = json::array();
    for (Index y = 0; y < j.size_y(); ++y) row.push_back(j.pxy()(x, y));
    rows.push_back(row);
  }
  doc["pxy"] = rows;
  return doc.dump();
}

bool is_builtin(std::string_view name) {
  return name == "fig2" || name == "remark3" || name == "independent" || name.starts_with("bsc:") ||
         name.starts_with("bec:");
}

JointDistribution builtin_joint(std::string_view name) {
  if (name == "fig2") {
    return table_joint({{1.0 / 3, 1.0 / 6, 0.0}, {0.0, 1.0 / 4, 1.0 / 4}}, {"0", "1"}, {"0", "E", "1"});
  }
  if (name == "remark3") {
    return table_joint({{0.36, 0.49}, {0.03, 0.12}}, {"0", "1"}, {"0", "1"});
  }
  if (name == "independent") {
    return table_joint({{0.25, 0.25}, {0.25, 0.25}}, {"0", "1"}, {"0", "1"});
  }
  if (name.starts_with("bsc:")) {
    const double e = builtin_parameter(name, 4);
    return table_joint({{(1 - e) / 2, e / 2}, {e / 2, (1 - e) / 2}}, {"0", "1"}, {"0", "1"});
  }
  if (name.starts_with("bec:")) {
    const double e = builtin_parameter(name, 4);
    return table_joint({{(1 - e) / 2, e / 2, 0.0}, {0.0, e / 2, (1 - e) / 2}}, {"0", "1"},
                       {"0", "E", "1"});
  }
  throw Error(ErrorCode::ValidationError, "unknown built-in distribution '" + std::string(name) + "'");
}

JointDistribution load_joint(const std::string& source) {
  if (is_builtin(source)) return builtin_joint(source);
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + source + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_joint_json(buf.str());
}

std::string format_sig9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace sdpi
