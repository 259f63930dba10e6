#pragma once

#include <string>
#include <string_view>

#include "sdpi/distributions.hpp"

namespace sdpi {

/// Parses {"x_labels": [...], "y_labels": [...], "pxy": [[...], ...]}.
/// Probabilities are numbers or rational strings such as "1/3".
/// Syntax errors raise ParseError with a line:column position; schema and
/// probability violations raise the validation codes of JointDistribution.
JointDistribution parse_joint_json(std::string_view text);

/// Inverse of parse_joint_json (numbers written with 17 significant digits).
std::string joint_to_json(const JointDistribution& j);

/// Built-in names: fig2, remark3, independent, bsc:<eps>, bec:<e>.
/// Returns false when `name` is not a built-in.
bool is_builtin(std::string_view name);
JointDistribution builtin_joint(std::string_view name);

/// A built-in name or a path to a JSON file.
JointDistribution load_joint(const std::string& source);

/// Parses "0.25", "1/3", "-2e-3".
double parse_probability(std::string_view text);

/// Fixed 9-significant-digit decimal formatting used for every CSV cell.
std::string format_sig9(double v);

}  // namespace sdpi
