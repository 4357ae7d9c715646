#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "loopeq/equilibrium.hpp"
#include "loopeq/loop.hpp"
#include "loopeq/verify.hpp"

namespace loopeq {

using Json = nlohmann::ordered_json;

// 15 significant digits, always with a decimal point or exponent; -0 prints as 0.0.
std::string num(double x);

Json equilibrium_json(const EquilibriumMeasure& eq, const VariationalReport& vr);
// {power, re, im} for powers -1 .. -depth.
Json laurent_json(const AlgebraicFn& f, int depth);
Json level_json(int g, const AlgebraicFn& f, int depth, double contour_residual);
Json eg_table_json(const EgDerivativeTable& t);
Json checks_json(const std::vector<CheckResult>& checks);

// The report as text: indented JSON, or CSV rows flattening its tables.
std::string render(const Json& report, const std::string& format);
// Writes to path, or stdout when path is empty.
void emit(const std::string& text, const std::string& path);

}  // namespace loopeq
