#include "loopeq/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "loopeq/error.hpp"

namespace loopeq {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0.0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

Json equilibrium_json(const EquilibriumMeasure& eq, const VariationalReport& vr) {
  Json j;
  j["alpha"] = num(eq.cut().alpha);
  j["beta"] = num(eq.cut().beta);
  Json h = Json::array();
  CPoly c = eq.h.order0();
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  for (cplx v : c) h.push_back(num(v.real()));
  j["h"] = h;
  j["l"] = num(vr.l);
  const EquilibriumResiduals& r = eq.residuals;
  j["residuals"] = {{"endpoint", num(r.endpoint)},
                    {"normalization_poly", num(r.normalization_poly)},
                    {"normalization_mass", num(r.normalization_mass)},
                    {"mass", num(r.mass)},
                    {"h_min", num(r.h_min)},
                    {"variational_equality", num(vr.max_eq_dev)},
                    {"variational_margin", num(vr.min_ineq_margin)}};
  return j;
}

Json laurent_json(const AlgebraicFn& f, int depth) {
  Json rows = Json::array();
  std::vector<cplx> l = laurent_table(f, depth);
  for (int p = 1; p <= depth; ++p)
    rows.push_back({{"power", -p}, {"re", num(l[p - 1].real())}, {"im", num(l[p - 1].imag())}});
  return rows;
}

Json level_json(int g, const AlgebraicFn& f, int depth, double contour_residual) {
  Json j;
  j["g"] = g;
  j["laurent"] = laurent_json(f, depth);
  j["contour_residual"] = num(contour_residual);
  return j;
}

Json eg_table_json(const EgDerivativeTable& t) {
  Json j;
  j["upsilon"] = t.upsilon;
  j["taylor_order"] = t.taylor_order;
  Json grads = Json::array();
  for (std::size_t g = 0; g < t.entries.size(); ++g)
    for (std::size_t k = 0; k < t.entries[g].size(); ++k)
      grads.push_back({{"g", int(g)}, {"j", int(k) + 1}, {"value", num(t.entries[g][k])}});
  j["gradient"] = grads;
  Json taylor = Json::array();
  for (std::size_t g = 0; g < t.taylor.size(); ++g)
    for (const auto& [index, value] : t.taylor[g]) {
      Json idx = Json::array();
      for (auto a : index) idx.push_back(int(a));
      taylor.push_back({{"g", int(g)}, {"index", idx}, {"value", num(value)}});
    }
  j["taylor"] = taylor;
  return j;
}

Json checks_json(const std::vector<CheckResult>& checks) {
  Json rows = Json::array();
  for (const auto& c : checks)
    rows.push_back({{"criterion", c.criterion},
                    {"name", c.name},
                    {"scope", c.scope == Scope::gaussian ? "gaussian" : "quartic"},
                    {"pass", c.pass},
                    {"value", c.timing ? std::string("timings") : num(c.value)},
                    {"threshold", num(c.threshold)},
                    {"detail", c.detail}});
  return rows;
}

namespace {

std::string cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void row(std::ostringstream& out, const std::string& prefix, const Json& obj) {
  std::string line = prefix;
  for (const auto& [k, v] : obj.items()) {
    if (v.is_structured()) continue;
    if (!line.empty()) line += ",";
    line += k + "=" + cell(v);
  }
  out << line << "\n";
}

}  // namespace

std::string render(const Json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format != "csv") usage_error("format must be json or csv");
  std::ostringstream out;
  Json head = Json::object();
  for (const auto& [k, v] : report.items())
    if (!v.is_structured()) head[k] = v;
  if (!head.empty()) row(out, "", head);
  if (report.contains("equilibrium")) {
    const Json& e = report["equilibrium"];
    row(out, "", e);
    for (std::size_t k = 0; k < e["h"].size(); ++k) out << "h,power=" << k << ",value=" << cell(e["h"][k]) << "\n";
    row(out, "residuals", e["residuals"]);
  }
  if (report.contains("levels"))
    for (const auto& level : report["levels"])
      for (const auto& r : level["laurent"]) row(out, "g=" + std::to_string(level["g"].get<int>()), r);
  if (report.contains("eg_table")) {
    for (const auto& r : report["eg_table"]["gradient"]) row(out, "gradient", r);
    for (const auto& r : report["eg_table"]["taylor"]) {
      std::string idx;
      for (const auto& a : r["index"]) idx += (idx.empty() ? "" : " ") + a.dump();
      out << "taylor,g=" << r["g"].get<int>() << ",index=" << idx << ",value=" << cell(r["value"]) << "\n";
    }
  }
  if (report.contains("oracle"))
    for (const auto& r : report["oracle"]["checks"]) row(out, "", r);
  return out.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) usage_error("cannot write output file " + path);
  f << text;
  if (!f) usage_error("cannot write output file " + path);
}

}  // namespace loopeq
