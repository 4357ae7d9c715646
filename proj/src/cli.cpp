#include "loopeq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "loopeq/config.hpp"
#include "loopeq/error.hpp"
#include "loopeq/oracles.hpp"
#include "loopeq/report.hpp"

namespace loopeq {

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<int> upsilon, gmax, depth, taylor, probe_m, jet_order;
  std::optional<std::vector<double>> t;
  std::optional<double> t4, delta, probe_tol, T_bound, gamma;
  std::optional<std::string> suite, out, format;
  std::optional<std::uint64_t> seed;
};

RunConfig effective_config(const std::string& command, const Flags& f) {
  RunConfig c;
  if (command == "verify") c.g_max = 2;
  if (f.config) c = config_from_file(*f.config, c);
  c.command = command;
  if (f.upsilon) c.upsilon = *f.upsilon;
  if (f.t) c.t = *f.t;
  if (f.t4) {
    if (c.upsilon < 4) usage_error("--t4 needs upsilon of at least 4");
    c.t.resize(std::max<std::size_t>(c.t.size(), 4), 0.0);
    c.t[3] = *f.t4;
  }
  if (f.gmax) c.g_max = *f.gmax;
  if (f.depth) c.laurent_depth = *f.depth;
  if (f.taylor) c.taylor_order = *f.taylor;
  if (f.probe_m) c.probe_m = *f.probe_m;
  if (f.jet_order) c.jet_order = *f.jet_order;
  if (f.delta) c.delta = *f.delta;
  if (f.probe_tol) c.probe_tol = *f.probe_tol;
  if (f.T_bound) c.T_bound = *f.T_bound;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.suite) c.suite = *f.suite;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.format) c.format = *f.format;
  return c;
}

void fail_validation(const std::string& what) { throw Error(ErrorKind::validation, what); }

void check_equilibrium(const EquilibriumMeasure& eq, const VariationalReport& vr) {
  const EquilibriumResiduals& r = eq.residuals;
  double worst = std::max({r.endpoint, r.normalization_poly, r.normalization_mass, r.mass});
  if (!(worst <= 1e-8)) fail_validation("equilibrium residual " + num(worst) + " exceeds 1e-8");
  if (!(vr.max_eq_dev <= 1e-6)) fail_validation("variational equality deviation " + num(vr.max_eq_dev) + " exceeds 1e-6");
  if (!(vr.min_ineq_margin > 0.0)) fail_validation("variational inequality fails off the support");
}

Json equilibrium_section(const ExternalField& field, EquilibriumMeasure& eq) {
  eq = solve_equilibrium(field);
  VariationalReport vr = lagrange_and_variational_check(eq, field, interior_grid(eq), exterior_grid(eq));
  check_equilibrium(eq, vr);
  return equilibrium_json(eq, vr);
}

// Fills the report body; returns the exit code.
int run(const RunConfig& c, Json& report, Json& timings) {
  if (c.command == "eqm") {
    EquilibriumMeasure eq;
    report["equilibrium"] = equilibrium_section(physical_field(c), eq);
    return kExitOk;
  }
  if (c.command == "resolvent") {
    RunConfig c0 = c;
    c0.jet_order = 0;
    ExternalField field = physical_field(c0);
    EquilibriumMeasure eq;
    report["equilibrium"] = equilibrium_section(field, eq);
    report["levels"] = Json::array({level_json(0, resolvent_p0(eq, field), c.laurent_depth, 0.0)});
    return kExitOk;
  }
  if (c.command == "loop") {
    RunConfig c0 = c;
    c0.jet_order = 0;
    LoopHierarchy h = solve_hierarchy(physical_field(c0), loop_options(c));
    attach_contour_residuals(h, residual_samples(h.eq.cut(), c.delta), c.delta);
    VariationalReport vr = lagrange_and_variational_check(h.eq, physical_field(c0), interior_grid(h.eq),
                                                          exterior_grid(h.eq));
    report["equilibrium"] = equilibrium_json(h.eq, vr);
    Json levels = Json::array();
    for (int g = 0; g <= c.g_max; ++g) levels.push_back(level_json(g, h.levels[g], c.laurent_depth, h.contour_residuals[g]));
    report["levels"] = levels;
    report["probe_m"] = h.field.space->num_vars();
    report["eg_table"] = eg_table_json(extract_eg_derivatives(h));
    for (int g = 1; g <= c.g_max; ++g)
      if (!(h.contour_residuals[g] <= 1e-8))
        fail_validation("contour residual of level " + std::to_string(g) + " is " + num(h.contour_residuals[g]));
    return kExitOk;
  }
  VerifyOptions opt;
  opt.suite = c.suite;
  opt.g_max = c.g_max;
  opt.seed = c.seed;
  std::vector<CheckResult> checks = run_suite(opt);
  Json oracle;
  oracle["suite"] = c.suite;
  oracle["passed"] = all_pass(checks);
  oracle["checks"] = checks_json(checks);
  report["oracle"] = oracle;
  Json t = Json::array();
  for (const auto& r : checks)
    if (r.timing) t.push_back({{"criterion", r.criterion}, {"seconds", num(r.value)}});
  timings["checks"] = t;
  if (!all_pass(checks)) {
    std::string failed;
    for (const auto& r : checks)
      if (!r.pass) {
        std::string k = std::to_string(r.criterion);
        if (failed.find(" " + k + ",") == std::string::npos) failed += " " + k + ",";
      }
    failed.pop_back();
    report["reason"] = "criteria failed:" + failed;
    return kExitValidation;
  }
  return kExitOk;
}

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return kExitUsage;
    case ErrorKind::validation: return kExitValidation;
    case ErrorKind::numerical: return kExitNumerical;
  }
  return kExitNumerical;
}

void report_failure(int code, const std::string& reason, const std::string& command, const std::string& out,
                    const std::string& format) {
  Json r;
  r["status"] = "error";
  r["command"] = command;
  r["exit_code"] = code;
  r["reason"] = reason;
  std::cerr << "loopeq: " << reason << "\n";
  std::string text = render(r, format == "csv" ? "csv" : "json");
  try {
    emit(text, out);
  } catch (const Error&) {
    emit(text, "");
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"Equilibrium measure, resolvent and loop-equation genus expansion for one-cut polynomial ensembles",
               "loopeq"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON run configuration; flags override it");
  app.add_option("--upsilon", f.upsilon, "degree of the potential (even)");
  app.add_option("--t", f.t, "couplings t_1..t_upsilon")->expected(1, -1);
  app.add_option("--t4", f.t4, "quartic coupling");
  app.add_option("--gmax", f.gmax, "highest genus");
  app.add_option("--depth", f.depth, "Laurent depth");
  app.add_option("--taylor-order", f.taylor, "Taylor order of e_g in the couplings");
  app.add_option("--probe-m", f.probe_m, "probe count (0 chooses it)");
  app.add_option("--jet-order", f.jet_order, "jet order of the equilibrium (eqm)");
  app.add_option("--delta", f.delta, "contour standoff for the loop residuals");
  app.add_option("--probe-tol", f.probe_tol, "target truncation of the vertex operator");
  app.add_option("--T", f.T_bound, "admissibility bound T");
  app.add_option("--gamma", f.gamma, "admissibility constant gamma");
  app.add_option("--suite", f.suite, "verify suite: gaussian, quartic, full or none");
  app.add_option("--seed", f.seed, "seed of the random fields in verify");
  app.add_option("--out", f.out, "output path (stdout when absent)");
  app.add_option("--format", f.format, "json or csv");
  app.add_subcommand("eqm", "endpoints, h, l and residuals");
  app.add_subcommand("resolvent", "Laurent table of P_0");
  app.add_subcommand("loop", "Laurent tables of P_0..P_gmax and the e_g derivative table");
  app.add_subcommand("verify", "oracle suite with pass/fail per criterion");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  std::string command;
  try {
    app.parse(reversed);
    command = app.get_subcommands().front()->get_name();
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_failure(kExitUsage, e.what(), "", f.out.value_or(""), f.format.value_or("json"));
    return kExitUsage;
  }

  RunConfig c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    c = effective_config(command, f);
    validate(c);
    Json report;
    report["status"] = "ok";
    report["command"] = command;
    report["config"] = config_to_json(c);
    Json timings;
    int code = kExitOk;
    try {
      code = run(c, report, timings);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::validation) throw;
      report["reason"] = e.what();
      code = kExitValidation;
    }
    if (code != kExitOk) {
      report["status"] = "fail";
      std::cerr << "loopeq: " << report["reason"].get<std::string>() << "\n";
    }
    timings["seconds"] = num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    report["timings"] = timings;
    emit(render(report, c.format), c.out);
    return code;
  } catch (const Error& e) {
    int code = exit_for(e.kind());
    report_failure(code, e.what(), command, c.out.empty() ? f.out.value_or("") : c.out, c.format);
    return code;
  } catch (const std::exception& e) {
    report_failure(kExitNumerical, e.what(), command, f.out.value_or(""), f.format.value_or("json"));
    return kExitNumerical;
  }
}

}  // namespace loopeq
