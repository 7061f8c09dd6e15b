#include "csrkn/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

#include "csrkn/analysis.hpp"
#include "csrkn/parametric.hpp"
#include "csrkn/serialize.hpp"

namespace csrkn::cli {

std::vector<std::pair<std::string, double>> parse_assignments(const std::string& text) {
  std::vector<std::pair<std::string, double>> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("expected name=value, got '" + item + "'");
    }
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(v)) {
      throw ValidationError("bad value for " + name + ": '" + value + "'");
    }
    out.emplace_back(name, v);
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ValidationError("bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty number list");
  return out;
}

std::string closed_form(double x) {
  if (x == 0.0) return "0";
  static constexpr int roots[] = {1, 2, 3, 5, 6, 10, 15};
  for (int s : roots) {
    const double y = x / std::sqrt(static_cast<double>(s));
    for (long q = 1; q <= 1080; ++q) {
      const double p = std::round(y * static_cast<double>(q));
      if (p == 0.0 || std::abs(p) > 1e5) continue;
      if (std::abs(p / static_cast<double>(q) * std::sqrt(static_cast<double>(s)) - x) >
          1e-13 * std::max(1.0, std::abs(x))) {
        continue;
      }
      const long num = static_cast<long>(std::abs(p));
      const long g = std::gcd(num, q);
      const long n = num / g, d = q / g;
      std::string out = p < 0 ? "-" : "";
      if (s == 1) {
        out += std::to_string(n);
      } else {
        out += n == 1 ? "" : std::to_string(n) + "*";
        out += "sqrt(" + std::to_string(s) + ")";
      }
      if (d != 1) out += "/" + std::to_string(d);
      return out;
    }
  }
  return format_double(x);
}

namespace {

struct Outputs {
  std::ostream& out;
  std::ostream& err;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

ParameterMap to_map(const std::vector<std::pair<std::string, double>>& items) {
  ParameterMap m;
  for (const auto& [k, v] : items) {
    if (!m.emplace(k, v).second) throw ValidationError("parameter '" + k + "' given twice");
  }
  return m;
}

std::string format_affine(const AffineForm& f, const std::vector<std::string>& names) {
  std::string out = closed_form(f.constant);
  for (Eigen::Index k = 0; k < f.coeffs.size(); ++k) {
    const double c = f.coeffs(k);
    if (c == 0.0) continue;
    const std::string mag = closed_form(std::abs(c));
    const std::string term = (mag == "1" ? "" : mag + "*") + names[static_cast<std::size_t>(k)];
    if (out == "0") {
      out = (c < 0 ? "-" : "") + term;
    } else {
      out += (c < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

std::string pretty_tableau(const RknTableau<double>& t) {
  std::string s;
  const int r = t.stages();
  for (int i = 0; i < r; ++i) {
    s += "  " + closed_form(t.c(i)) + " |";
    for (int j = 0; j < r; ++j) s += " " + closed_form(t.a_bar(i, j));
    s += "\n";
  }
  s += "  b_bar:";
  for (int i = 0; i < r; ++i) s += " " + closed_form(t.b_bar(i));
  s += "\n  b:    ";
  for (int i = 0; i < r; ++i) s += " " + closed_form(t.b(i));
  s += "\n";
  return s;
}

int cmd_gen(int order, const std::string& params, const std::string& quad,
            const std::string& out_path, bool pretty, Outputs io) {
  const auto spec = SymplecticFamilySpec::from_params(order, to_map(parse_assignments(params)));
  const auto rule = make_rule(quad);
  const auto tableau = discretize(build_symplectic_family(spec), rule);
  TableauMeta meta;
  meta.source_family_order = order;
  meta.params = spec.params();
  meta.quadrature = rule.name();
  emit(serialize(tableau, meta, pretty), out_path, io.out);
  if (!pretty && out_path.empty()) io.out << "\n";
  return kOk;
}

int cmd_check(const std::string& path, bool pretty, Outputs io) {
  const TableauDocument doc = load_tableau(path);
  const auto& t = doc.tableau;
  Json report;
  bool ok = true;

  const auto sym = check_symplectic_discrete(t, 1e-12);
  report["symplectic"] = {{"pass", sym.pass},
                          {"node_residual", sym.node_residual},
                          {"pair_residual", sym.pair_residual}};
  if (!sym.pass) {
    report["symplectic"]["violated"] = sym.violated;
    ok = false;
  }
  report["structure"] = to_string(classify_structure(t));

  std::optional<int> expected;
  if (doc.meta.source_family_order && doc.meta.quadrature) {
    expected = std::min(*doc.meta.source_family_order, make_rule(*doc.meta.quadrature).order());
  }
  try {
    const auto order = check_order_discrete(t);
    Json residuals = Json::array();
    for (double r : order.residuals) residuals.push_back(r);
    report["order"] = {{"order", order.order}, {"residuals", residuals}};
    if (order.order < 1) ok = false;
    if (expected) {
      report["order"]["expected"] = *expected;
      if (order.order < *expected) ok = false;
    }
  } catch (const AssumptionViolation& e) {
    report["order"] = {{"error", "assumption violated"},
                       {"violated", e.hypothesis()},
                       {"residual", e.residual()}};
    ok = false;
  }
  report["pass"] = ok;

  if (pretty) {
    io.out << "tableau: " << path << " (r = " << t.stages() << ", " << report["structure"].get<std::string>()
           << ")\n";
    io.out << "symplectic: " << (sym.pass ? "pass" : "FAIL") << " (max residual "
           << format_double(sym.max_residual()) << ")\n";
    if (!sym.pass) io.out << "  violated: " << sym.violated << "\n";
    const Json& o = report["order"];
    if (o.contains("order")) {
      io.out << "order: " << o["order"].get<int>();
      if (expected) io.out << " (expected " << *expected << ")";
      io.out << "\n";
    } else {
      io.out << "order: assumption violated: " << o["violated"].get<std::string>() << "\n";
    }
    io.out << (ok ? "PASS" : "FAIL") << "\n";
  } else {
    io.out << dump_json(report) << "\n";
  }
  return ok ? kOk : kVerificationFailure;
}

int cmd_solve(int order, const std::string& quad, const std::string& target_name,
              const std::string& fix, bool pretty, const std::string& out_path, Outputs io) {
  StructureClass target;
  if (target_name == "explicit") {
    target = StructureClass::Explicit;
  } else if (target_name == "dirkn") {
    target = StructureClass::DiagonallyImplicit;
  } else {
    throw ValidationError("--target must be explicit or dirkn");
  }
  const auto rule = make_rule(quad);
  const auto pt = discretize_parametric(order, rule, to_map(parse_assignments(fix)));
  SolveOptions options;
  if (order == 2) options.pivot_preference = {"c"};
  const auto sol = solve_structure(pt, target, options);

  Json report;
  report["status"] = to_string(sol.status);
  report["target"] = to_string(target);
  report["quadrature"] = rule.name();
  report["order"] = order;
  if (sol.feasible()) {
    Json values = Json::object();
    for (std::size_t k = 0; k < sol.parameters.size(); ++k) {
      const auto& v = sol.values[k];
      if (v.is_constant()) {
        values[sol.parameters[k]] = v.constant;
      } else {
        Json lin = Json::object();
        for (Eigen::Index j = 0; j < v.coeffs.size(); ++j)
          if (v.coeffs(j) != 0.0) lin[sol.free_parameters[static_cast<std::size_t>(j)]] = v.coeffs(j);
        values[sol.parameters[k]] = {{"const", v.constant}, {"lin", lin}};
      }
    }
    report["parameters"] = values;
    report["free_parameters"] = sol.free_parameters;
    if (sol.free_parameters.empty()) {
      report["tableau"] = to_json(sol.tableau.evaluate(Eigen::VectorXd()));
    } else {
      report["tableau"] = to_json(sol.tableau);
    }
  } else {
    report["violated_equation"] = sol.violated_equation;
    report["violation"] = sol.violation;
    report["message"] = sol.message;
  }

  if (pretty) {
    std::string s = "order-" + std::to_string(order) + " family on " + rule.name() + ", target " +
                    to_string(target) + ": " + to_string(sol.status) + "\n";
    if (sol.feasible()) {
      for (std::size_t k = 0; k < sol.parameters.size(); ++k)
        s += "  " + sol.parameters[k] + " = " + format_affine(sol.values[k], sol.free_parameters) + "\n";
      if (!sol.free_parameters.empty()) {
        s += "  free:";
        for (const auto& f : sol.free_parameters) s += " " + f;
        s += "\n";
        const auto& t = sol.tableau;
        const int r = t.stages();
        for (int i = 0; i < r; ++i) {
          s += "  " + closed_form(t.c(i)) + " |";
          for (int j = 0; j < r; ++j) s += "  " + format_affine(t.a(i, j), t.parameters);
          s += "\n";
        }
      } else {
        s += pretty_tableau(sol.tableau.evaluate(Eigen::VectorXd()));
      }
    } else {
      s += "  violated: " + sol.violated_equation + "\n";
    }
    emit(s, out_path, io.out);
  } else {
    emit(dump_json(report) + "\n", out_path, io.out);
  }
  return sol.feasible() ? kOk : kVerificationFailure;
}

struct ProblemArgs {
  std::string name;
  double ecc = 0.6;
  std::string q0, p0;
};

BenchmarkProblem load_problem(const ProblemArgs& a) {
  ProblemOptions options;
  options.eccentricity = a.ecc;
  if (!a.q0.empty()) options.q0 = parse_list(a.q0);
  if (!a.p0.empty()) options.p0 = parse_list(a.p0);
  return make_problem(a.name, options);
}

StepperOptions stepper_options(bool fixed_point) {
  StepperOptions o;
  if (fixed_point) o.solver = StageSolver::FixedPoint;
  return o;
}

void add_problem_options(CLI::App* sub, ProblemArgs& p) {
  sub->add_option("--problem", p.name, "oscillator|pendulum|kepler|henon-heiles|mass-oscillator")
      ->required();
  sub->add_option("--ecc", p.ecc, "Kepler eccentricity")->capture_default_str();
  sub->add_option("--q0", p.q0, "initial position, comma separated");
  sub->add_option("--p0", p.p0, "initial momentum, comma separated");
}

void check_format(const std::string& format) {
  if (format != "json" && format != "csv") throw ValidationError("--format must be json or csv");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Outputs io{out, err};
  CLI::App app{"Symplectic continuous-stage RKN methods: construction, checks and integration",
               "csrkn"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  int order = 2;
  std::string params, quad, out_path, tableau_path, target, fix, format = "json";
  std::string h_list;
  bool pretty = false, fixed_point = false;
  double h = 0.1, t_final = 1.0;
  long steps = 100;
  int windows = 10;
  ProblemArgs problem;

  auto* gen = app.add_subcommand("gen", "discretize a symplectic family into a tableau");
  gen->add_option("--order", order, "family order 2..5")->required();
  gen->add_option("--params", params, "parameters, e.g. a=0.1,b=0");
  gen->add_option("--quad", quad, "quadrature, e.g. gauss:2")->required();
  gen->add_option("--out", out_path, "output file (default stdout)");
  gen->add_flag("--pretty", pretty, "indent the JSON");

  auto* check = app.add_subcommand("check", "symplecticity and order report");
  check->add_option("--tableau", tableau_path, "tableau JSON")->required();
  check->add_flag("--pretty", pretty, "human-readable report");

  auto* solve = app.add_subcommand("solve", "impose explicit or diagonally implicit structure");
  solve->add_option("--order", order, "family order 2..5")->required();
  solve->add_option("--quad", quad, "quadrature, e.g. lobatto:2")->required();
  solve->add_option("--target", target, "explicit|dirkn")->required();
  solve->add_option("--fix", fix, "parameters held fixed, e.g. c=0");
  solve->add_option("--out", out_path, "output file (default stdout)");
  solve->add_flag("--pretty", pretty, "human-readable report");

  auto* integ = app.add_subcommand("integrate", "integrate a benchmark problem");
  integ->add_option("--tableau", tableau_path, "tableau JSON")->required();
  add_problem_options(integ, problem);
  integ->add_option("--h", h, "step size")->required();
  integ->add_option("--steps", steps, "number of steps")->required();
  integ->add_option("--out", out_path, "trajectory CSV (default stdout)");
  integ->add_flag("--fixed-point", fixed_point, "fixed-point stage iteration instead of Newton");

  auto* conv = app.add_subcommand("convergence", "global-error convergence study");
  conv->add_option("--tableau", tableau_path, "tableau JSON")->required();
  add_problem_options(conv, problem);
  conv->add_option("--h-list", h_list, "step sizes, e.g. 0.2,0.1,0.05,0.025")->required();
  conv->add_option("--t-final", t_final, "final time")->required();
  conv->add_option("--format", format, "json|csv")->capture_default_str();
  conv->add_option("--out", out_path, "output file (default stdout)");
  conv->add_flag("--pretty", pretty, "human-readable report");

  auto* drift = app.add_subcommand("drift", "long-time energy error study");
  drift->add_option("--tableau", tableau_path, "tableau JSON")->required();
  add_problem_options(drift, problem);
  drift->add_option("--h", h, "step size")->required();
  drift->add_option("--steps", steps, "number of steps")->required();
  drift->add_option("--windows", windows, "number of windows")->capture_default_str();
  drift->add_option("--format", format, "json|csv")->capture_default_str();
  drift->add_option("--out", out_path, "output file (default stdout)");
  drift->add_flag("--pretty", pretty, "human-readable report");

  auto* repro = app.add_subcommand("reproduce-tables", "regenerate every printed tableau");
  repro->add_option("--out", out_path, "output file (default stdout)");
  repro->add_flag("--pretty", pretty, "human-readable report");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*gen) return cmd_gen(order, params, quad, out_path, pretty, io);
    if (*check) return cmd_check(tableau_path, pretty, io);
    if (*solve) return cmd_solve(order, quad, target, fix, pretty, out_path, io);
    if (*integ) {
      if (steps < 1) throw ValidationError("--steps must be at least 1");
      const auto doc = load_tableau(tableau_path);
      const auto pb = load_problem(problem);
      const auto traj = integrate(doc.tableau, pb.ivp, h, steps, stepper_options(fixed_point));
      emit(trajectory_csv(traj), out_path, out);
      return kOk;
    }
    if (*conv) {
      check_format(format);
      const auto doc = load_tableau(tableau_path);
      const auto report = convergence_study(doc.tableau, load_problem(problem), parse_list(h_list),
                                            t_final);
      std::string text;
      if (pretty) {
        for (std::size_t k = 0; k < report.h.size(); ++k)
          text += "h = " + format_double(report.h[k]) + "  error = " + format_double(report.errors[k]) + "\n";
        text += "slope = " + format_double(report.slope) + "\n";
      } else {
        text = format == "csv" ? to_csv(report) : dump_json(to_json(report)) + "\n";
      }
      emit(text, out_path, out);
      return kOk;
    }
    if (*drift) {
      check_format(format);
      const auto doc = load_tableau(tableau_path);
      const auto report = drift_study(doc.tableau, load_problem(problem), h, steps, windows);
      std::string text;
      if (pretty) {
        text = "first window = " + format_double(report.first_window()) +
               "\nmax window = " + format_double(report.max_window()) +
               "\nslope = " + format_double(report.slope) +
               "\nslope threshold = " + format_double(report.slope_threshold()) +
               "\nbounded = " + (report.bounded() ? "yes" : "no") + "\n";
      } else {
        text = format == "csv" ? to_csv(report) : dump_json(to_json(report)) + "\n";
      }
      emit(text, out_path, out);
      return kOk;
    }
    if (*repro) {
      const auto report = table_reproduction_suite();
      std::string text;
      if (pretty) {
        std::map<std::string, std::pair<int, double>> by_name;
        std::vector<std::string> names;
        for (const auto& c : report.cases) {
          if (!by_name.count(c.name)) names.push_back(c.name);
          auto& [failed, worst] = by_name[c.name];
          failed += c.pass ? 0 : 1;
          worst = std::max(worst, c.deviation);
        }
        for (const auto& n : names) {
          const auto& [failed, worst] = by_name[n];
          char line[160];
          std::snprintf(line, sizeof line, "%-4s %-32s max deviation %.3g\n",
                        failed ? "FAIL" : "ok", n.c_str(), worst);
          text += line;
        }
        text += std::to_string(report.cases.size() - report.failures()) + "/" +
                std::to_string(report.cases.size()) + " cases within " +
                format_double(report.tolerance) + "\n";
      } else {
        text = dump_json(to_json(report)) + "\n";
      }
      emit(text, out_path, out);
      return report.pass ? kOk : kVerificationFailure;
    }
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const AssumptionViolation& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace csrkn::cli
