#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "finsler/catalog.hpp"
#include "finsler/errors.hpp"
#include "finsler/navigation.hpp"
#include "finsler/riemann.hpp"
#include "finsler/sampling.hpp"
#include "json.hpp"
#include "report.hpp"

namespace finsler::cli {

namespace {

constexpr double kFallbackTol = 1e-6;
constexpr double kPrioriTol = 1e-8;
constexpr double kNormMatchTol = 1e-10;

struct RunConfig {
  std::string solution;
  std::string params;
  int samples = 100;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string format = "json";
  std::string output;
  int jobs = 1;
  // deform
  std::string direction = "forward";
  std::string point;
  std::string y;
  // priori
  std::string data = "auto";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double default_tol() {
  const char* env = std::getenv("FINSLER_VERIFY_DEFAULT_TOL");
  if (!env || !*env) return kFallbackTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0)) {
    throw UsageError(std::string("FINSLER_VERIFY_DEFAULT_TOL is not a positive number: ") + env);
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read params file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON when the argument starts with '{', otherwise a file path.
ParamMap parse_params(const std::string& arg) {
  if (arg.empty()) return {};
  const auto first = arg.find_first_not_of(" \t\r\n");
  const std::string text = first != std::string::npos && arg[first] == '{' ? arg : read_file(arg);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParams(std::string("params: invalid JSON: ") + e.what());
  }
  // Accept both a bare parameter object and {"solution": ..., "params": {...}}.
  if (j.is_object() && j.contains("params") && j["params"].is_object()) j = j["params"];
  if (!j.is_object()) throw InvalidParams("params: expected a JSON object");
  ParamMap p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number()) throw InvalidParams("params: value of '" + it.key() + "' is not a number");
    p[it.key()] = it.value().get<double>();
  }
  return p;
}

std::string solution_from_params(const std::string& arg) {
  if (arg.empty()) return {};
  const auto first = arg.find_first_not_of(" \t\r\n");
  const std::string text = first != std::string::npos && arg[first] == '{' ? arg : read_file(arg);
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_object() && j.contains("solution") && j["solution"].is_string()) return j["solution"].get<std::string>();
  return {};
}

Eigen::VectorXd parse_vector(const std::string& arg, int dim, const char* what) {
  std::string s = arg;
  for (char& c : s)
    if (c == ',' || c == '[' || c == ']') c = ' ';
  std::istringstream in(s);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double d = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw UsageError(std::string(what) + ": not a number: " + tok);
    v.push_back(d);
  }
  if (static_cast<int>(v.size()) != dim) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(dim) + " components, got " +
                     std::to_string(v.size()));
  }
  return Eigen::Map<Eigen::VectorXd>(v.data(), dim);
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty() || cfg.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw UsageError("cannot write output file: " + cfg.output);
  f << text;
}

SolutionEntry resolve_entry(const RunConfig& cfg) {
  std::string name = cfg.solution;
  if (name.empty()) name = solution_from_params(cfg.params);
  if (name.empty()) throw UsageError("--solution is required");
  return catalog_get(name, parse_params(cfg.params));
}

nlohmann::json vec_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

nlohmann::json params_json(const ParamMap& p) {
  nlohmann::json o = nlohmann::json::object();
  for (const auto& [k, v] : p) o[k] = v;
  return o;
}

// ---------------------------------------------------------------------------

int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
  const auto list = catalog_list();
  if (cfg.format == "json") {
    write_output(cfg, dump_json(catalog_json(list)), out);
  } else if (cfg.format == "text") {
    write_output(cfg, catalog_text(list), out);
  } else {
    throw UsageError("catalog supports --format json|text");
  }
  return kExitPass;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const SolutionEntry entry = resolve_entry(cfg);
  VerifyOptions opt;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.tol = cfg.tol.value_or(default_tol());
  opt.jobs = cfg.jobs;
  const VerificationReport rep = verify_solution(entry, opt);
  if (cfg.format == "json") {
    write_output(cfg, dump_json(report_json(rep)), out);
  } else if (cfg.format == "csv") {
    write_output(cfg, report_csv(rep), out);
  } else {
    write_output(cfg, report_text(rep), out);
  }
  return rep.pass ? kExitPass : kExitFail;
}

int cmd_deform(const RunConfig& cfg, std::ostream& out) {
  const SolutionEntry entry = resolve_entry(cfg);
  const Eigen::VectorXd x = cfg.point.empty() ? entry.anchor : parse_vector(cfg.point, entry.dim, "--point");
  const auto xs = as_span(x);
  if (!entry.contains(xs)) throw DomainError("deform: point lies outside the domain of " + entry.name);

  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = "deform";
  j["direction"] = cfg.direction;
  j["solution"] = entry.name;
  j["params"] = params_json(entry.params);
  j["point"] = vec_json(x);
  bool ok = true;

  if (cfg.direction == "forward") {
    if (!entry.navigation) throw UsageError(entry.name + " carries no navigation data; use --direction inverse");
    const NavigationData& nav = *entry.navigation;
    // Default direction: the wind itself, which lies inside the cone on both branches.
    const Eigen::VectorXd y = cfg.y.empty() ? wind_vector(nav, xs) : parse_vector(cfg.y, entry.dim, "--y");
    const ForwardValue v = navigation_forward(nav, xs, as_span(y));
    ok = std::abs(v.bbar - v.b) <= kNormMatchTol * std::max(1.0, v.b);
    j["y"] = vec_json(y);
    j["branch"] = to_string(nav.branch);
    j["alpha"] = v.alpha;
    j["beta"] = v.beta;
    j["F"] = v.F;
    j["bbar"] = v.bbar;
    j["b"] = v.b;
  } else if (cfg.direction == "inverse") {
    if (!entry.randers) throw UsageError(entry.name + " carries no Randers data");
    const RandersData& rd = *entry.randers;
    Eigen::VectorXd y;
    if (!cfg.y.empty()) {
      y = parse_vector(cfg.y, entry.dim, "--y");
    } else {
      // Default direction: b^i, or e_1 when beta vanishes at x.
      y = rd.alpha.values(xs).inverse() * rd.beta.values(xs);
      if (y.norm() == 0.0) y = Eigen::VectorXd::Unit(entry.dim, 0);
    }
    const InverseValue v = navigation_inverse(rd, xs, as_span(y));
    const NavigationData nav = navigation_inverse_data(rd, xs);
    const double bbar = std::sqrt(std::abs(wind_norm_squared(nav, xs)));
    ok = std::abs(bbar - v.b) <= kNormMatchTol * std::max(1.0, v.b);
    j["y"] = vec_json(y);
    j["branch"] = to_string(v.branch);
    j["alpha_bar_squared"] = v.alpha_bar_squared;
    j["beta_bar"] = v.beta_bar;
    j["b"] = v.b;
    j["bbar"] = bbar;
  } else {
    throw UsageError("--direction must be forward or inverse");
  }
  j["norms_match"] = ok;

  if (cfg.format == "json") {
    write_output(cfg, dump_json(j), out);
  } else {
    std::ostringstream os;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "schema") continue;
      std::string v = dump_json(it.value(), 0);
      v.pop_back();
      os << it.key() << " = " << v << '\n';
    }
    write_output(cfg, os.str(), out);
  }
  return ok ? kExitPass : kExitFail;
}

int cmd_priori(const RunConfig& cfg, std::ostream& out) {
  PseudoRiemannMetric metric;
  OneForm form;
  std::vector<ClassificationSample> points;
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = "priori";

  if (cfg.solution.empty() && solution_from_params(cfg.params).empty()) {
    // A seeded random analytic pair on the box |x_i| <= 0.5.
    const RandersData rd = random_randers_data(cfg.seed);
    metric = rd.alpha;
    form = rd.beta;
    for (int i = 0; i < cfg.samples; ++i) {
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i) + 1);
      Eigen::VectorXd x = box_point(rng, Eigen::VectorXd::Constant(3, -0.5), Eigen::VectorXd::Constant(3, 0.5));
      points.push_back({x, sphere_direction(rng, 3)});
    }
    j["dataset"] = "random";
  } else {
    const SolutionEntry entry = resolve_entry(cfg);
    std::string data = cfg.data;
    if (data == "auto") data = entry.randers ? "randers" : "navigation";
    if (data == "randers" && entry.randers) {
      metric = entry.randers->alpha;
      form = entry.randers->beta;
    } else if (data == "navigation" && entry.navigation) {
      metric = entry.navigation->h;
      form = entry.navigation->w;
    } else {
      throw UsageError(entry.name + " carries no " + data + " data");
    }
    points = sample_points(entry, cfg.samples, cfg.seed);
    j["dataset"] = entry.name;
    j["params"] = params_json(entry.params);
    j["data"] = data;
  }

  std::map<std::string, double> worst;
  std::vector<std::string> order;
  double q_trace = 0.0;
  double overall = 0.0;
  for (const auto& s : points) {
    const PrioriResiduals r = check_priori_formulae(metric, form, as_span(s.x), as_span(s.y));
    for (const auto& id : r.identities) {
      if (!worst.count(id.name)) order.push_back(id.name);
      worst[id.name] = std::max(worst[id.name], id.residual);
    }
    q_trace = std::max(q_trace, r.q_trace);
    overall = std::max(overall, r.max_residual);
  }
  const double tol = cfg.tol.value_or(kPrioriTol);
  const bool pass = overall <= tol && q_trace <= tol;

  nlohmann::json ids = nlohmann::json::array();
  for (const auto& name : order) ids.push_back({{"name", name}, {"max_residual", worst[name]}});
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tol"] = tol;
  j["identities"] = ids;
  j["q_trace_max"] = q_trace;
  j["max_residual"] = overall;
  j["pass"] = pass;

  if (cfg.format == "json") {
    write_output(cfg, dump_json(j), out);
  } else if (cfg.format == "csv") {
    std::ostringstream os;
    os << "identity,max_residual\n";
    for (const auto& name : order) os << name << ',' << format_double(worst[name]) << '\n';
    os << "q_trace," << format_double(q_trace) << '\n';
    write_output(cfg, os.str(), out);
  } else {
    std::ostringstream os;
    for (const auto& name : order) {
      os << name << std::string(name.size() < 28 ? 28 - name.size() : 1, ' ') << format_double(worst[name]) << '\n';
    }
    os << "q^i_i" << std::string(23, ' ') << format_double(q_trace) << '\n';
    os << "result                      " << (pass ? "PASS" : "FAIL") << '\n';
    write_output(cfg, os.str(), out);
  }
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verify constant-curvature Randers and Lorentz solutions", "finsler-verify"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string tol_text;

  auto add_common = [&](CLI::App* sub, bool sampling) {
    sub->add_option("--solution", cfg.solution, "Catalog entry name or alias");
    sub->add_option("--params", cfg.params, "Parameters as inline JSON or a JSON file path");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--output", cfg.output, "Write the report to this file");
    if (sampling) {
      sub->add_option("--samples", cfg.samples, "Number of seeded samples")->check(CLI::PositiveNumber);
      sub->add_option("--seed", cfg.seed, "64-bit seed");
      sub->add_option("--tol", tol_text, "Residual tolerance (> 0)");
      sub->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    }
  };

  auto* catalog = app.add_subcommand("catalog", "List catalog entries");
  catalog->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  catalog->add_option("--output", cfg.output, "Write the listing to this file");

  auto* verify = app.add_subcommand("verify", "Verify an entry's curvature at seeded samples");
  add_common(verify, true);

  auto* deform = app.add_subcommand("deform", "Apply the navigation deformation at one point");
  add_common(deform, false);
  deform->add_option("--direction", cfg.direction, "forward: (h, w) -> (alpha, beta); inverse: the reverse")
      ->check(CLI::IsMember({"forward", "inverse"}));
  deform->add_option("--point", cfg.point, "Base point x, comma separated");
  deform->add_option("--y", cfg.y, "Tangent direction y, comma separated");

  auto* priori = app.add_subcommand("priori", "Residuals of the identities valid for every (alpha, beta)");
  add_common(priori, true);
  priori->add_option("--data", cfg.data, "Which pair of the entry to use")
      ->check(CLI::IsMember({"auto", "randers", "navigation"}));

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "finsler-verify: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (priori->parsed() && !priori->count("--samples")) cfg.samples = 10;
    if (!tol_text.empty()) {
      char* end = nullptr;
      const double t = std::strtod(tol_text.c_str(), &end);
      if (end == tol_text.c_str() || *end != '\0' || !(t > 0.0)) throw UsageError("--tol must be a positive number");
      cfg.tol = t;
    }
    if (catalog->parsed()) {
      if (!catalog->count("--format")) cfg.format = "text";
      return cmd_catalog(cfg, out);
    }
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (deform->parsed()) return cmd_deform(cfg, out);
    return cmd_priori(cfg, out);
  } catch (const SingularCase& e) {
    err << "finsler-verify: singular case: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "finsler-verify: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "finsler-verify: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "finsler-verify: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace finsler::cli
