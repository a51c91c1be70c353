// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/randers.hpp"
#include "oracle.hpp"

using namespace finsler;

namespace {

// Pinned tolerances.
constexpr double kFlagTol = 1e-6;
constexpr double kFunkKTol = 1e-8;
constexpr double kFunkSeconds = 10.0;
constexpr double kEinsteinTol = 1e-6;
constexpr double kRicciConstRelTol = 1e-6;
constexpr double kUnitNormTol = 1e-10;
constexpr double kCurlTol = 1e-6;
constexpr double kPrioriTol = 1e-8;
constexpr double kQTraceTol = 1e-12;
constexpr double kOracleTol = 1e-8;
constexpr double kRoundtripTol = 1e-12;
constexpr double kNormMatchTol = 1e-10;
constexpr double kNegativeFloor = 1e-3;
constexpr double kJetFdTol = 1e-6;
constexpr double kHomogeneityTol = 1e-10;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

VerifyOptions options(int samples, std::uint64_t seed = 7) {
  VerifyOptions o;
  o.samples = samples;
  o.seed = seed;
  o.tol = kFlagTol;
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome funk() {
  Outcome o;
  for (int n : {2, 3}) {
    const auto t0 = std::chrono::steady_clock::now();
    const SolutionEntry e = catalog_get("funk", {{"n", n}});
    const VerificationReport r = verify_solution(e, options(100));
    const double secs = seconds_since(t0);
    bool in_ball = true;
    for (const auto& rec : r.records) in_ball = in_ball && rec.x.norm() <= 0.9;
    const double dk = std::abs(r.K_mean + 0.25);
    o.pass = o.pass && r.pass && r.max_residual <= kFlagTol && dk <= kFunkKTol && secs <= kFunkSeconds && in_ball &&
             r.samples == 100;
    o.detail += "n=" + std::to_string(n) + ": residual " + fmt("%.2e", r.max_residual) + ", |K+1/4| " +
                fmt("%.2e", dk) + ", " + fmt("%.2f", secs) + " s" + (in_ball ? "" : ", point outside |x|<=0.9") + "; ";
  }
  return o;
}

Outcome superunit() {
  const SolutionEntry e = catalog_get("minkowski_superunit");
  const VerificationReport r = verify_solution(e, options(50));
  const int n = e.dim;
  bool region = true;
  double bmin = INFINITY;
  for (const auto& rec : r.records) {
    double l = rec.x(n - 1) * rec.x(n - 1);
    for (int i = 0; i < n - 1; ++i) l -= rec.x(i) * rec.x(i);
    const double xl = std::sqrt(std::max(0.0, l));
    region = region && l > 0.0 && xl > 1.1 && xl < 3.0;
    bmin = std::min(bmin, beta_norm(*e.randers, as_span(rec.x)));
  }
  Outcome o;
  o.pass = r.pass && r.max_residual <= kFlagTol && region && bmin > 1.0 && r.samples == 50;
  o.detail = "residual " + fmt("%.2e", r.max_residual) + ", min b " + fmt("%.4f", bmin) +
             (region ? ", all |x|_L in (1.1, 3)" : ", sample outside (1.1, 3)");
  return o;
}

Outcome ricci_flat() {
  Outcome o;
  for (const char* name : {"schwarzschild_randers", "kerr_randers", "c_metric_randers"}) {
    const SolutionEntry e = catalog_get(name);
    const VerificationReport r = verify_solution(e, options(50));
    // Independent of the report: |Ric| / ((n - 1) F^2) recomputed per sample.
    double worst = 0.0;
    for (const auto& rec : r.records) {
      const double f = e.metric(as_span(rec.x), as_span(rec.y));
      worst = std::max(worst, std::abs(ricci_scalar(e.metric, as_span(rec.x), as_span(rec.y))) / ((e.dim - 1) * f * f));
    }
    o.pass = o.pass && r.pass && worst <= kEinsteinTol && r.samples == 50;
    o.detail += std::string(name) + " " + fmt("%.2e", worst) + "; ";
  }
  return o;
}

Outcome ricci_constants() {
  Outcome o;
  const std::pair<const char*, std::pair<ParamMap, double>> cases[] = {
      {"kasner_randers", {{{"lambda", 3.0}}, -2.25}},
      {"cartor_randers", {{{"lambda", 2.0}}, -4.0 / 9.0}},
  };
  for (const auto& [name, want] : cases) {
    const SolutionEntry e = catalog_get(name, want.first);
    const VerificationReport r = verify_solution(e, options(50));
    double worst = 0.0;
    for (const auto& rec : r.records) worst = std::max(worst, std::abs(rec.K_estimate - want.second));
    const double rel = worst / std::abs(want.second);
    const double mean_rel = std::abs(r.K_mean - want.second) / std::abs(want.second);
    o.pass = o.pass && rel <= kRicciConstRelTol && r.pass;
    o.detail += std::string(name) + " K " + fmt("%.10f", r.K_mean) + " (max rel dev " + fmt("%.1e", rel) +
                ", mean " + fmt("%.1e", mean_rel) + "); ";
  }
  return o;
}

Outcome singular() {
  const SolutionEntry e = catalog_get("singular_hyperbolic");
  const VerificationReport r = verify_solution(e, options(50));
  double bdev = 0.0, curl = 0.0;
  bool branch = true;
  for (const auto& rec : r.records) {
    bdev = std::max(bdev, std::abs(beta_norm(*e.randers, as_span(rec.x)) - 1.0));
    const CharacterizationReport c =
        check_cfc_characterization(*e.randers, -0.25, std::nullopt, as_span(rec.x), as_span(rec.y));
    branch = branch && c.unit_branch;
    for (const auto& res : c.residuals)
      if (res.name == "s_curl_condition") curl = std::max(curl, res.residual);
  }
  bool raised = false;
  try {
    navigation_inverse(*e.randers, as_span(e.anchor), as_span(e.anchor));
  } catch (const SingularCase&) {
    raised = true;
  }
  Outcome o;
  o.pass = bdev <= kUnitNormTol && r.pass && r.max_residual <= kFlagTol && branch && curl <= kCurlTol && raised &&
           r.samples == 50;
  o.detail = "|b-1| " + fmt("%.1e", bdev) + ", flag residual " + fmt("%.2e", r.max_residual) + ", s-curl residual " +
             fmt("%.2e", curl) + (raised ? ", SingularCase raised" : ", SingularCase NOT raised");
  return o;
}

Outcome priori() {
  double worst = 0.0, q = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RandersData d = oracle::random_pair(seed);
    for (int i = 0; i < 10; ++i) {
      const auto [x, y] = oracle::random_xy(seed, i, 3);
      const PrioriResiduals r = check_priori_formulae(d.alpha, d.beta, as_span(x), as_span(y));
      worst = std::max(worst, r.max_residual);
      q = std::max(q, r.q_trace);
    }
  }
  return {worst <= kPrioriTol && q <= kQTraceTol, "max residual " + fmt("%.2e", worst) + ", q^i_i " + fmt("%.2e", q)};
}

Outcome oracle_equivalence() {
  double ric = 0.0, riem = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RandersData d = oracle::random_pair(seed);
    const FinslerMetric F = assemble_randers(d);
    for (int i = 0; i < 10; ++i) {
      const auto [x, y] = oracle::random_xy(seed, i, 3);
      const CurvatureBundle cb = curvature_bundle(F, as_span(x), as_span(y));
      const double f2 = cb.F * cb.F;
      ric = std::max(ric, std::abs(randers_ricci_closed_form(d, as_span(x), as_span(y)) - cb.ricci) /
                              (std::abs(cb.ricci) + 2.0 * f2));
      riem = std::max(riem, (randers_riemann_closed_form(d, as_span(x), as_span(y)) - cb.R).cwiseAbs().maxCoeff() /
                                (cb.R.cwiseAbs().maxCoeff() + f2));
    }
  }
  return {ric <= kOracleTol && riem <= kOracleTol,
          "Ricci rel " + fmt("%.2e", ric) + ", Riemann rel " + fmt("%.2e", riem)};
}

Outcome navigation() {
  double round = 0.0, norm = 0.0;
  for (int branch = 0; branch < 2; ++branch) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const RandersData d = branch == 0 ? oracle::random_pair(seed) : oracle::random_superunit_pair(seed);
      const FinslerMetric F = assemble_randers(d);
      int used = 0;
      for (int k = 0; used < 20; ++k) {
        const auto [x, y] = oracle::random_xy(seed + 100 * static_cast<std::uint64_t>(branch), k, 3);
        const double f = F(as_span(x), as_span(y));
        if (f < 0.05 * std::sqrt(y.dot(d.alpha.values(as_span(x)) * y))) continue;
        ++used;
        const NavigationData nav = navigation_inverse_data(d, as_span(x));
        const ForwardValue fw = navigation_forward(nav, as_span(x), as_span(y));
        round = std::max(round, std::abs(fw.F - f) / std::max(1.0, std::abs(f)));
        norm = std::max(norm, std::abs(fw.bbar - beta_norm(d, as_span(x))));
      }
    }
  }
  const SolutionEntry sup = catalog_get("minkowski_superunit");
  // Homothetic factor 1 of the wind is classification constant c = -1 (K depends on c^2).
  const ClassificationReport a = verify_classification(*sup.navigation, 0.0, -1.0, -0.25, sample_points(sup, 20, 1));
  const SolutionEntry ds = catalog_get("lorentz_space_form", {{"mu", 1.0}});
  const ClassificationReport b = verify_classification(*ds.navigation, 1.0, 0.0, 1.0, sample_points(ds, 20, 1));
  return {round <= kRoundtripTol && norm <= kNormMatchTol && a.pass && b.pass,
          "roundtrip " + fmt("%.1e", round) + ", |bbar-b| " + fmt("%.1e", norm) + ", (0, factor 1): K " +
              fmt("%.4f", a.K_predicted) + " residual " + fmt("%.1e", a.max_curvature_residual) +
              ", de Sitter (1, 0): K " + fmt("%.4f", b.K_predicted) + " residual " +
              fmt("%.1e", b.max_curvature_residual)};
}

Outcome negative_control() {
  const SolutionEntry e = catalog_get("funk", {{"perturbation", 0.01}});
  const VerificationReport r = verify_solution(e, options(50));
  double worst_char = 0.0;
  for (const auto& rec : r.records)
    worst_char = std::max(worst_char, check_cfc_characterization(*e.randers, -0.25, std::nullopt, as_span(rec.x),
                                                                 as_span(rec.y))
                                          .max_residual);
  std::ostringstream out, err;
  const int code = cli::run({"finsler-verify", "verify", "--solution", "funk", "--params", R"({"perturbation":0.01})",
                             "--samples", "50", "--seed", "7"},
                            out, err);
  const bool char_fail = r.characterization_pass.has_value() && !*r.characterization_pass && worst_char >= kNegativeFloor;
  return {r.max_residual >= kNegativeFloor && !r.pass && char_fail && code == cli::kExitFail,
          "flag residual " + fmt("%.2e", r.max_residual) + ", characterization " + fmt("%.2e", worst_char) +
              ", verify exit " + std::to_string(code)};
}

Outcome jets() {
  const oracle::CompositeFdReport fd = oracle::composite_fd_check(2024, 50);
  double hom = 0.0, euler = 0.0;
  for (const auto& info : catalog_list()) {
    const SolutionEntry e = catalog_get(info.name);
    for (const auto& s : sample_points(e, 10, 11)) {
      const Jet j = jet_eval(e.metric.value, as_span(s.x), as_span(s.y), {0, 1});
      const double F = j.value();
      double ey = 0.0;
      for (int i = 0; i < e.dim; ++i) ey += s.y(i) * j.partial(MultiIndex::of(2 * e.dim, {e.dim + i}));
      euler = std::max(euler, std::abs(ey - F) / std::abs(F));
      for (double lam : {0.5, 2.0, 7.0}) {
        const Eigen::VectorXd ly = lam * s.y;
        hom = std::max(hom, std::abs(e.metric(as_span(s.x), as_span(ly)) - lam * F) / (lam * std::abs(F)));
      }
    }
  }
  return {fd.composites == 50 && fd.max_rel_error <= kJetFdTol && hom <= kHomogeneityTol && euler <= kHomogeneityTol,
          std::to_string(fd.composites) + " composites / " + std::to_string(fd.coefficients) +
              " coefficients, FD rel " + fmt("%.1e", fd.max_rel_error) + ", homogeneity " + fmt("%.1e", hom) +
              ", Euler " + fmt("%.1e", euler)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"funk flag curvature -1/4, n=2,3, 100 samples", funk},
      {"super-unit flat Lorentz example, flag -1/4, b > 1", superunit},
      {"schwarzschild / kerr / c-metric Ricci-flat", ricci_flat},
      {"kasner -2.25 and cartor -4/9 Ricci constants", ricci_constants},
      {"singular b = 1 example", singular},
      {"identities valid for every (alpha, beta)", priori},
      {"closed-form Ricci / Riemann vs Berwald pipeline", oracle_equivalence},
      {"navigation roundtrip and classification", navigation},
      {"perturbed funk negative control", negative_control},
      {"jet engine vs finite differences, homogeneity, Euler", jets},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] criterion %2zu: %s -- %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
