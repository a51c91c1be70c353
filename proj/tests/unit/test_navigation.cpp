#include <gtest/gtest.h>

#include <cmath>

#include "finsler/catalog.hpp"
#include "finsler/errors.hpp"
#include "finsler/navigation.hpp"
#include "oracle.hpp"

using namespace finsler;

namespace {

NavigationData euclid_wind(const Eigen::Vector2d& w) {
  return {euclidean_metric(2), constant_one_form(w), NavigationBranch::riemann_sub_unit};
}

// (x, y) with y away from the null cone of alpha + beta.
std::pair<Eigen::VectorXd, Eigen::VectorXd> admissible_xy(const RandersData& d, std::uint64_t seed, int index) {
  const FinslerMetric F = assemble_randers(d);
  for (int k = 0;; ++k) {
    auto [x, y] = oracle::random_xy(seed, index * 1000 + k, 3);
    const double a = std::sqrt(y.dot(d.alpha.values(as_span(x)) * y));
    if (F(as_span(x), as_span(y)) >= 0.05 * a) return {x, y};
  }
}

}  // namespace

TEST(Forward, NoWindGivesAlpha) {
  const ForwardValue v = navigation_forward(euclid_wind({0.0, 0.0}), std::vector<double>{0.3, 0.2},
                                            std::vector<double>{3.0, 4.0});
  EXPECT_NEAR(v.F, 5.0, 1e-15);
  EXPECT_EQ(v.beta, 0.0);
  EXPECT_EQ(v.bbar, 0.0);
}

TEST(Forward, HandComputedValue) {
  const ForwardValue v = navigation_forward(euclid_wind({0.6, 0.0}), std::vector<double>{0.0, 0.0},
                                            std::vector<double>{1.0, 0.0});
  EXPECT_NEAR(v.F, 0.625, 1e-15);
  EXPECT_NEAR(v.bbar, 0.6, 1e-15);
  EXPECT_NEAR(v.b, 0.6, 1e-12);
}

TEST(Forward, SuperUnitDisplay) {
  const SolutionEntry e = catalog_get("minkowski_superunit");
  const int n = e.dim;
  for (const auto& s : sample_points(e, 10, 3)) {
    // F = [sqrt((1 - <x,x>) <y,y> + <x,y>^2) + <x,y>] / (<x,x> - 1), Lorentz products.
    auto L = [n](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
      double r = u(n - 1) * v(n - 1);
      for (int i = 0; i < n - 1; ++i) r -= u(i) * v(i);
      return r;
    };
    const double xx = L(s.x, s.x), xy = L(s.x, s.y), yy = L(s.y, s.y);
    const double expected = (std::sqrt((1.0 - xx) * yy + xy * xy) + xy) / (xx - 1.0);
    const ForwardValue v = navigation_forward(*e.navigation, as_span(s.x), as_span(s.y));
    EXPECT_NEAR(v.F, expected, 1e-12 * std::max(1.0, std::abs(expected)));
    EXPECT_NEAR(e.metric(as_span(s.x), as_span(s.y)), expected, 1e-12 * std::max(1.0, std::abs(expected)));
    EXPECT_GT(v.b, 1.0);
  }
}

TEST(Forward, BranchViolations) {
  EXPECT_THROW(navigation_forward(euclid_wind({1.5, 0.0}), std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 0.0}),
               BranchViolation);
  NavigationData lor{minkowski_metric(2), constant_one_form(Eigen::Vector2d(0.0, 0.5)),
                     NavigationBranch::lorentz_super_unit};
  EXPECT_THROW(navigation_forward(lor, std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, 1.0}), BranchViolation);
  NavigationData wrong_sig{euclidean_metric(2), constant_one_form(Eigen::Vector2d(0.0, 2.0)),
                           NavigationBranch::lorentz_super_unit};
  EXPECT_THROW(check_branch(wrong_sig, std::vector<double>{0.0, 0.0}), BranchViolation);
}

TEST(Inverse, ZeroFormIsIdentity) {
  const RandersData r = oracle::random_pair(2);
  const RandersData d{r.alpha, zero_one_form(3)};
  const auto [x, y] = oracle::random_xy(2, 0, 3);
  const InverseValue v = navigation_inverse(d, as_span(x), as_span(y));
  EXPECT_NEAR(v.alpha_bar_squared, y.dot(r.alpha.values(as_span(x)) * y), 1e-15);
  EXPECT_EQ(v.beta_bar, 0.0);
  const NavigationData nav = navigation_inverse_data(d, as_span(x));
  EXPECT_LT((nav.h.values(as_span(x)) - r.alpha.values(as_span(x))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Inverse, FunkDeformsToEuclidean) {
  const SolutionEntry e = catalog_get("funk", {{"n", 3}});
  for (const auto& s : sample_points(e, 5, 4)) {
    const NavigationData nav = navigation_inverse_data(*e.randers, as_span(s.x));
    EXPECT_EQ(nav.branch, NavigationBranch::riemann_sub_unit);
    EXPECT_LT((nav.h.values(as_span(s.x)) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(riemann_alpha(nav.h, as_span(s.x), as_span(s.y)).R.cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(std::sqrt(wind_norm_squared(nav, as_span(s.x))), s.x.norm(), 1e-12);
    const InverseValue v = navigation_inverse(*e.randers, as_span(s.x), as_span(s.y));
    EXPECT_NEAR(v.alpha_bar_squared, s.y.squaredNorm(), 1e-12);
    EXPECT_NEAR(std::abs(v.beta_bar), std::abs(s.x.dot(s.y)), 1e-12);
  }
}

TEST(Inverse, SuperUnitRecoversMinkowskiAndHomotheticWind) {
  const SolutionEntry e = catalog_get("minkowski_superunit");
  const Eigen::MatrixXd L = minkowski_metric(e.dim).values(as_span(e.anchor));
  for (const auto& s : sample_points(e, 5, 4)) {
    const NavigationData nav = navigation_inverse_data(*e.randers, as_span(s.x));
    EXPECT_EQ(nav.branch, NavigationBranch::lorentz_super_unit);
    EXPECT_LT((nav.h.values(as_span(s.x)) - L).cwiseAbs().maxCoeff(), 1e-10);
    const HomothetyEstimate he = check_homothety(nav.h, nav.w, as_span(s.x));
    EXPECT_NEAR(he.factor, 1.0, 1e-9);
    EXPECT_NEAR(he.c, -1.0, 1e-9);
    EXPECT_LT(he.residual, 1e-9);
  }
}

TEST(Inverse, SingularCaseRejected) {
  const SolutionEntry e = catalog_get("singular_hyperbolic");
  EXPECT_THROW(navigation_inverse(*e.randers, as_span(e.anchor), as_span(e.anchor)), SingularCase);
  EXPECT_THROW(navigation_inverse_data(*e.randers, as_span(e.anchor)), SingularCase);
}

TEST(Roundtrip, BothBranches) {
  for (int branch = 0; branch < 2; ++branch) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const RandersData d = branch == 0 ? oracle::random_pair(seed) : oracle::random_superunit_pair(seed);
      const FinslerMetric F = assemble_randers(d);
      for (int i = 0; i < 20; ++i) {
        const auto [x, y] = admissible_xy(d, seed + 100 * branch, i);
        const double b = beta_norm(d, as_span(x));
        ASSERT_EQ(b < 1.0, branch == 0);
        const NavigationData nav = navigation_inverse_data(d, as_span(x));
        const Signature sig = detect_signature(nav.h.values(as_span(x)));
        EXPECT_TRUE(branch == 0 ? sig.is_riemann() : sig.is_lorentz());

        const double f = F(as_span(x), as_span(y));
        const ForwardValue fw = navigation_forward(nav, as_span(x), as_span(y));
        EXPECT_NEAR(fw.F, f, 1e-12 * std::max(1.0, std::abs(f)));
        EXPECT_NEAR(navigation_metric(nav)(as_span(x), as_span(y)), f, 1e-12 * std::max(1.0, std::abs(f)));
        EXPECT_NEAR(fw.bbar, b, 1e-10);
        EXPECT_NEAR(fw.b, b, 1e-10);

        // Value-level inverse fed back through the forward formula.
        const InverseValue iv = navigation_inverse(d, as_span(x), as_span(y));
        const double bb2 = b * b;
        const double root = std::sqrt((1.0 - bb2) * iv.alpha_bar_squared + iv.beta_bar * iv.beta_bar);
        const double back = branch == 0 ? (root - iv.beta_bar) / (1.0 - bb2) : (root + iv.beta_bar) / (bb2 - 1.0);
        EXPECT_NEAR(back, f, 1e-12 * std::max(1.0, std::abs(f)));
      }
    }
  }
}

TEST(Homothety, ZeroWind) {
  const HomothetyEstimate he = check_homothety(euclidean_metric(3), zero_one_form(3), std::vector<double>{0.1, 0.2, 0.3});
  EXPECT_EQ(he.c, 0.0);
  EXPECT_EQ(he.residual, 0.0);
}

TEST(Homothety, FlatLorentzFamily) {
  for (double c : {-0.5, 0.3, 1.0}) {
    const SolutionEntry e = catalog_get("lorentz_space_form", {{"mu", 0.0}, {"c", c}, {"q", 0.4}, {"a", 2.0}});
    for (const auto& s : sample_points(e, 3, 2)) {
      const HomothetyEstimate he = check_homothety(e.navigation->h, e.navigation->w, as_span(s.x));
      EXPECT_NEAR(he.factor, c, 1e-12);
      EXPECT_LT(he.residual, 1e-9);
      EXPECT_NEAR(he.antisymmetric, 0.4, 1e-12);
    }
  }
}

TEST(Homothety, KasnerWind) {
  for (double lambda : {1.0, 3.0}) {
    const SolutionEntry e = catalog_get("kasner_randers", {{"lambda", lambda}});
    for (const auto& s : sample_points(e, 3, 2)) {
      const HomothetyEstimate he = check_homothety(e.navigation->h, e.navigation->w, as_span(s.x));
      EXPECT_NEAR(he.factor, lambda, 1e-10 * lambda);
      EXPECT_LT(he.residual, 1e-9 * lambda);
    }
  }
}

TEST(Classification, SuperUnitFlatHomothetic) {
  const SolutionEntry e = catalog_get("minkowski_superunit");
  // Homothetic factor 1, i.e. classification constant c = -1.
  const ClassificationReport r = verify_classification(*e.navigation, 0.0, -1.0, -0.25, sample_points(e, 20, 1));
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.K_predicted, -0.25);
  EXPECT_LE(r.max_curvature_residual, 1e-6);
}

TEST(Classification, ConstantWindIsLocallyMinkowski) {
  SolutionEntry e = catalog_get("riemann_space_form", {{"mu", 0.0}, {"c", 0.0}, {"q", 0.0}, {"a", 0.3}});
  const ClassificationReport r = verify_classification(*e.navigation, 0.0, 0.0, 0.0, sample_points(e, 10, 1));
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_curvature_residual, 1e-10);
}

TEST(Classification, DeSitterKillingWind) {
  for (const char* name : {"lorentz_space_form", "riemann_space_form"}) {
    const SolutionEntry e = catalog_get(name, {{"mu", 1.0}});
    const ClassificationReport r = verify_classification(*e.navigation, 1.0, 0.0, 1.0, sample_points(e, 20, 1));
    EXPECT_TRUE(r.pass) << name;
    EXPECT_LE(r.max_curvature_residual, 1e-6) << name;
  }
}

TEST(Classification, PrerequisitesEnforced) {
  const SolutionEntry e = catalog_get("riemann_space_form", {{"mu", 1.0}});
  const auto pts = sample_points(e, 3, 1);
  EXPECT_THROW(verify_classification(*e.navigation, 0.5, 0.0, 0.5, pts), PrerequisiteFailed);
  EXPECT_THROW(verify_classification(*e.navigation, 1.0, 0.7, 1.0 - 0.49 / 4.0, pts), PrerequisiteFailed);
}
