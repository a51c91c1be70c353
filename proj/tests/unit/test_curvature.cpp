#include <gtest/gtest.h>

#include <cmath>

#include "finsler/catalog.hpp"
#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/riemann.hpp"
#include "oracle.hpp"

using namespace finsler;

namespace {

Eigen::MatrixXd space_form_target(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double mu) {
  const double a00 = y.dot(a * y);
  return mu * (a00 * Eigen::MatrixXd::Identity(y.size(), y.size()) - y * (a * y).transpose());
}

double flag_scaled(const FinslerMetric& F, const ClassificationSample& s, double K) {
  const double f = F(as_span(s.x), as_span(s.y));
  return flag_residual(F, as_span(s.x), as_span(s.y), K).cwiseAbs().maxCoeff() / (f * f);
}

}  // namespace

TEST(Spray, RiemannReducesToChristoffel) {
  const RandersData d = oracle::random_pair(2);
  const FinslerMetric F = riemann_norm(d.alpha);
  for (int i = 0; i < 5; ++i) {
    const auto [x, y] = oracle::random_xy(2, i, 3);
    const Eigen::VectorXd G = spray_coefficients(F, as_span(x), as_span(y));
    const Tensor3 gam = christoffel(d.alpha, as_span(x));
    for (int k = 0; k < 3; ++k) {
      double half = 0.0;
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) half += 0.5 * gam(k, p, q) * y(p) * y(q);
      EXPECT_NEAR(G(k), half, 1e-12);
    }
  }
}

TEST(Spray, LocallyMinkowskiHasNoSpray) {
  RandersData d{euclidean_metric(3), constant_one_form(Eigen::Vector3d(0.2, -0.1, 0.3))};
  const Eigen::VectorXd G =
      spray_coefficients(assemble_randers(d), std::vector<double>{0.1, 0.4, -0.2}, std::vector<double>{1.0, 0.3, 0.2});
  EXPECT_LT(G.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Spray, FunkIsProjectivelyFlat) {
  // With the minus sign on <x,y>, F_{x^k} = -F F_{y^k}, hence G^i = -F y^i / 2.
  const SolutionEntry e = catalog_get("funk", {{"n", 3}});
  for (const auto& s : sample_points(e, 10, 3)) {
    const double f = e.metric(as_span(s.x), as_span(s.y));
    const Eigen::VectorXd G = spray_coefficients(e.metric, as_span(s.x), as_span(s.y));
    EXPECT_LT((G + 0.5 * f * s.y).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, f));
  }
}

TEST(Spray, TwoHomogeneous) {
  const SolutionEntry e = catalog_get("kerr_randers");
  for (const auto& s : sample_points(e, 5, 3)) {
    const Eigen::VectorXd G1 = spray_coefficients(e.metric, as_span(s.x), as_span(s.y));
    const Eigen::VectorXd y2 = 2.0 * s.y;
    const Eigen::VectorXd G2 = spray_coefficients(e.metric, as_span(s.x), as_span(y2));
    EXPECT_LT((G2 - 4.0 * G1).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, G1.norm()));
  }
}

TEST(Berwald, FlatVanishes) {
  const Eigen::MatrixXd R = berwald_riemann(riemann_norm(euclidean_metric(3)), std::vector<double>{0.1, 0.2, 0.3},
                                            std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_EQ(R.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Berwald, SpaceForm) {
  for (double mu : {-1.0, 1.0}) {
    const SolutionEntry e = catalog_get("riemann_space_form", {{"mu", mu}});
    const FinslerMetric F = riemann_norm(e.navigation->h);
    for (int i = 0; i < 5; ++i) {
      const auto [x, y] = oracle::random_xy(21, i, 3);
      const Eigen::MatrixXd R = berwald_riemann(F, as_span(x), as_span(y));
      EXPECT_LT((R - space_form_target(e.navigation->h.values(as_span(x)), y, mu)).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(Berwald, FunkHasFlagCurvatureMinusQuarter) {
  for (int n : {2, 3}) {
    const SolutionEntry e = catalog_get("funk", {{"n", n}});
    for (const auto& s : sample_points(e, 20, 5)) EXPECT_LE(flag_scaled(e.metric, s, -0.25), 1e-6);
  }
}

TEST(Berwald, SuperUnitExampleHasFlagCurvatureMinusQuarter) {
  const SolutionEntry e = catalog_get("minkowski_superunit");
  for (const auto& s : sample_points(e, 20, 5)) EXPECT_LE(flag_scaled(e.metric, s, -0.25), 1e-6);
}

TEST(Berwald, RicciIsTraceAndNullVectorOfR) {
  const SolutionEntry e = catalog_get("c_metric_randers");
  for (const auto& s : sample_points(e, 5, 5)) {
    const CurvatureBundle c = curvature_bundle(e.metric, as_span(s.x), as_span(s.y));
    EXPECT_NEAR(c.ricci, c.R.trace(), 1e-15 * std::max(1.0, std::abs(c.ricci)));
    // R^i_k y^k = 0
    EXPECT_LT((c.R * s.y).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, c.R.cwiseAbs().maxCoeff()));
  }
}

TEST(Ricci, FlatVanishes) {
  EXPECT_EQ(ricci_scalar(riemann_norm(euclidean_metric(2)), std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 1.0}),
            0.0);
}

TEST(Ricci, SchwarzschildLorentzIsRicciFlat) {
  const SolutionEntry e = catalog_get("schwarzschild_randers");
  const FinslerMetric F = riemann_norm(e.navigation->h);
  for (const auto& s : sample_points(e, 10, 6)) {
    const Eigen::VectorXd W = wind_vector(*e.navigation, as_span(s.x));  // timelike
    const double f = F(as_span(s.x), as_span(W));
    EXPECT_LE(std::abs(ricci_scalar(F, as_span(s.x), as_span(W))), 1e-6 * f * f);
  }
}

TEST(Ricci, CartorLorentzIsEinstein) {
  const SolutionEntry e = catalog_get("cartor_randers");
  const FinslerMetric F = riemann_norm(e.navigation->h);
  for (const auto& s : sample_points(e, 10, 6)) {
    const Eigen::VectorXd W = wind_vector(*e.navigation, as_span(s.x));
    EXPECT_NEAR(estimate_K(F, as_span(s.x), as_span(W)), -4.0 / 9.0, 1e-8);
  }
}

TEST(Ricci, TensorContractsToScalar) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const RandersData d = oracle::random_pair(seed);
    const FinslerMetric F = assemble_randers(d);
    for (int i = 0; i < 3; ++i) {
      const auto [x, y] = oracle::random_xy(seed, i, 3);
      const CurvatureBundle c = curvature_bundle(F, as_span(x), as_span(y), true);
      ASSERT_TRUE(c.ricci_tensor.has_value());
      const double contracted = y.dot(*c.ricci_tensor * y);
      EXPECT_NEAR(contracted, c.ricci, 1e-9 * std::max(1.0, std::abs(c.ricci)));
      EXPECT_LT((*c.ricci_tensor - c.ricci_tensor->transpose()).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Curvature, Homogeneity) {
  for (const char* name : {"kasner_randers", "funk", "levi_civita_randers"}) {
    const SolutionEntry e = catalog_get(name);
    for (const auto& s : sample_points(e, 5, 8)) {
      const CurvatureBundle c1 = curvature_bundle(e.metric, as_span(s.x), as_span(s.y));
      for (double lam : {0.5, 2.0}) {
        const Eigen::VectorXd ly = lam * s.y;
        const CurvatureBundle cl = curvature_bundle(e.metric, as_span(s.x), as_span(ly));
        const double scale = std::max(1.0, c1.R.cwiseAbs().maxCoeff());
        EXPECT_LT((cl.R - lam * lam * c1.R).cwiseAbs().maxCoeff(), 1e-10 * lam * lam * scale) << name;
        EXPECT_NEAR(cl.ricci, lam * lam * c1.ricci, 1e-10 * lam * lam * std::max(1.0, std::abs(c1.ricci))) << name;
      }
    }
  }
}

TEST(Curvature, KasnerRicciConstant) {
  for (double lambda : {1.0, 3.0}) {
    const SolutionEntry e = catalog_get("kasner_randers", {{"lambda", lambda}});
    for (const auto& s : sample_points(e, 10, 9)) {
      EXPECT_NEAR(estimate_K(e.metric, as_span(s.x), as_span(s.y)), -lambda * lambda / 4.0, 1e-6 * lambda * lambda);
    }
  }
}

TEST(Curvature, NullDirectionsAreRejected) {
  // b = 2: y with beta = -alpha is null, and g collapses there.
  RandersData d{euclidean_metric(2), constant_one_form(Eigen::Vector2d(0.0, 2.0))};
  const std::vector<double> x{0.0, 0.0}, y{std::sqrt(3.0), -1.0};
  EXPECT_THROW(estimate_K(assemble_randers(d), x, y), Error);
  EXPECT_THROW(curvature_bundle(assemble_randers(d), x, std::vector<double>{0.0, 0.0}), DomainError);
}

TEST(FlagForm, AnnihilatesY) {
  const SolutionEntry e = catalog_get("funk");
  const auto s = sample_points(e, 1, 1).front();
  const CurvatureBundle c = curvature_bundle(e.metric, as_span(s.x), as_span(s.y));
  EXPECT_LT((flag_form(c, as_span(s.y), -0.25) * s.y).cwiseAbs().maxCoeff(), 1e-12);
}
