#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gmap/mapping.hpp"
#include "test_util.hpp"

using namespace gmap;
namespace tu = gmap::testutil;

TEST_CASE("mapping_eval on the identity pair") {
  MetricField g = tu::klein_disc(3);
  VecN p{0.2, -0.15, 0.1};
  MappingEval ev = mapping_eval(g, g, p.span());
  CHECK(ev.Psi == 0.0);
  CHECK(ev.psi.norm_inf() == 0.0);
  CHECK((ev.a - g.value(p.span())).norm_inf() < 1e-14);
  CHECK(ev.lambda_alg.norm_inf() < 1e-14);
  CHECK(ev.lambda_route_gap < 1e-12);
  CHECK(ev.psi_ij.norm_inf() < 1e-13);
}

TEST_CASE("mapping_eval on a constant rescaling") {
  MetricField g = tu::flat_metric(4);
  MetricField gbar = scaled_metric(g, 4.0);
  VecN p{0.1, 0.2, -0.1, 0.05};
  MappingEval ev = mapping_eval(g, gbar, p.span());
  // det gbar = 4^4 det g, so Psi = (8 ln 2)/10
  CHECK(ev.Psi == doctest::Approx(0.8 * std::log(2.0)).epsilon(1e-14));
  CHECK(ev.Psi == doctest::Approx(0.5545177444479562).epsilon(1e-12));
  CHECK(ev.psi.norm_inf() < 1e-14);
  double factor = std::pow(2.0, 8.0 / 5.0) / 4.0;
  CHECK(factor == doctest::Approx(0.7578582832551990).epsilon(1e-14));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(ev.a(i, j) == doctest::Approx(factor * ev.point.n * 0.25 * (i == j)).epsilon(1e-12));
  CHECK(ev.lambda_alg.norm_inf() < 1e-14);
}

TEST_CASE("mapping_eval on the gnomonic pair") {
  MetricField g = tu::gnomonic_sphere(2);
  MetricField flat = tu::flat_metric(2);
  VecN p{0.3, 0.4};
  MappingEval ev = mapping_eval(g, flat, p.span());
  CHECK(ev.Psi == doctest::Approx(0.5 * std::log(1.25)).epsilon(1e-13));
  CHECK(ev.Psi == doctest::Approx(0.11157177565710485).epsilon(1e-12));
  CHECK(ev.psi[0] == doctest::Approx(0.24).epsilon(1e-13));
  CHECK(ev.psi[1] == doctest::Approx(0.32).epsilon(1e-13));
  // both lambda routes give -x_i/(1+r^2)^2
  double expect = -0.3 / (1.25 * 1.25);
  CHECK(ev.lambda_alg[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(ev.lambda_grad[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(ev.lambda_route_gap < 1e-12);
  // psi_ij equals g_ij for this pair (K = -1, flat target)
  Mat gv = g.value(p.span());
  CHECK((ev.psi_ij - gv).norm_inf() < 1e-12);
  CHECK(ev.K == doctest::Approx(-1.0).epsilon(1e-11));
  CHECK(std::abs(ev.Kbar) < 1e-11);
}

TEST_CASE("analytic first derivatives of the mapping fields match finite differences") {
  MetricField g = tu::gnomonic_sphere(2);
  MetricField gbar = tu::klein_disc(2);  // curved target exercises every term
  VecN p{0.17, -0.23};
  MappingEval ev = mapping_eval(g, gbar, p.span());
  const double h = 1e-5;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      double fd_psi = tu::fd_derivative(
          [&](const VecN& q) { return mapping_eval(g, gbar, q.span()).psi[i]; }, p, j, h);
      CHECK(ev.psi_partial(i, j) == doctest::Approx(fd_psi).epsilon(1e-6));
      double fd_lam = tu::fd_derivative(
          [&](const VecN& q) { return mapping_eval(g, gbar, q.span()).lambda_alg[i]; }, p, j, h);
      CHECK(ev.lambda_partial(i, j) == doctest::Approx(fd_lam).epsilon(1e-6));
      double fd_a = tu::fd_derivative(
          [&](const VecN& q) { return mapping_eval(g, gbar, q.span()).a(i, j); }, p, 0, h);
      CHECK(ev.da(i, j, 0) == doctest::Approx(fd_a).epsilon(1e-6));
    }
    double fd_mu = tu::fd_derivative(
        [&](const VecN& q) { return mapping_eval(g, gbar, q.span()).mu; }, p, j, h);
    VecN dmu = mapping_mu_gradient(g, gbar, p.span());
    CHECK(dmu[j] == doctest::Approx(fd_mu).epsilon(1e-6));
  }
}

TEST_CASE("levi-civita residual") {
  SUBCASE("constant rescaling is trivially geodesic") {
    MetricField g = tu::gnomonic_sphere(3);
    MetricField gbar = scaled_metric(g, 2.0);
    auto grid = g.chart().grid(4);
    LeviCivitaReport rep = levi_civita_residual(g, gbar, grid);
    CHECK(rep.metric_form.pass);
    CHECK(rep.metric_form.max_abs < 1e-10);
    CHECK(rep.connection_form.max_abs < 1e-10);
    CHECK(rep.max_abs_psi < 1e-12);
    CHECK(classify_mapping(rep) == MappingClass::TrivialAffine);
  }
  SUBCASE("gnomonic to flat passes in n = 2, 3, 4") {
    for (int n : {2, 3, 4}) {
      MetricField g = tu::gnomonic_sphere(n);
      MetricField flat = tu::flat_metric(n);
      auto grid = g.chart().grid(default_grid_per_axis(n));
      LeviCivitaReport rep = levi_civita_residual(g, flat, grid);
      CHECK(rep.metric_form.pass);
      CHECK(rep.metric_form.max_abs < 1e-8);
      CHECK(rep.connection_form.max_abs < 1e-8);
      CHECK(classify_mapping(rep) == MappingClass::NontrivialGeodesic);

      // oracle: the same residual from finite differences agrees
      LeviCivitaReport fd = levi_civita_residual(g, flat, grid, Backend::FiniteDifference);
      CHECK(fd.metric_form.max_abs < 1e-4);
    }
  }
  SUBCASE("negative control fails") {
    MetricField flat = tu::flat_metric(2);
    MetricField control = tu::curved_control2();
    auto grid = flat.chart().grid(5);
    LeviCivitaReport rep = levi_civita_residual(flat, control, grid);
    CHECK_FALSE(rep.metric_form.pass);
    CHECK(rep.metric_form.max_abs > 1e-2);
    CHECK(classify_mapping(rep) == MappingClass::NotGeodesic);
  }
}

TEST_CASE("sinyukov residual is equivalent to levi-civita") {
  struct Case {
    MetricField g, gbar;
    bool geodesic;
  };
  Case cases[] = {
      {tu::gnomonic_sphere(3), tu::flat_metric(3), true},
      {tu::klein_disc(3), tu::flat_metric(3), true},
      {tu::flat_metric(2), tu::curved_control2(), false},
      {tu::gnomonic_sphere(2), tu::curved_control2(), false},
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  for (const Case& c : cases) {
    auto grid = c.g.chart().grid(default_grid_per_axis(c.g.dim()));
    LeviCivitaReport lc = levi_civita_residual(c.g, c.gbar, grid);
    ResidualReport sin = sinyukov_residual(c.g, c.gbar, grid);
    CHECK(lc.metric_form.pass == c.geodesic);
    CHECK(sin.pass == c.geodesic);
    if (c.geodesic) CHECK(sin.max_abs < 1e-8);

    // equivalence survives constant rescalings of the target
    MetricField scaled = scaled_metric(c.gbar, scale(rng));
    LeviCivitaReport lc2 = levi_civita_residual(c.g, scaled, grid);
    ResidualReport sin2 = sinyukov_residual(c.g, scaled, grid);
    CHECK(lc2.metric_form.pass == sin2.pass);
    CHECK(lc2.metric_form.pass == c.geodesic);
  }
}

TEST_CASE("curvature transformation and weyl invariance") {
  SUBCASE("identity pair") {
    MetricField g = tu::klein_disc(3);
    auto grid = g.chart().grid(3);
    CurvatureTransformReport rep = curvature_transform_residual(g, g, grid);
    CHECK(rep.riemann.max_abs < 1e-12);
    CHECK(rep.ricci.max_abs < 1e-12);
    CHECK(rep.weyl.max_abs < 1e-12);
  }
  SUBCASE("gnomonic pair n=3") {
    MetricField g = tu::gnomonic_sphere(3);
    MetricField flat = tu::flat_metric(3);
    auto grid = g.chart().grid(4);
    CurvatureTransformReport rep = curvature_transform_residual(g, flat, grid);
    CHECK(rep.riemann.max_abs < 1e-8);
    CHECK(rep.ricci.max_abs < 1e-8);
    CHECK(rep.weyl.max_abs < 1e-8);
  }
  SUBCASE("gnomonic pair n=4 ricci transform") {
    MetricField g = tu::gnomonic_sphere(4);
    MetricField flat = tu::flat_metric(4);
    auto grid = g.chart().grid(3);
    CurvatureTransformReport rep = curvature_transform_residual(g, flat, grid);
    CHECK(rep.ricci.max_abs < 1e-8);
    CHECK(rep.weyl.max_abs < 1e-8);
  }
  SUBCASE("klein pair n=3 weyl invariance") {
    MetricField g = tu::klein_disc(3);
    MetricField flat = tu::flat_metric(3);
    auto grid = g.chart().grid(4);
    CurvatureTransformReport rep = curvature_transform_residual(g, flat, grid);
    CHECK(rep.weyl.max_abs < 1e-8);
  }
}

TEST_CASE("liouville surfaces: a geodesic pair with non-constant curvature") {
  tu::DiniPair dini = tu::dini_pair();
  auto grid = dini.g.chart().grid(5);

  LeviCivitaReport lc = levi_civita_residual(dini.g, dini.gbar, grid);
  CHECK(lc.metric_form.max_abs < 1e-12);
  CHECK(lc.connection_form.max_abs < 1e-12);
  CHECK(classify_mapping(lc) == MappingClass::NontrivialGeodesic);
  CHECK(lc.max_lambda_route_gap < 1e-10);

  // the source curvature genuinely varies, so this exercises every term the
  // constant-curvature corpus pairs cannot reach
  double lo = 1e300, hi = -1e300;
  for (const VecN& p : grid) {
    CurvatureEval c = curvature(dini.g.jet(p.span(), 2, Backend::Analytic));
    lo = std::min(lo, c.scalar);
    hi = std::max(hi, c.scalar);
  }
  CHECK(hi - lo > 0.5);

  CurvatureTransformReport ct = curvature_transform_residual(dini.g, dini.gbar, grid);
  CHECK(ct.riemann.max_abs < 1e-10);
  CHECK(ct.ricci.max_abs < 1e-10);

  // einstein transfer demands an einstein source even for geodesic pairs
  CHECK_THROWS_AS(einstein_suite(dini.g, dini.gbar, grid), InputError);
}

TEST_CASE("psi_ij is symmetric on geodesic pairs") {
  MetricField g = tu::gnomonic_sphere(3);
  MetricField flat = tu::flat_metric(3);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    VecN p = g.chart().random_point(rng);
    MappingEval ev = mapping_eval(g, flat, p.span());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(ev.psi_ij(i, j) - ev.psi_ij(j, i)) < 1e-9);
  }
}

TEST_CASE("reconstruction") {
  SUBCASE("a = g reproduces g") {
    MetricField g = tu::klein_disc(2);
    VecN p{0.2, 0.1};
    Mat gv = g.value(p.span());
    Reconstruction rec = reconstruct_gbar_point(gv, gv);
    CHECK(rec.Psi == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((rec.gbar - gv).norm_inf() < 1e-13);
  }
  SUBCASE("scaling case round trip") {
    MetricField g = tu::flat_metric(4);
    VecN p{0.0, 0.1, 0.2, -0.1};
    Mat gv = g.value(p.span());
    double factor = std::pow(2.0, 8.0 / 5.0) / 4.0;
    Mat a = factor * gv;
    Reconstruction rec = reconstruct_gbar_point(gv, a);
    Mat expected = 4.0 * gv;
    CHECK((rec.gbar - expected).norm_inf() < 1e-12);
    // oracle: forward map of the reconstructed target returns a
    Mat a_back = mapping_a_point(gv, rec.gbar);
    CHECK((a_back - a).norm_inf() < 1e-12);
  }
  SUBCASE("gnomonic pair reconstructs the flat metric on a grid") {
    MetricField g = tu::gnomonic_sphere(2);
    MetricField flat = tu::flat_metric(2);
    auto grid = g.chart().grid(3);
    std::vector<Mat> a_field;
    for (const VecN& p : grid) a_field.push_back(mapping_eval(g, flat, p.span()).a);
    auto recs = reconstruct_gbar(g, a_field, grid);
    for (const auto& rec : recs)
      CHECK((rec.gbar - Mat::identity(2)).norm_inf() < 1e-12);
  }
  SUBCASE("pure-algebra round trips on random data") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 20; ++trial) {
      int n = 2 + trial % 5;
      Mat g = tu::random_spd(n, rng);
      Mat a = tu::random_spd(n, rng);
      Reconstruction rec = reconstruct_gbar_point(g, a);
      Mat a_back = mapping_a_point(g, rec.gbar);
      double scale = 1.0 + a.norm_inf();
      CHECK((a_back - a).norm_inf() < 1e-12 * scale);
    }
  }
  SUBCASE("degenerate a is reported") {
    Mat g = Mat::identity(3);
    Mat zero(3);
    CHECK_THROWS_AS(reconstruct_gbar_point(g, zero), SingularMatrixError);
  }
}

TEST_CASE("einstein suite") {
  SUBCASE("identity pair on an einstein source") {
    MetricField g = tu::gnomonic_sphere(3);
    auto grid = g.chart().grid(3);
    EinsteinSuiteReport rep = einstein_suite(g, g, grid);
    CHECK(rep.pass);
    CHECK(rep.lambda_riemann.max_abs < 1e-10);
    CHECK(rep.lambda_cov.max_abs < 1e-10);
    CHECK(rep.psi_transfer.max_abs < 1e-10);
    CHECK(rep.target_ricci.max_abs < 1e-9);
    CHECK(rep.Kbar == doctest::Approx(rep.K).epsilon(1e-9));
  }
  SUBCASE("trivial rescaling pair is accepted with zero residuals") {
    MetricField g = tu::gnomonic_sphere(3);
    MetricField gbar = scaled_metric(g, 4.0);
    auto grid = g.chart().grid(3);
    EinsteinSuiteReport rep = einstein_suite(g, gbar, grid);
    CHECK(rep.pass);
    CHECK(rep.Kbar == doctest::Approx(rep.K / 4.0).epsilon(1e-9));
  }
  SUBCASE("gnomonic sphere n=4 onto flat") {
    MetricField g = tu::gnomonic_sphere(4);
    MetricField flat = tu::flat_metric(4);
    auto grid = g.chart().grid(3);
    EinsteinSuiteReport rep = einstein_suite(g, flat, grid);
    CHECK(rep.pass);
    CHECK(rep.lambda_riemann.max_abs < 1e-8);
    CHECK(rep.lambda_cov.max_abs < 1e-8);
    CHECK(rep.psi_transfer.max_abs < 1e-8);
    CHECK(rep.target_ricci.max_abs < 1e-8);
    CHECK(rep.K == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(rep.Kbar) < 1e-9);
    CHECK(rep.Kbar_spread < 1e-9);
  }
  SUBCASE("beltrami-klein n=4 onto flat has the opposite K sign") {
    MetricField g = tu::klein_disc(4);
    MetricField flat = tu::flat_metric(4);
    auto grid = g.chart().grid(3);
    EinsteinSuiteReport rep = einstein_suite(g, flat, grid);
    CHECK(rep.pass);
    CHECK(rep.K == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(rep.Kbar) < 1e-9);
  }
  SUBCASE("non-einstein source is rejected") {
    MetricField g = tu::non_einstein4();
    MetricField flat = tu::flat_metric(4);
    auto grid = g.chart().grid(3);
    CHECK_THROWS_AS(einstein_suite(g, flat, grid), InputError);
  }
}

TEST_CASE("gradient consistency of the two lambda routes") {
  struct Pair {
    MetricField g, gbar;
  };
  Pair pairs[] = {
      {tu::gnomonic_sphere(2), tu::flat_metric(2)},
      {tu::gnomonic_sphere(3), tu::flat_metric(3)},
      {tu::klein_disc(3), tu::flat_metric(3)},
  };
  for (const Pair& pr : pairs) {
    auto grid = pr.g.chart().grid(3);
    for (const VecN& p : grid) {
      MappingEval ev = mapping_eval(pr.g, pr.gbar, p.span());
      CHECK(ev.lambda_route_gap < 1e-10);
    }
  }
}

TEST_CASE("full residual stack at the top chart dimensions") {
  std::mt19937_64 rng(5);
  for (int n : {5, 6}) {
    MetricField g = tu::gnomonic_sphere(n);
    MetricField flat = tu::flat_metric(n);
    std::vector<VecN> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(g.chart().random_point(rng));
    EinsteinReport er = einstein_check(g, pts, Backend::Analytic, 1e-9);
    CHECK(er.is_einstein);
    CHECK(er.K == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(levi_civita_residual(g, flat, pts).metric_form.max_abs < 1e-12);
    CHECK(curvature_transform_residual(g, flat, pts).weyl.max_abs < 1e-12);
  }
  // charts beyond dimension 6 are rejected outright
  CHECK_THROWS_AS(tu::box_chart(7), InputError);
}

TEST_CASE("backend agreement for the pair residuals") {
  MetricField g = tu::gnomonic_sphere(2);
  MetricField flat = tu::flat_metric(2);
  std::mt19937_64 rng(77);
  std::vector<VecN> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(g.chart().random_point(rng));
  LeviCivitaReport a = levi_civita_residual(g, flat, pts, Backend::Analytic);
  LeviCivitaReport f = levi_civita_residual(g, flat, pts, Backend::FiniteDifference);
  CHECK(std::abs(a.metric_form.max_abs - f.metric_form.max_abs) < 1e-4);
  ResidualReport sa = sinyukov_residual(g, flat, pts, Backend::Analytic);
  ResidualReport sf = sinyukov_residual(g, flat, pts, Backend::FiniteDifference);
  CHECK(std::abs(sa.max_abs - sf.max_abs) < 1e-4);
}
