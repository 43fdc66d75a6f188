#include <cmath>
#include <random>

#include "bvloc/catalog.hpp"
#include "doctest.h"

using namespace bvloc;

namespace {

Eigen::MatrixXd metric_values(const ChartData& cd, const double* pt) {
  std::vector<Jet> g = metric_matrix(cd, pt, 0);
  const int n = cd.chart.n;
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = g[i * n + j].v;
  return G;
}

}  // namespace

TEST_CASE("metric matrix unpacks symmetrically") {
  CatalogEntry e = make_entry("sphere_dh");
  double pt[2] = {1.1, 0.4};
  Eigen::MatrixXd G = metric_values(e.geom.charts[0], pt);
  CHECK(G(0, 0) == doctest::Approx(1.0));
  CHECK(G(0, 1) == doctest::Approx(0.0));
  CHECK(G(1, 0) == doctest::Approx(0.0));
  CHECK(G(1, 1) == doctest::Approx(std::sin(1.1) * std::sin(1.1)));
}

TEST_CASE("adapted frame is orthonormal and positively oriented") {
  CatalogEntry e = make_entry("sphere_dh");
  for (int ci = 0; ci < 3; ++ci) {
    const ChartData& cd = e.geom.charts[ci];
    double pt[2] = {ci == 0 ? 1.3 : 0.2, ci == 0 ? 2.0 : -0.3};
    FrameData fr = adapted_frame(cd, pt, Eigen::MatrixXd(2, 0));
    Eigen::MatrixXd G = metric_values(cd, pt);
    Eigen::MatrixXd gram = fr.E.transpose() * G * fr.E;
    CHECK((gram - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
    double rho = eval_scalar(cd.vol, pt, 0).v;
    CHECK(rho * fr.E.determinant() > 0);
    CHECK((fr.Einv * fr.E - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  }
}

TEST_CASE("frame volume factor is the inverse density") {
  // det E = 1/|rho| whenever vol is the metric volume
  CatalogEntry e = make_entry("sphere_dh");
  const ChartData& cd = e.geom.charts[0];
  double pt[2] = {0.9, 5.1};
  FrameData fr = adapted_frame(cd, pt, Eigen::MatrixXd(2, 0));
  double rho = eval_scalar(cd.vol, pt, 0).v;
  CHECK(rho * fr.E.determinant() == doctest::Approx(1.0));
}

TEST_CASE("tangent-adapted frame keeps the tangent span first") {
  CatalogEntry e = make_entry("sphere_dh");
  const ChartData& cd = e.geom.charts[0];
  double pt[2] = {1.3, 0.7};
  Eigen::MatrixXd T(2, 1);
  T << 0, 1;  // along the rotation
  FrameData fr = adapted_frame(cd, pt, T);
  CHECK(std::abs(fr.E(0, 0)) < 1e-12);
  CHECK(fr.gram == doctest::Approx(std::sin(1.3)));
  Eigen::MatrixXd G = metric_values(cd, pt);
  CHECK((fr.E.transpose() * G * fr.E - Eigen::MatrixXd::Identity(2, 2)).norm() <
        1e-12);
}

TEST_CASE("rotation weights at the two poles") {
  double k = 2.0;
  CatalogEntry e = make_entry("sphere_dh", k);
  for (auto [ci, want] : {std::pair{1, -k}, std::pair{2, k}}) {
    const ChartData& cd = e.geom.charts[ci];
    double pt[2] = {0.0, 0.0};
    FrameData fr = adapted_frame(cd, pt, Eigen::MatrixXd(2, 0));
    WeightData wd = rotation_weights(cd, pt, fr, 0);
    REQUIRE(wd.m == 1);
    CHECK(wd.lambda_product == doctest::Approx(want).epsilon(1e-10));
    REQUIRE(wd.lambda_abs.size() == 1);
    CHECK(wd.lambda_abs[0] == doctest::Approx(k).epsilon(1e-10));
    CHECK(wd.sym_residual < 1e-10);
  }
}

TEST_CASE("metric skew shows up as a symmetry defect") {
  CatalogEntry e = skew_metric(make_entry("sphere_dh"));
  double sym = 0;
  double pt[2] = {0.1, -0.2};
  lowered_derivative(e.geom.charts[1], pt, &sym);
  CHECK(sym > 1e-3);
}

TEST_CASE("degenerate linearization is rejected") {
  CatalogEntry e = make_entry("sphere_dh");
  ChartData cd = e.geom.charts[1];
  cd.vecX = make_entry("sphere_dh").geom.charts[1].vecX;
  cd.vecX.eval = [](const Jet* x, Jet* o) {
    o[0] = x[0] * x[0];
    o[1] = x[1] * x[1];
  };
  double pt[2] = {0.0, 0.0};
  FrameData fr = adapted_frame(cd, pt, Eigen::MatrixXd(2, 0));
  CHECK_THROWS_AS(rotation_weights(cd, pt, fr, 0), PreconditionError);
}

TEST_CASE("zero search finds exactly the poles") {
  CatalogEntry e = make_entry("sphere_dh", 1.5);
  std::vector<ChartPoint> zs = find_zeros(e.geom);
  REQUIRE(zs.size() == 2);
  bool north = false, south = false;
  for (const ChartPoint& z : zs) {
    const Chart& ch = e.geom.charts[z.chart].chart;
    double emb[3];
    ch.embed(z.at.data(), emb);
    CHECK(std::abs(emb[0]) < 1e-8);
    CHECK(std::abs(emb[1]) < 1e-8);
    if (emb[2] > 0.5) north = true;
    if (emb[2] < -0.5) south = true;
  }
  CHECK(north);
  CHECK(south);
}

TEST_CASE("basis substitution is multiplicative") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 3;
  Eigen::MatrixXd A(n, n), B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = u(rng);
      B(i, j) = u(rng);
    }
  GradedD p = graded_zero<double>(n, 2, Variance::multivector);
  for (auto& c : p.c) c = u(rng);

  // top-degree blade picks up the determinant
  GradedD top = basis_blade(n, 7u, Variance::multivector, 1.0);
  GradedD ta = apply_linear(top, A);
  CHECK(ta.c[0] == doctest::Approx(A.determinant()).epsilon(1e-12));

  GradedD lhs = apply_linear(apply_linear(p, A), B);
  GradedD rhs = apply_linear(p, B * A);
  for (std::size_t i = 0; i < lhs.c.size(); ++i)
    CHECK(lhs.c[i] == doctest::Approx(rhs.c[i]).epsilon(1e-11).scale(1.0));

  // degree one is plain matrix action
  GradedD v = graded_zero<double>(n, 1, Variance::multivector);
  for (auto& c : v.c) c = u(rng);
  GradedD va = apply_linear(v, A);
  Eigen::VectorXd vv(n);
  for (int i = 0; i < n; ++i) vv(i) = v.c[i];
  Eigen::VectorXd wv = A * vv;
  for (int i = 0; i < n; ++i)
    CHECK(va.c[i] == doctest::Approx(wv(i)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("rank of the named bivector at the poles") {
  CatalogEntry good = make_entry("sphere_dh");
  CatalogEntry bad = make_entry("degenerate_pi");
  double pt[2] = {0.0, 0.0};
  CHECK(matrix_rank(bivector_matrix(good.geom.charts[1], "Ix", pt), 1e-9) == 2);
  CHECK(matrix_rank(bivector_matrix(bad.geom.charts[1], "Ix", pt), 1e-9) == 0);
  CHECK(matrix_rank(bivector_matrix(bad.geom.charts[2], "Ix", pt), 1e-9) == 2);
  CHECK(matrix_rank(Eigen::MatrixXd::Zero(4, 4), 1e-9) == 0);
}

TEST_CASE("missing named fields are reported") {
  CatalogEntry e = make_entry("free_control");
  CHECK_THROWS_AS(e.geom.charts[0].named_field("Ix"), PreconditionError);
  CHECK(e.geom.charts[0].has_named("gamma"));
}
