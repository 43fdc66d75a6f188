#include <cmath>
#include <numbers>

#include "bvloc/catalog.hpp"
#include "doctest.h"

using namespace bvloc;

namespace {

// Chart point of the polar chart matching an embedded sphere position.
void polar_of(const double* e, double* p) {
  p[0] = std::acos(e[2]);
  p[1] = std::atan2(e[1], e[0]);
  if (p[1] < 0) p[1] += 2 * std::numbers::pi;
}

}  // namespace

TEST_CASE("catalog lists its entries and rejects strangers") {
  const std::vector<std::string> want = {"sphere_dh", "sphere_cohft",
                                         "s2xs2_bott", "free_control",
                                         "degenerate_pi"};
  CHECK(catalog_ids() == want);
  for (const std::string& id : catalog_ids()) {
    CatalogEntry e = make_entry(id);
    CHECK(e.id == id);
    CHECK(!e.geom.charts.empty());
    CHECK(!e.evaluators.empty());
    CHECK(!e.expected.empty());
  }
  CHECK_THROWS_AS(make_entry("klein_bottle"), PreconditionError);
}

TEST_CASE("covering charts may drop boundary terms, cap charts may not") {
  for (const std::string& id : {"sphere_dh", "s2xs2_bott", "free_control"}) {
    CatalogEntry e = make_entry(id);
    const Chart& cover = e.geom.charts[0].chart;
    for (int f = 0; f < 2 * cover.n; ++f) CHECK(cover.face_flux_free[f]);
    for (std::size_t ci = 1; ci < e.geom.charts.size(); ++ci) {
      const Chart& cap = e.geom.charts[ci].chart;
      for (int f = 0; f < 2 * cap.n; ++f) CHECK(!cap.face_flux_free[f]);
    }
  }
}

TEST_CASE("volume density is the metric volume in every chart") {
  for (const std::string& id : {"sphere_dh", "s2xs2_bott", "free_control"}) {
    CatalogEntry e = make_entry(id, 1.3);
    for (const ChartData& cd : e.geom.charts) {
      const int n = cd.chart.n;
      double pt[kMaxVars];
      for (int d = 0; d < n; ++d)
        pt[d] = cd.chart.box.lo[d] +
                0.37 * (cd.chart.box.hi[d] - cd.chart.box.lo[d]);
      std::vector<Jet> g = metric_matrix(cd, pt, 0);
      Eigen::MatrixXd G(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = g[i * n + j].v;
      double rho = eval_scalar(cd.vol, pt, 0).v;
      CHECK(std::abs(rho) ==
            doctest::Approx(std::sqrt(G.determinant())).epsilon(1e-10));
    }
  }
}

TEST_CASE("cap and polar charts describe the same sphere") {
  double k = 1.7;
  CatalogEntry e = make_entry("sphere_dh", k);
  const ChartData& polar = e.geom.charts[0];
  for (int ci : {1, 2}) {
    const ChartData& cap = e.geom.charts[ci];
    double uv[2] = {0.31, -0.22};
    double emb[3];
    cap.chart.embed(uv, emb);
    double pp[2];
    polar_of(emb, pp);
    double emb2[3];
    polar.chart.embed(pp, emb2);
    for (int i = 0; i < 3; ++i) CHECK(emb[i] == doctest::Approx(emb2[i]));

    // scalar data agrees across the overlap
    for (const char* key : {"S", "phase"}) {
      double a = eval_scalar(cap.named_field(key), uv, 0).v;
      double b = eval_scalar(polar.named_field(key), pp, 0).v;
      CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
    std::vector<Jet> fa = eval_field(cap.named_field("F"), uv, 0);
    std::vector<Jet> fb = eval_field(polar.named_field("F"), pp, 0);
    CHECK(fa[0].v == doctest::Approx(fb[0].v).epsilon(1e-10));
    CHECK(fa[1].v == doctest::Approx(fb[1].v).epsilon(1e-10));
  }
}

TEST_CASE("the action fixes its declared scalars") {
  for (const std::string& id : {"sphere_dh", "s2xs2_bott"}) {
    CatalogEntry e = make_entry(id, 0.8);
    for (const ChartData& cd : e.geom.charts) {
      const int n = cd.chart.n;
      double pt[kMaxVars];
      for (int d = 0; d < n; ++d)
        pt[d] = cd.chart.box.lo[d] +
                0.41 * (cd.chart.box.hi[d] - cd.chart.box.lo[d]);
      std::vector<Jet> X = eval_field(cd.vecX, pt, 0);
      Jet S = eval_scalar(cd.named_field("S"), pt, 1);
      double deriv = 0;
      for (int mu = 0; mu < n; ++mu) deriv += X[mu].v * S.grad(mu);
      CHECK(std::abs(deriv) < 1e-12);
    }
  }
}

TEST_CASE("element expands the exponential degree by degree") {
  double k = 1.4, phi = 1.7;
  CatalogEntry e = make_entry("sphere_dh", k);
  double pt[2] = {1.1, 0.6};
  Inhom<Jet> P = e.element.eval(0, pt, phi, 0);
  double es = std::exp(k * std::cos(1.1));
  REQUIRE(P.part[0].has_value());
  CHECK(P.part[0]->c[0].v == doctest::Approx(es).epsilon(1e-12));
  REQUIRE(P.part[2].has_value());
  CHECK(P.part[2]->c[0].v ==
        doctest::Approx(phi * es / std::sin(1.1)).epsilon(1e-12));
  CHECK(!P.part[1]);
}

TEST_CASE("product element carries the top wedge with the half factor") {
  double k = 0.9, phi = 0.6;
  CatalogEntry e = make_entry("s2xs2_bott", k);
  double pt[4] = {1.2, 0.5, 2.0, 4.0};
  Inhom<Jet> P = e.element.eval(0, pt, phi, 0);
  double es = std::exp(k * std::cos(1.2));
  REQUIRE(P.part[4].has_value());
  double want = phi * phi * es / (std::sin(1.2) * std::sin(2.0));
  CHECK(P.part[4]->c[0].v == doctest::Approx(want).epsilon(1e-11));
  REQUIRE(P.part[2].has_value());
  CHECK(P.part[2]->c[blade_pos(4, 0b0011)].v ==
        doctest::Approx(phi * es / std::sin(1.2)).epsilon(1e-11));
  CHECK(P.part[2]->c[blade_pos(4, 0b1100)].v ==
        doctest::Approx(phi * es / std::sin(2.0)).epsilon(1e-11));
  CHECK(std::abs(P.part[2]->c[blade_pos(4, 0b0101)].v) < 1e-14);
}

TEST_CASE("charts without the bivector keep only the scalar term") {
  CatalogEntry e = make_entry("free_control");
  REQUIRE(e.element.terms.size() == 1);
  CHECK(e.element.terms[0].size() == 1);
  CHECK(e.element.terms[0][0].degree == 0);
}

TEST_CASE("entry transforms touch the advertised data only") {
  CatalogEntry base = make_entry("sphere_dh");
  double pt[2] = {1.0, 1.0};
  double rho = eval_scalar(base.geom.charts[0].vol, pt, 0).v;

  CatalogEntry flipped = flip_orientation(base);
  CHECK(eval_scalar(flipped.geom.charts[0].vol, pt, 0).v ==
        doctest::Approx(-rho));

  CatalogEntry scaled3 = scale_volume(base, 3.0);
  CHECK(eval_scalar(scaled3.geom.charts[0].vol, pt, 0).v ==
        doctest::Approx(3 * rho));

  CatalogEntry skew = skew_metric(base);
  std::vector<Jet> gs = eval_field(skew.geom.charts[0].metric, pt, 0);
  std::vector<Jet> gb = eval_field(base.geom.charts[0].metric, pt, 0);
  CHECK(gs[1].v - gb[1].v == doctest::Approx(0.05 * pt[0] * pt[1]));
  CHECK(gs[0].v == doctest::Approx(gb[0].v));
  CHECK(gs[2].v == doctest::Approx(gb[2].v));
}
