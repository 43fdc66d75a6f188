#include <cmath>
#include <numbers>

#include "bvloc/localization.hpp"
#include "doctest.h"
#include "toy_entries.hpp"

using namespace bvloc;

namespace {

constexpr double kPi = std::numbers::pi;

double sphere_exact(double k) {
  return 2 * kPi * (std::exp(k) - std::exp(-k)) / k;
}

const LocusReport& locus_named(const LocalizationReport& r,
                               const std::string& id) {
  for (const LocusReport& l : r.loci)
    if (l.id == id) return l;
  throw std::runtime_error("locus not in report: " + id);
}

}  // namespace

TEST_CASE("direct pairing on the sphere has the closed form") {
  for (double k : {1.0, 2.0}) {
    CatalogEntry e = make_entry("sphere_dh", k);
    double v = direct_integral(e, 1.0, 24);
    CHECK(v == doctest::Approx(sphere_exact(k)).epsilon(1e-12));
    // the scalar part carries no deformation dependence
    CHECK(direct_integral(e, 0.5, 24) == v);
  }
}

TEST_CASE("closedness sampler separates the catalog") {
  CHECK(closedness_sample(make_entry("sphere_dh"), 1.0) < 1e-9);
  CHECK(closedness_sample(make_entry("sphere_dh", 2.0), 0.5) < 1e-9);
  CHECK(closedness_sample(make_entry("s2xs2_bott"), 1.0) < 1e-9);
  CHECK(closedness_sample(make_entry("degenerate_pi"), 1.0) > 1e-3);
  CHECK(closedness_sample(make_entry("free_control"), 1.0) > 0.1);
}

TEST_CASE("fixed locus sum reproduces the sphere pairing") {
  for (double k : {1.0, 2.0}) {
    CatalogEntry e = make_entry("sphere_dh", k);
    LocalizationReport r = localize_fixed_loci(e, 1.0, 24);
    CHECK(r.closed);
    CHECK(r.closedness < 1e-9);
    CHECK(r.rel_residual < 1e-10);
    CHECK(r.localized == doctest::Approx(sphere_exact(k)).epsilon(1e-10));
    const LocusReport& n = locus_named(r, "north_pole");
    const LocusReport& s = locus_named(r, "south_pole");
    CHECK(n.value == doctest::Approx(2 * kPi * std::exp(k) / k).epsilon(1e-10));
    CHECK(s.value ==
          doctest::Approx(-2 * kPi * std::exp(-k) / k).epsilon(1e-10));
    CHECK(n.weight_product == doctest::Approx(-k).epsilon(1e-10));
    CHECK(s.weight_product == doctest::Approx(k).epsilon(1e-10));
    CHECK(n.rank == 2);
    CHECK(s.rank == 2);
    CHECK(n.sym_residual < 1e-9);
  }
}

TEST_CASE("localized side scales linearly in the deformation parameter") {
  CatalogEntry e = make_entry("sphere_dh");
  LocalizationReport half = localize_fixed_loci(e, 0.5, 24);
  LocalizationReport twice = localize_fixed_loci(e, 2.0, 24);
  CHECK(half.localized == doctest::Approx(0.5 * half.direct).epsilon(1e-10));
  CHECK(twice.localized == doctest::Approx(2.0 * twice.direct).epsilon(1e-10));
  CHECK(half.rel_residual > 0.1);  // the identity itself wants phi = 1
}

TEST_CASE("moment map route at two speeds") {
  CatalogEntry e1 = make_entry("sphere_dh");
  LocalizationReport r1 = localize_moment(e1, 24);
  CHECK(r1.localized == doctest::Approx(sphere_exact(1.0)).epsilon(1e-10));
  CHECK(r1.rel_residual < 1e-10);
  CHECK(std::abs(r1.localized - 14.768014) < 1e-5);

  CatalogEntry e2 = make_entry("sphere_dh", 2.0);
  LocalizationReport r2 = localize_moment(e2, 24);
  CHECK(r2.localized ==
        doctest::Approx(kPi * (std::exp(2) - std::exp(-2))).epsilon(1e-10));
  CHECK(r2.rel_residual < 1e-9);
}

TEST_CASE("map route matches the frame route in both modes") {
  for (double k : {1.0, 2.0}) {
    CatalogEntry e = make_entry("sphere_cohft", k);
    LocalizationReport frame = localize_fixed_loci(e, 1.0, 24);
    LocalizationReport disc = localize_map(e, true, 1.0, 24);
    LocalizationReport bott = localize_map(e, false, 1.0, 24);
    CHECK(std::abs(disc.localized - frame.localized) <
          1e-8 * std::abs(frame.localized));
    CHECK(std::abs(bott.localized - disc.localized) <
          1e-8 * std::abs(disc.localized));
    CHECK(disc.rel_residual < 1e-9);
    CHECK(bott.loci.size() == 2);
    const LocusReport& n = locus_named(disc, "north_pole");
    CHECK(n.value == doctest::Approx(2 * kPi * std::exp(k) / k).epsilon(1e-9));
  }
}

TEST_CASE("map route needs the declared map") {
  CatalogEntry e = make_entry("sphere_dh");  // no map spec on this entry
  CHECK_THROWS_AS(localize_map(e, true, 1.0, 24), PreconditionError);
}

TEST_CASE("pairing route agrees with the frame route without sharing it") {
  for (double k : {1.0, 2.0}) {
    CatalogEntry e = make_entry("sphere_dh", k);
    LocalizationReport frame = localize_fixed_loci(e, 1.0, 24);
    LocalizationReport pr = localize_locus_pairing(e, 1.0, 24);
    CHECK(pr.evaluator == "locus_pairing");
    CHECK(std::abs(pr.localized - frame.localized) <
          1e-10 * std::abs(frame.localized));
    CHECK(pr.rel_residual < 1e-10);
    const LocusReport& n = locus_named(pr, "north_pole");
    CHECK(n.value == doctest::Approx(2 * kPi * std::exp(k) / k).epsilon(1e-10));
    CHECK(n.weight_product == doctest::Approx(-k).epsilon(1e-10));
  }
  // the declared-map route closes the three-way agreement
  CatalogEntry em = make_entry("sphere_cohft");
  LocalizationReport pm = localize_locus_pairing(em, 1.0, 24);
  LocalizationReport dm = localize_map(em, true, 1.0, 24);
  CHECK(std::abs(pm.localized - dm.localized) < 1e-8 * std::abs(dm.localized));
}

TEST_CASE("pairing route integrates over product components") {
  CatalogEntry e = make_entry("s2xs2_bott");
  LocalizationReport frame = localize_fixed_loci(e, 1.0, 20);
  LocalizationReport pr = localize_locus_pairing(e, 1.0, 20);
  CHECK(std::abs(pr.localized - frame.localized) <
        1e-9 * std::abs(frame.localized));
  CHECK(pr.rel_residual < 1e-8);
}

TEST_CASE("moment map route rejects an action its bivector cannot generate") {
  CatalogEntry e = make_entry("sphere_dh");
  for (auto& cd : e.geom.charts) cd.vecX = scale_field(cd.vecX, 1.25);
  CHECK_THROWS_AS(localize_moment(e, 24), PreconditionError);
}

TEST_CASE("a single-point sweep grid degenerates cleanly") {
  CatalogEntry e = make_entry("sphere_dh");
  SweepResult s = gamma_sweep(e, 1.0, 5.0, 1, 24);
  REQUIRE(s.t.size() == 1);
  CHECK(s.t[0] == 0.0);
  CHECK(s.max_rel_dev == 0.0);
  CHECK(s.flat);
  CHECK(s.z[0].real() ==
        doctest::Approx(direct_integral(e, 1.0, 24)).epsilon(1e-10));
  CHECK(std::abs(s.z[0].imag()) < 1e-10);
}

TEST_CASE("product geometry localizes over two-dimensional components") {
  double k = 1.0;
  CatalogEntry e = make_entry("s2xs2_bott", k);
  LocalizationReport r = localize_fixed_loci(e, 1.0, 20);
  double exact = 8 * kPi * kPi * (std::exp(k) - std::exp(-k)) / k;
  CHECK(r.closed);
  CHECK(r.direct == doctest::Approx(exact).epsilon(1e-8));
  CHECK(r.localized == doctest::Approx(exact).epsilon(1e-8));
  CHECK(r.rel_residual < 1e-8);
  const LocusReport& n = locus_named(r, "north_times_sphere");
  CHECK(n.value ==
        doctest::Approx(8 * kPi * kPi * std::exp(k) / k).epsilon(1e-8));
  CHECK(n.weight_product == doctest::Approx(-k).epsilon(1e-8));
}

TEST_CASE("collapsing bivector breaks the identity honestly") {
  CatalogEntry e = make_entry("degenerate_pi");
  LocalizationReport r = localize_fixed_loci(e, 1.0, 24);
  CHECK(!r.closed);
  CHECK(!r.warnings.empty());
  CHECK(r.rel_residual > 0.1);
  CHECK(locus_named(r, "north_pole").rank == 0);
  CHECK(locus_named(r, "south_pole").rank == 2);
  CHECK(std::abs(locus_named(r, "north_pole").value) < 1e-12);
}

TEST_CASE("flow without zeros is rejected by the locus sum") {
  CatalogEntry e = make_entry("free_control");
  CHECK_THROWS_AS(localize_fixed_loci(e, 1.0, 24), PreconditionError);
}

TEST_CASE("orientation flip moves only the direct side") {
  CatalogEntry base = make_entry("sphere_dh");
  LocalizationReport r0 = localize_fixed_loci(base, 1.0, 24);
  LocalizationReport rf = localize_fixed_loci(flip_orientation(base), 1.0, 24);
  CHECK(rf.direct == doctest::Approx(-r0.direct).epsilon(1e-12));
  CHECK(rf.localized == doctest::Approx(r0.localized).epsilon(1e-10));
  CHECK(rf.rel_residual > 0.5);
}

TEST_CASE("volume rescaling moves both sides together") {
  CatalogEntry base = make_entry("sphere_dh");
  LocalizationReport r0 = localize_fixed_loci(base, 1.0, 24);
  LocalizationReport r3 = localize_fixed_loci(scale_volume(base, 3.0), 1.0, 24);
  CHECK(r3.direct == doctest::Approx(3 * r0.direct).epsilon(1e-12));
  CHECK(r3.localized == doctest::Approx(3 * r0.localized).epsilon(1e-10));
  CHECK(r3.rel_residual < 1e-10);
}

TEST_CASE("metric skew hides from the loci but not from generic points") {
  // the injected quadratic term flattens out at the poles, so the locus data
  // is untouched and only off-locus sampling can flag the broken symmetry
  CatalogEntry e = skew_metric(make_entry("sphere_dh"));
  LocalizationReport r = localize_fixed_loci(e, 1.0, 24);
  for (const LocusReport& l : r.loci) CHECK(l.sym_residual < 1e-9);
  CHECK(r.rel_residual < 1e-9);
  double sym = 0;
  double pt[2] = {0.3, 0.2};
  lowered_derivative(e.geom.charts[1], pt, &sym);
  CHECK(sym > 1e-3);
}

TEST_CASE("deformation sweep is flat exactly on the closed entry") {
  CatalogEntry sph = make_entry("sphere_dh");
  SweepResult s = gamma_sweep(sph, 1.0, 2.0, 5, 24);
  CHECK(s.flat);
  CHECK(s.max_rel_dev <= 1e-6);
  CHECK(s.z[0].real() == doctest::Approx(sphere_exact(1.0)).epsilon(1e-10));
  CHECK(std::abs(s.z[0].imag()) < 1e-12);

  CatalogEntry fc = make_entry("free_control");
  SweepResult f = gamma_sweep(fc, 1.0, 3.0, 7, 24);
  CHECK(!f.flat);
  CHECK(f.max_rel_dev >= 1e-2);
  // the whole signal is a phase spin of a fixed modulus
  double mod = 4 * kPi * kPi * std::cyl_bessel_i(0, 1.0);
  for (std::size_t i = 0; i < f.z.size(); ++i) {
    CHECK(std::abs(std::abs(f.z[i]) - mod) < 1e-8 * mod);
    std::complex<double> want =
        mod * std::exp(std::complex<double>(0.0, f.t[i]));
    CHECK(std::abs(f.z[i] - want) < 1e-8 * mod);
  }
}

TEST_CASE("oscillatory pairing approaches the critical expansion") {
  CatalogEntry e = make_entry("sphere_dh");
  std::vector<PhasePoint> pts = phase_compare(e, {10.0, 50.0});
  REQUIRE(pts.size() == 2);
  CHECK(pts[1].rel_err <= 0.05);
  CHECK(pts[1].rel_err < pts[0].rel_err);
}

TEST_CASE("gaussian line pins the oscillatory normalisation") {
  CatalogEntry e = bvloc_testing::gaussian_line();
  std::vector<PhasePoint> pts = phase_compare(e, {8.0, 30.0});
  for (const PhasePoint& p : pts) {
    std::complex<double> exact =
        std::sqrt(2 * kPi / std::complex<double>(1.0, p.t));
    CHECK(std::abs(p.direct - exact) < 1e-9);
    std::complex<double> est = std::sqrt(2 * kPi / p.t) *
                               std::exp(std::complex<double>(0.0, -kPi / 4));
    CHECK(std::abs(p.estimate - est) < 1e-12);
  }
  CHECK(pts[1].rel_err < pts[0].rel_err);
  CHECK(pts[1].rel_err < 0.02);
}
