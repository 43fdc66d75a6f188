#include "bvloc/catalog.hpp"

#include <cmath>
#include <numbers>

namespace bvloc {

namespace {

constexpr double kPi = std::numbers::pi;

Box make_box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  Box b;
  b.n = static_cast<int>(lo.size());
  int i = 0;
  for (double v : lo) b.lo[i++] = v;
  i = 0;
  for (double v : hi) b.hi[i++] = v;
  return b;
}

Field make_field(int n, int ncomp, std::function<void(const Jet*, Jet*)> ev) {
  Field f;
  f.n = n;
  f.ncomp = ncomp;
  f.eval = std::move(ev);
  return f;
}

void mark_faces_flux_free(Chart& c) {
  for (int i = 0; i < 2 * c.n; ++i) c.face_flux_free[i] = true;
}

// Polar chart of the unit sphere; the rotation moves the second coordinate.
ChartData sphere_polar(double k) {
  ChartData cd;
  cd.chart.name = "polar";
  cd.chart.n = 2;
  cd.chart.box = make_box({0.0, 0.0}, {kPi, 2 * kPi});
  // theta faces carry no measure, phi faces are identified
  mark_faces_flux_free(cd.chart);
  cd.chart.embed_dim = 3;
  cd.chart.embed = [](const double* p, double* e) {
    e[0] = std::sin(p[0]) * std::cos(p[1]);
    e[1] = std::sin(p[0]) * std::sin(p[1]);
    e[2] = std::cos(p[0]);
  };
  cd.metric = make_field(2, 3, [](const Jet* x, Jet* o) {
    Jet s = sin(x[0]);
    o[0] = jet_const(1.0);
    o[1] = jet_const(0.0);
    o[2] = s * s;
  });
  cd.vecX = make_field(2, 2, [k](const Jet*, Jet* o) {
    o[0] = jet_const(0.0);
    o[1] = jet_const(k);
  });
  cd.vol = scalar_field(2, [](const Jet* x) { return sin(x[0]); });
  cd.named["S"] = scalar_field(2, [k](const Jet* x) { return cos(x[0]) * k; });
  cd.named["Ix"] =
      make_field(2, 1, [](const Jet* x, Jet* o) { o[0] = recip(sin(x[0])); });
  cd.named["gamma"] = make_field(2, 2, [k](const Jet* x, Jet* o) {
    Jet s = sin(x[0]);
    o[0] = jet_const(0.0);
    o[1] = s * s * k;
  });
  cd.named["phase"] = scalar_field(2, [](const Jet* x) {
    Jet s = sin(x[0]);
    return s * s;
  });
  cd.named["F"] = make_field(2, 2, [](const Jet* x, Jet* o) {
    Jet s = sin(x[0]);
    o[0] = s * cos(x[1]);
    o[1] = s * sin(x[1]);
  });
  return cd;
}

// Tangent-plane chart around either pole.  `south` swaps the two
// coordinates so both charts carry the global orientation.
ChartData sphere_cap(double k, bool south) {
  ChartData cd;
  cd.chart.name = south ? "south_cap" : "north_cap";
  cd.chart.n = 2;
  cd.chart.box = make_box({-0.75, -0.75}, {0.75, 0.75});
  cd.chart.embed_dim = 3;
  cd.chart.embed = [south](const double* p, double* e) {
    double z = std::sqrt(1.0 - p[0] * p[0] - p[1] * p[1]);
    if (south) {
      e[0] = p[1];
      e[1] = p[0];
      e[2] = -z;
    } else {
      e[0] = p[0];
      e[1] = p[1];
      e[2] = z;
    }
  };
  cd.metric = make_field(2, 3, [](const Jet* x, Jet* o) {
    Jet z2 = 1.0 - x[0] * x[0] - x[1] * x[1];
    o[0] = 1.0 + x[0] * x[0] / z2;
    o[1] = x[0] * x[1] / z2;
    o[2] = 1.0 + x[1] * x[1] / z2;
  });
  cd.vecX = make_field(2, 2, [k, south](const Jet* x, Jet* o) {
    if (south) {
      o[0] = x[1] * k;
      o[1] = x[0] * -k;
    } else {
      o[0] = x[1] * -k;
      o[1] = x[0] * k;
    }
  });
  cd.vol = scalar_field(2, [](const Jet* x) {
    return recip(sqrt(1.0 - x[0] * x[0] - x[1] * x[1]));
  });
  cd.named["S"] = scalar_field(2, [k, south](const Jet* x) {
    Jet z = sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
    return z * (south ? -k : k);
  });
  cd.named["Ix"] = make_field(2, 1, [](const Jet* x, Jet* o) {
    o[0] = sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
  });
  cd.named["gamma"] = make_field(2, 2, [k, south](const Jet* x, Jet* o) {
    if (south) {
      o[0] = x[1] * k;
      o[1] = x[0] * -k;
    } else {
      o[0] = x[1] * -k;
      o[1] = x[0] * k;
    }
  });
  cd.named["phase"] = scalar_field(2, [](const Jet* x) {
    return x[0] * x[0] + x[1] * x[1];
  });
  cd.named["F"] = make_field(2, 2, [south](const Jet* x, Jet* o) {
    if (south) {
      o[0] = x[1];
      o[1] = x[0];
    } else {
      o[0] = x[0];
      o[1] = x[1];
    }
  });
  return cd;
}

Geometry sphere_geometry(double k) {
  Geometry g;
  g.name = "sphere_dh";
  g.dim = 2;
  g.charts = {sphere_polar(k), sphere_cap(k, false), sphere_cap(k, true)};
  g.action.speed = k;
  FixedLocus north;
  north.id = "north_pole";
  north.chart = 1;
  FixedLocus south;
  south.id = "south_pole";
  south.chart = 2;
  g.action.loci = {north, south};

  FixedLocus equator;
  equator.id = "equator";
  equator.chart = 0;
  equator.udim = 1;
  equator.ubox = make_box({0.0}, {2 * kPi});
  equator.map = [](const Jet* u, Jet* o) {
    o[0] = jet_const(kPi / 2);
    o[1] = u[0];
  };
  g.phase_crit = {north, south, equator};
  return g;
}

// One factor rotates, the other sits still.  Charts: product of polar
// charts, plus one product chart per pole of the moving factor so the fixed
// submanifolds are visible away from the polar chart's edge.
ChartData product_chart(double k, int cap) {  // cap: 0 none, 1 north, 2 south
  ChartData a = (cap == 0) ? sphere_polar(k) : sphere_cap(k, cap == 2);
  ChartData cd;
  cd.chart.name = std::string("pair_") + a.chart.name;
  cd.chart.n = 4;
  Box b;
  b.n = 4;
  for (int d = 0; d < 2; ++d) {
    b.lo[d] = a.chart.box.lo[d];
    b.hi[d] = a.chart.box.hi[d];
  }
  b.lo[2] = 0.0;
  b.hi[2] = kPi;
  b.lo[3] = 0.0;
  b.hi[3] = 2 * kPi;
  cd.chart.box = b;
  if (cap == 0) mark_faces_flux_free(cd.chart);
  cd.chart.embed_dim = 6;
  cd.chart.embed = [ea = a.chart.embed](const double* p, double* e) {
    ea(p, e);
    e[3] = std::sin(p[2]) * std::cos(p[3]);
    e[4] = std::sin(p[2]) * std::sin(p[3]);
    e[5] = std::cos(p[2]);
  };
  cd.metric = make_field(4, 10, [ma = a.metric.eval](const Jet* x, Jet* o) {
    Jet g2[3];
    ma(x, g2);
    // packed upper triangle of diag(block, [1, sin^2])
    o[0] = g2[0];
    o[1] = g2[1];
    o[2] = jet_const(0.0);
    o[3] = jet_const(0.0);
    o[4] = g2[2];
    o[5] = jet_const(0.0);
    o[6] = jet_const(0.0);
    o[7] = jet_const(1.0);
    o[8] = jet_const(0.0);
    Jet s = sin(x[2]);
    o[9] = s * s;
  });
  cd.vecX = make_field(4, 4, [xa = a.vecX.eval](const Jet* x, Jet* o) {
    xa(x, o);
    o[2] = jet_const(0.0);
    o[3] = jet_const(0.0);
  });
  cd.vol = make_field(4, 1, [va = a.vol.eval](const Jet* x, Jet* o) {
    Jet v;
    va(x, &v);
    o[0] = v * sin(x[2]);
  });
  cd.named["S"] = make_field(4, 1, [sa = a.named.at("S").eval](const Jet* x,
                                                               Jet* o) {
    sa(x, o);
  });
  cd.named["Ix"] = make_field(4, 6, [ia = a.named.at("Ix").eval](const Jet* x,
                                                                 Jet* o) {
    Jet pa;
    ia(x, &pa);
    for (int i = 0; i < 6; ++i) o[i] = jet_const(0.0);
    o[0] = pa;                  // slots {0,1}
    o[5] = recip(sin(x[2]));    // slots {2,3}
  });
  return cd;
}

Geometry product_geometry(double k) {
  Geometry g;
  g.name = "s2xs2_bott";
  g.dim = 4;
  g.charts = {product_chart(k, 0), product_chart(k, 1), product_chart(k, 2)};
  g.action.speed = k;
  FixedLocus north;
  north.id = "north_times_sphere";
  north.chart = 1;
  north.udim = 2;
  north.ubox = make_box({0.0, 0.0}, {kPi, 2 * kPi});
  north.map = [](const Jet* u, Jet* o) {
    o[0] = jet_const(0.0);
    o[1] = jet_const(0.0);
    o[2] = u[0];
    o[3] = u[1];
  };
  FixedLocus south = north;
  south.id = "south_times_sphere";
  south.chart = 2;
  g.action.loci = {north, south};
  return g;
}

Geometry torus_geometry() {
  Geometry g;
  g.name = "free_control";
  g.dim = 2;
  ChartData cd;
  cd.chart.name = "square";
  cd.chart.n = 2;
  cd.chart.box = make_box({0.0, 0.0}, {2 * kPi, 2 * kPi});
  mark_faces_flux_free(cd.chart);
  cd.chart.embed_dim = 4;
  cd.chart.embed = [](const double* p, double* e) {
    e[0] = std::cos(p[0]);
    e[1] = std::sin(p[0]);
    e[2] = std::cos(p[1]);
    e[3] = std::sin(p[1]);
  };
  cd.metric = constant_field(2, {1.0, 0.0, 1.0});
  cd.vecX = constant_field(2, {1.0, 0.0});
  cd.vol = constant_field(2, {1.0});
  cd.named["S"] = scalar_field(2, [](const Jet* x) { return cos(x[1]); });
  cd.named["gamma"] = constant_field(2, {1.0, 0.0});
  g.charts = {cd};
  g.action.speed = 1.0;
  return g;
}

Field degenerate_scale(const Field& ix, int which) {
  // multiply the bivector by (1 - height)/2, vanishing at the north pole
  Field f = ix;
  f.eval = [base = ix.eval, which](const Jet* x, Jet* o) {
    base(x, o);
    Jet h;  // height cos(theta) in each chart's coordinates
    if (which == 0)
      h = cos(x[0]);
    else {
      Jet z = sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
      h = (which == 1) ? z : -z;
    }
    o[0] = o[0] * ((1.0 - h) * 0.5);
  };
  return f;
}

}  // namespace

Inhom<Jet> EquivariantElement::eval(int chart, const double* pt, double phi,
                                    int ord) const {
  const auto& ts = terms.at(chart);
  if (ts.empty()) throw PreconditionError("element has no terms on this chart");
  Inhom<Jet> r;
  r.n = ts.front().comps.n;
  r.var = Variance::multivector;
  for (const PhiTerm& t : ts) {
    Graded<Jet> g =
        eval_graded(t.comps, pt, ord, t.degree, Variance::multivector);
    r.add(g * std::pow(phi, t.phi_pow));
  }
  return r;
}

EquivariantElement exponential_element(const Geometry& g,
                                       const std::string& s_key,
                                       const std::string& i_key) {
  EquivariantElement el;
  for (const ChartData& cd : g.charts) {
    const int n = cd.chart.n;
    std::vector<PhiTerm> ts;
    Field sf = cd.named_field(s_key);
    PhiTerm t0;
    t0.phi_pow = 0;
    t0.degree = 0;
    t0.comps = make_field(n, 1, [se = sf.eval](const Jet* x, Jet* o) {
      Jet s;
      se(x, &s);
      o[0] = exp(s);
    });
    ts.push_back(t0);
    if (cd.has_named(i_key)) {
      Field ifld = cd.named_field(i_key);
      double fact = 1.0;
      for (int j = 1; 2 * j <= n; ++j) {
        fact *= j;
        PhiTerm tj;
        tj.phi_pow = j;
        tj.degree = 2 * j;
        int nc = static_cast<int>(blade_masks(n, 2 * j).size());
        tj.comps = make_field(
            n, nc, [se = sf.eval, ie = ifld.eval, icomp = ifld.ncomp, j, fact,
                    n](const Jet* x, Jet* o) {
              Jet s;
              se(x, &s);
              std::vector<Jet> ic(icomp);
              ie(x, ic.data());
              Graded<Jet> I = graded_zero<Jet>(n, 2, Variance::multivector);
              for (int q = 0; q < icomp; ++q) I.c[q] = ic[q];
              Graded<Jet> p = I;
              for (int q = 1; q < j; ++q) p = wedge(p, I);
              Jet pre = exp(s) * (1.0 / fact);
              for (std::size_t q = 0; q < p.c.size(); ++q) o[q] = p.c[q] * pre;
            });
        ts.push_back(tj);
      }
    }
    el.terms.push_back(std::move(ts));
  }
  return el;
}

const std::vector<std::string>& catalog_ids() {
  static const std::vector<std::string> ids = {
      "sphere_dh", "sphere_cohft", "s2xs2_bott", "free_control",
      "degenerate_pi"};
  return ids;
}

CatalogEntry make_entry(const std::string& id, double speed) {
  CatalogEntry e;
  e.id = id;
  e.speed = speed;
  if (id == "sphere_dh" || id == "sphere_cohft") {
    e.geom = sphere_geometry(speed);
    e.element = exponential_element(e.geom, "S", "Ix");
    e.blurb = "round sphere, rotation at the given speed";
    e.expected = "direct = 2*pi*(e^k - e^-k)/k, k the speed; sweep flat";
    e.evaluators = {"direct",     "fixed_loci", "locus_pairing",
                    "moment_map", "sweep",      "phase"};
    if (id == "sphere_cohft") {
      e.blurb = "round sphere with a declared equivariant map";
      e.expected = "every localization route = 2*pi*(e^k - e^-k)/k";
      e.geom.name = id;
      e.geom.eqmap = EquivariantMapSpec{1, {speed}};
      e.evaluators = {"direct", "fixed_loci", "locus_pairing", "map_discrete",
                      "map_zeros"};
    }
    e.expected_ranks = {{"north_pole", 2}, {"south_pole", 2}};
  } else if (id == "s2xs2_bott") {
    e.geom = product_geometry(speed);
    e.element = exponential_element(e.geom, "S", "Ix");
    e.blurb = "product of two spheres, one factor rotating";
    e.expected = "direct = 8*pi^2*(e^k - e^-k)/k";
    e.evaluators = {"direct", "fixed_loci", "locus_pairing"};
  } else if (id == "degenerate_pi") {
    e.geom = sphere_geometry(speed);
    e.geom.name = id;
    for (int c = 0; c < 3; ++c)
      e.geom.charts[c].named["Ix"] =
          degenerate_scale(e.geom.charts[c].named.at("Ix"), c);
    e.element = exponential_element(e.geom, "S", "Ix");
    e.blurb = "sphere with a bivector collapsing at one pole";
    e.expected = "localization identity fails by design";
    e.evaluators = {"direct", "fixed_loci"};
    e.expect_closed = false;
    e.expected_ranks = {{"north_pole", 0}, {"south_pole", 2}};
  } else if (id == "free_control") {
    e.geom = torus_geometry();
    e.element = exponential_element(e.geom, "S", "Ix");
    e.blurb = "flat torus, translation flow with no zeros";
    e.expected = "sweep drifts with t, nothing to localize";
    e.evaluators = {"direct", "sweep"};
    e.expect_closed = false;
    e.expect_flat_sweep = false;
  } else {
    throw PreconditionError("unknown catalog entry '" + id + "'");
  }
  return e;
}

CatalogEntry flip_orientation(const CatalogEntry& e) {
  CatalogEntry r = e;
  for (auto& cd : r.geom.charts) cd.vol = scale_field(cd.vol, -1.0);
  return r;
}

CatalogEntry scale_volume(const CatalogEntry& e, double c) {
  CatalogEntry r = e;
  for (auto& cd : r.geom.charts) cd.vol = scale_field(cd.vol, c);
  return r;
}

CatalogEntry skew_metric(const CatalogEntry& e) {
  CatalogEntry r = e;
  for (auto& cd : r.geom.charts)
    cd.metric = skew_component_field(cd.metric, 1, 0, 1, 0.05);
  return r;
}

}  // namespace bvloc
