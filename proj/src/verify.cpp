#include "bvloc/verify.hpp"

#include <cstdlib>
#include <random>

#include "bvloc/bv_ops.hpp"
#include "bvloc/localization.hpp"
#include "bvloc/report_io.hpp"
#include "json.hpp"

namespace bvloc {

namespace {

using GradedJ = Graded<Jet>;

struct Registry {
  const VerifyOptions& opt;
  std::vector<VerifyCheck> out;

  bool wanted(const std::string& name) const {
    return opt.filter.empty() || name.find(opt.filter) != std::string::npos;
  }

  template <typename Fn>
  void check(const std::string& name, Fn fn) {
    if (!wanted(name)) return;
    VerifyCheck c;
    c.name = name;
    try {
      fn(c);
    } catch (const std::exception& ex) {
      c.pass = false;
      c.detail = std::string("exception: ") + ex.what();
    }
    out.push_back(std::move(c));
  }
};

CatalogEntry entry(const VerifyOptions& opt, const std::string& id,
                   double speed = 1.0) {
  CatalogEntry e = make_entry(id, speed);
  if (opt.skew_fault) e = skew_metric(e);
  return e;
}

// Jets of the catalog fields at one point, used as raw material for random
// graded objects.
struct SamplePool {
  int n = 0;
  std::vector<Jet> jets;
};

SamplePool pool_at(const ChartData& cd, const double* pt) {
  SamplePool p;
  p.n = cd.chart.n;
  std::vector<Jet> g = eval_field(cd.metric, pt, 3);
  std::vector<Jet> x = eval_field(cd.vecX, pt, 3);
  p.jets.insert(p.jets.end(), g.begin(), g.end());
  p.jets.insert(p.jets.end(), x.begin(), x.end());
  p.jets.push_back(eval_scalar(cd.vol, pt, 3));
  if (cd.has_named("S"))
    p.jets.push_back(eval_scalar(cd.named_field("S"), pt, 3));
  if (cd.has_named("Ix")) {
    std::vector<Jet> ix = eval_field(cd.named_field("Ix"), pt, 3);
    p.jets.insert(p.jets.end(), ix.begin(), ix.end());
  }
  return p;
}

Jet pool_jet(const SamplePool& p, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(p.jets.size()) - 1);
  Jet r = jet_const(U(rng));
  for (int t = 0; t < 3; ++t) r = r + p.jets[pick(rng)] * U(rng);
  r = r + p.jets[pick(rng)] * p.jets[pick(rng)] * U(rng);
  return r;
}

GradedJ pool_graded(const SamplePool& p, std::mt19937& rng, int k,
                    Variance var) {
  GradedJ g = graded_zero<Jet>(p.n, k, var);
  for (auto& c : g.c) c = pool_jet(p, rng);
  return g;
}

double max_val(const GradedJ& a) { return max_abs_value(a); }

// Random interior point of the covering chart of a product-of-spheres entry;
// degree room up to four slots.
SamplePool product_pool(const CatalogEntry& e, std::mt19937& rng) {
  const ChartData& cd = e.geom.charts[0];
  std::uniform_real_distribution<double> U(0.15, 0.85);
  double pt[kMaxVars];
  for (int d = 0; d < cd.chart.n; ++d)
    pt[d] = cd.chart.box.lo[d] +
            U(rng) * (cd.chart.box.hi[d] - cd.chart.box.lo[d]);
  return pool_at(cd, pt);
}

void scale_part(Inhom<Jet>& p, double s) {
  for (int k = 0; k <= p.n; ++k)
    if (p.part[k]) *p.part[k] = *p.part[k] * s;
}

Inhom<Jet> inhom_lie(const GradedJ& x1, const Inhom<Jet>& p) {
  Inhom<Jet> r;
  r.n = p.n;
  r.var = p.var;
  for (int k = 0; k <= p.n; ++k)
    if (p.part[k]) r.add(lie_multivector(x1, *p.part[k]));
  return r;
}

void axiom_suite(Registry& reg) {
  reg.check("bv.wedge_symmetry", [&](VerifyCheck& c) {
    std::mt19937 rng(101);
    CatalogEntry e = entry(reg.opt, "s2xs2_bott");
    double worst = 0;
    for (int rep = 0; rep < 120; ++rep) {
      SamplePool p = product_pool(e, rng);
      for (auto [pk, qk] : {std::array{1, 1}, std::array{1, 2},
                            std::array{2, 1}, std::array{2, 2}}) {
        GradedJ a = pool_graded(p, rng, pk, Variance::multivector);
        GradedJ b = pool_graded(p, rng, qk, Variance::multivector);
        int s = ((pk * qk) % 2) ? -1 : 1;
        worst = std::max(worst,
                         max_val(wedge(a, b) - wedge(b, a) * double(s)));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples";
  });

  reg.check("bv.adjunction", [&](VerifyCheck& c) {
    std::mt19937 rng(103);
    CatalogEntry e = entry(reg.opt, "s2xs2_bott");
    double worst = 0;
    for (int rep = 0; rep < 120; ++rep) {
      SamplePool p = product_pool(e, rng);
      for (int ak = 0; ak <= 4; ++ak)
        for (int pk = 0; pk <= ak; ++pk) {
          GradedJ alpha = pool_graded(p, rng, ak, Variance::form);
          GradedJ P = pool_graded(p, rng, pk, Variance::multivector);
          GradedJ Q = pool_graded(p, rng, ak - pk, Variance::multivector);
          Jet lhs = pairing(left_contract(P, alpha), Q);
          Jet rhs = pairing(alpha, wedge(P, Q)) * double(reversal_sign(pk));
          worst = std::max(worst, std::abs(lhs.v - rhs.v));
          Jet lhsr = pairing(right_contract(alpha, P), Q);
          Jet rhsr = pairing(alpha, wedge(P, Q));
          worst = std::max(worst, std::abs(lhsr.v - rhsr.v));
        }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples";
  });

  reg.check("bv.antisymmetry", [&](VerifyCheck& c) {
    std::mt19937 rng(107);
    CatalogEntry e = entry(reg.opt, "s2xs2_bott");
    double worst = 0;
    for (int rep = 0; rep < 120; ++rep) {
      SamplePool p = product_pool(e, rng);
      for (auto [pk, qk] : {std::array{1, 1}, std::array{1, 2},
                            std::array{2, 2}, std::array{3, 1}}) {
        GradedJ P = pool_graded(p, rng, pk, Variance::multivector);
        GradedJ Q = pool_graded(p, rng, qk, Variance::multivector);
        int s = (((pk + 1) * (qk + 1)) % 2) ? -1 : 1;
        worst = std::max(
            worst, max_val(schouten(P, Q) + schouten(Q, P) * double(s)));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples";
  });

  reg.check("bv.leibniz", [&](VerifyCheck& c) {
    std::mt19937 rng(109);
    CatalogEntry e = entry(reg.opt, "s2xs2_bott");
    double worst = 0;
    for (int rep = 0; rep < 120; ++rep) {
      SamplePool p = product_pool(e, rng);
      for (auto [p1, p2, p3] :
           {std::array{1, 1, 1}, std::array{1, 2, 1}, std::array{2, 1, 1}}) {
        GradedJ P1 = pool_graded(p, rng, p1, Variance::multivector);
        GradedJ P2 = pool_graded(p, rng, p2, Variance::multivector);
        GradedJ P3 = pool_graded(p, rng, p3, Variance::multivector);
        int sl = ((p2 * (p1 + 1)) % 2) ? -1 : 1;
        GradedJ lhs = schouten(P1, wedge(P2, P3));
        GradedJ rhs = wedge(schouten(P1, P2), P3) +
                      wedge(P2, schouten(P1, P3)) * double(sl);
        worst = std::max(worst, max_val(lhs - rhs));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples";
  });

  reg.check("bv.jacobi", [&](VerifyCheck& c) {
    std::mt19937 rng(113);
    CatalogEntry e = entry(reg.opt, "s2xs2_bott");
    double worst = 0;
    for (int rep = 0; rep < 120; ++rep) {
      SamplePool p = product_pool(e, rng);
      for (auto [p1, p2, p3] :
           {std::array{1, 1, 1}, std::array{1, 2, 1}, std::array{2, 1, 1}}) {
        GradedJ P1 = pool_graded(p, rng, p1, Variance::multivector);
        GradedJ P2 = pool_graded(p, rng, p2, Variance::multivector);
        GradedJ P3 = pool_graded(p, rng, p3, Variance::multivector);
        int sj = (((p1 + 1) * (p2 + 1)) % 2) ? -1 : 1;
        GradedJ lhs = schouten(P1, schouten(P2, P3));
        GradedJ rhs = schouten(schouten(P1, P2), P3) +
                      schouten(P2, schouten(P1, P3)) * double(sj);
        worst = std::max(worst, max_val(lhs - rhs));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples";
  });

  reg.check("bv.seven_term", [&](VerifyCheck& c) {
    std::mt19937 rng(127);
    CatalogEntry e = entry(reg.opt, "s2xs2_bott");
    double worst = 0;
    for (int rep = 0; rep < 120; ++rep) {
      SamplePool p = product_pool(e, rng);
      Jet rho = exp(pool_jet(p, rng) * 0.25);
      for (auto [pk, qk] :
           {std::array{1, 1}, std::array{1, 2}, std::array{2, 1}}) {
        GradedJ P = pool_graded(p, rng, pk, Variance::multivector);
        GradedJ Q = pool_graded(p, rng, qk, Variance::multivector);
        int sp = (pk % 2) ? -1 : 1;
        GradedJ lhs = bv_laplacian(wedge(P, Q), rho);
        GradedJ rhs = wedge(bv_laplacian(P, rho), Q) +
                      wedge(P, bv_laplacian(Q, rho)) * double(sp) -
                      schouten(P, Q) * double(sp);
        worst = std::max(worst, max_val(lhs - rhs));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples";
  });

  reg.check("bv.laplacian_square", [&](VerifyCheck& c) {
    std::mt19937 rng(131);
    CatalogEntry e = entry(reg.opt, "s2xs2_bott");
    double worst = 0;
    for (int rep = 0; rep < 120; ++rep) {
      SamplePool p = product_pool(e, rng);
      Jet rho = exp(pool_jet(p, rng) * 0.25);
      for (int pk : {1, 2, 3}) {
        GradedJ P = pool_graded(p, rng, pk, Variance::multivector);
        worst = std::max(worst, max_val(bv_laplacian(bv_laplacian(P, rho), rho)));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples";
  });
}

void equivariant_suite(Registry& reg) {
  reg.check("equivariant.square", [&](VerifyCheck& c) {
    std::mt19937 rng(137);
    CatalogEntry e = entry(reg.opt, "sphere_dh");
    const ChartData& cd = e.geom.charts[0];
    std::uniform_real_distribution<double> U(0.15, 0.85);
    double worst = 0;
    for (int rep = 0; rep < 40; ++rep) {
      double pt[kMaxVars];
      for (int d = 0; d < 2; ++d)
        pt[d] = cd.chart.box.lo[d] +
                U(rng) * (cd.chart.box.hi[d] - cd.chart.box.lo[d]);
      SamplePool p = pool_at(cd, pt);
      Jet rho = eval_scalar(cd.vol, pt, 3);
      GradedJ X = eval_graded(cd.vecX, pt, 3, 1, Variance::multivector);
      for (double phi : {0.5, 1.0, 2.0}) {
        Inhom<Jet> P;
        P.n = 2;
        P.var = Variance::multivector;
        P.add(pool_graded(p, rng, 0, Variance::multivector));
        P.add(pool_graded(p, rng, 1, Variance::multivector));
        P.add(pool_graded(p, rng, 2, Variance::multivector));
        Inhom<Jet> lhs = equivariant_laplacian(
            equivariant_laplacian(P, rho, X, phi), rho, X, phi);
        Inhom<Jet> rhs = inhom_lie(X, P);
        scale_part(rhs, phi);
        worst = std::max(worst, max_abs_value(inhom_sub(lhs, rhs)));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples over phi in {0.5, 1, 2}";
  });

  reg.check("equivariant.duality", [&](VerifyCheck& c) {
    std::mt19937 rng(139);
    CatalogEntry e = entry(reg.opt, "sphere_dh");
    const ChartData& cd = e.geom.charts[0];
    std::uniform_real_distribution<double> U(0.15, 0.85);
    double worst = 0;
    for (int rep = 0; rep < 40; ++rep) {
      double pt[kMaxVars];
      for (int d = 0; d < 2; ++d)
        pt[d] = cd.chart.box.lo[d] +
                U(rng) * (cd.chart.box.hi[d] - cd.chart.box.lo[d]);
      SamplePool p = pool_at(cd, pt);
      Jet rho = eval_scalar(cd.vol, pt, 3);
      GradedJ X = eval_graded(cd.vecX, pt, 3, 1, Variance::multivector);
      for (double phi : {0.5, 1.0, 2.0}) {
        Inhom<Jet> P;
        P.n = 2;
        P.var = Variance::multivector;
        P.add(pool_graded(p, rng, 0, Variance::multivector));
        P.add(pool_graded(p, rng, 1, Variance::multivector));
        P.add(pool_graded(p, rng, 2, Variance::multivector));
        Inhom<Jet> lhs = equivariant_d(flat_with_vol(P, rho), X, phi);
        Inhom<Jet> rhs = flat_with_vol(equivariant_laplacian(P, rho, X, phi),
                                       rho);
        worst = std::max(worst, max_abs_value(inhom_sub(lhs, rhs)));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "120 samples over phi in {0.5, 1, 2}";
  });

  reg.check("equivariant.divergence", [&](VerifyCheck& c) {
    std::mt19937 rng(149);
    CatalogEntry e = entry(reg.opt, "sphere_dh");
    const ChartData& cd = e.geom.charts[0];
    for (int f = 0; f < 2 * cd.chart.n; ++f)
      if (!cd.chart.face_flux_free[f])
        throw PreconditionError("covering chart cannot drop boundary terms");
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0;
    for (int rep = 0; rep < 3; ++rep) {
      // coefficients on {1, cos, sin}(theta) x {1, sin, cos}(phi)
      double A[3][3][3];  // [component: q_theta, q_phi, q_bivector]
      for (auto& plane : A)
        for (auto& row : plane)
          for (double& v : row) v = U(rng);
      auto coeff = [&](int which, const Jet* x) {
        Jet th[3] = {jet_const(1.0), cos(x[0]), sin(x[0])};
        Jet ph[3] = {jet_const(1.0), sin(x[1]), cos(x[1])};
        Jet acc = jet_const(0.0);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            acc = acc + th[a] * ph[b] * A[which][a][b];
        return acc;
      };
      for (double phi : {0.5, 1.0, 2.0}) {
        double acc[2];
        integrate_box_multi(
            cd.chart.box, 32, 2,
            [&](const double* pt, double* o) {
              Jet x[2];
              seed_point(pt, 2, 2, x);
              Inhom<Jet> Q;
              Q.n = 2;
              Q.var = Variance::multivector;
              GradedJ q1 = graded_zero<Jet>(2, 1, Variance::multivector);
              q1.c[0] = coeff(0, x);
              q1.c[1] = coeff(1, x);
              GradedJ q2 = graded_zero<Jet>(2, 2, Variance::multivector);
              q2.c[0] = coeff(2, x);
              Q.add(q1);
              Q.add(q2);
              Jet rho = eval_scalar(cd.vol, pt, 2);
              GradedJ X = eval_graded(cd.vecX, pt, 2, 1,
                                      Variance::multivector);
              Inhom<Jet> D = equivariant_laplacian(Q, rho, X, phi);
              double v = D.part[0] ? D.part[0]->c[0].v : 0.0;
              o[0] = v * rho.v;
              o[1] = std::abs(v) * std::abs(rho.v);
            },
            acc);
        worst = std::max(worst, std::abs(acc[0]) / std::max(1.0, acc[1]));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-6;
    c.detail = "3 fields over phi in {0.5, 1, 2}";
  });
}

void geometry_suite(Registry& reg) {
  reg.check("geometry.killing", [&](VerifyCheck& c) {
    double worst = 0;
    for (const char* id : {"sphere_dh", "s2xs2_bott", "free_control"}) {
      CatalogEntry e = entry(reg.opt, id);
      for (const ChartData& cd : e.geom.charts) {
        const int n = cd.chart.n;
        const int grid = (n <= 2) ? 4 : 3;
        std::vector<int> idx(n, 0);
        for (;;) {
          double pt[kMaxVars];
          for (int d = 0; d < n; ++d)
            pt[d] = cd.chart.box.lo[d] +
                    (cd.chart.box.hi[d] - cd.chart.box.lo[d]) *
                        (0.1 + 0.8 * idx[d] / double(grid - 1));
          double sym = 0;
          lowered_derivative(cd, pt, &sym);
          worst = std::max(worst, sym);
          int d = 0;
          while (d < n && ++idx[d] == grid) idx[d++] = 0;
          if (d == n) break;
        }
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-7;
    c.detail = "generic grid over all charts";
  });

  reg.check("geometry.weight_pfaffian", [&](VerifyCheck& c) {
    double worst = 0;
    for (const char* id : {"sphere_dh", "s2xs2_bott"}) {
      CatalogEntry e = entry(reg.opt, id);
      for (const FixedLocus& loc : e.geom.action.loci) {
        const ChartData& cd = e.geom.charts.at(loc.chart);
        const int n = cd.chart.n;
        double x[kMaxVars];
        Eigen::MatrixXd T(n, loc.udim);
        if (loc.udim == 0) {
          for (int d = 0; d < n; ++d) x[d] = loc.at[d];
        } else {
          double uc[kMaxVars];
          for (int d = 0; d < loc.udim; ++d)
            uc[d] = 0.5 * (loc.ubox.lo[d] + loc.ubox.hi[d]);
          std::vector<Jet> uj(loc.udim);
          seed_point(uc, loc.udim, 1, uj.data());
          std::vector<Jet> xj(n);
          loc.map(uj.data(), xj.data());
          for (int mu = 0; mu < n; ++mu) {
            x[mu] = xj[mu].v;
            for (int a = 0; a < loc.udim; ++a) T(mu, a) = xj[mu].grad(a);
          }
        }
        FrameData fr = adapted_frame(cd, x, T);
        WeightData wd = rotation_weights(cd, x, fr, loc.udim);
        const int cdim = 2 * wd.m;
        const Eigen::MatrixXd& Nb = wd.frame_two_form;
        std::vector<double> flat(cdim * cdim);
        for (int i = 0; i < cdim; ++i)
          for (int j = 0; j < cdim; ++j) flat[i * cdim + j] = Nb(i, j);
        double pf = pfaffian(flat.data(), cdim, cdim);
        double want = std::pow(-2.0, wd.m) * wd.lambda_product;
        worst = std::max(worst, std::abs(pf - want) /
                                    std::max(1.0, std::abs(want)));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-8;
    c.detail = "pfaffian against paired weights at every locus";
  });

  reg.check("geometry.ranks", [&](VerifyCheck& c) {
    bool ok = true;
    std::string detail;
    for (const char* id : {"sphere_dh", "degenerate_pi"}) {
      CatalogEntry e = entry(reg.opt, id);
      int max_rank = -1;
      for (const FixedLocus& loc : e.geom.action.loci) {
        const ChartData& cd = e.geom.charts.at(loc.chart);
        int r = matrix_rank(bivector_matrix(cd, "Ix", loc.at.data()), 1e-9);
        max_rank = std::max(max_rank, r);
        auto it = e.expected_ranks.find(loc.id);
        if (it != e.expected_ranks.end() && it->second != r) ok = false;
        detail += std::string(detail.empty() ? "" : ", ") + loc.id + "=" +
                  std::to_string(r);
      }
      bool full = max_rank == e.geom.dim;
      if (!full) ok = false;  // both entries keep one full-rank point
      detail += std::string(" full_rank_point=") + (full ? "yes" : "no");
    }
    c.pass = ok;
    c.detail = detail;
  });

  reg.check("map.weight_containment", [&](VerifyCheck& c) {
    double worst = 0;
    bool ok = true;
    for (double k : {1.0, 2.0}) {
      CatalogEntry e = entry(reg.opt, "sphere_cohft", k);
      for (const FixedLocus& loc : e.geom.action.loci) {
        const ChartData& cd = e.geom.charts.at(loc.chart);
        FrameData fr =
            adapted_frame(cd, loc.at.data(), Eigen::MatrixXd(cd.chart.n, 0));
        WeightData wd = rotation_weights(cd, loc.at.data(), fr, 0);
        for (double lam : wd.lambda_abs) {
          double best = 1e300;
          for (double w : e.geom.eqmap->weights)
            best = std::min(best,
                            std::abs(lam - std::abs(w)) / std::max(1.0, lam));
          worst = std::max(worst, best);
          if (best > 1e-8) ok = false;
        }
      }
    }
    c.residual = worst;
    c.pass = ok;
    c.detail = "locus weights inside the declared map weights";
  });
}

void infrastructure_suite(Registry& reg) {
  reg.check("jets.finite_difference", [&](VerifyCheck& c) {
    std::mt19937 rng(151);
    CatalogEntry e = entry(reg.opt, "sphere_dh");
    std::uniform_real_distribution<double> U(0.2, 0.8);
    const double h = 1e-4;
    double worst = 0;
    for (int ci : {0, 1}) {
      const ChartData& cd = e.geom.charts[ci];
      std::vector<const Field*> fields = {&cd.metric, &cd.vol,
                                          &cd.named_field("S")};
      for (int rep = 0; rep < 5; ++rep) {
        double pt[kMaxVars];
        for (int d = 0; d < 2; ++d)
          pt[d] = cd.chart.box.lo[d] +
                  U(rng) * (cd.chart.box.hi[d] - cd.chart.box.lo[d]);
        for (const Field* f : fields) {
          std::vector<Jet> at = eval_field(*f, pt, 2);
          for (int comp = 0; comp < f->ncomp; ++comp) {
            for (int d = 0; d < 2; ++d) {
              double lo[kMaxVars] = {pt[0], pt[1]};
              double hi[kMaxVars] = {pt[0], pt[1]};
              lo[d] -= h;
              hi[d] += h;
              double fd = (eval_field(*f, hi, 0)[comp].v -
                           eval_field(*f, lo, 0)[comp].v) /
                          (2 * h);
              worst = std::max(worst,
                               std::abs(fd - at[comp].grad(d)) /
                                   std::max(1.0, std::abs(at[comp].grad(d))));
              double second = (eval_field(*f, hi, 0)[comp].v -
                               2 * at[comp].v +
                               eval_field(*f, lo, 0)[comp].v) /
                              (h * h);
              worst = std::max(
                  worst, std::abs(second - at[comp].hess(d, d)) /
                             std::max(1.0, std::abs(at[comp].hess(d, d))));
            }
          }
        }
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-5;
    c.detail = "central differences at step 1e-4";
  });

  reg.check("exterior.pfaffian", [&](VerifyCheck& c) {
    std::mt19937 rng(157);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0;
    for (int rep = 0; rep < 40; ++rep)
      for (int dim : {2, 4, 6}) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i)
          for (int j = i + 1; j < dim; ++j) {
            A(i, j) = U(rng);
            A(j, i) = -A(i, j);
          }
        std::vector<double> flat(dim * dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) flat[i * dim + j] = A(i, j);
        double pf = pfaffian(flat.data(), dim, dim);
        double det = A.determinant();
        worst = std::max(worst, std::abs(pf * pf - det) /
                                    std::max(1.0, std::abs(det)));
      }
    c.residual = worst;
    c.pass = worst <= 1e-10;
    c.detail = "pf^2 = det on 120 antisymmetric matrices";
  });

  reg.check("quadrature.exactness", [&](VerifyCheck& c) {
    double worst = 0;
    for (int order : {5, 13}) {
      const QuadRule& r = gauss_legendre(order);
      for (int d = 0; d <= 2 * order - 1; ++d) {
        double acc = 0;
        for (std::size_t i = 0; i < r.x.size(); ++i)
          acc += r.w[i] * std::pow(r.x[i], d);
        double want = (d % 2) ? 0.0 : 2.0 / (d + 1);
        worst = std::max(worst, std::abs(acc - want));
      }
    }
    c.residual = worst;
    c.pass = worst <= 1e-13;
    c.detail = "monomials up to degree 2N-1 at orders 5 and 13";
  });

  reg.check("quadrature.determinism", [&](VerifyCheck& c) {
    Box b;
    b.n = 2;
    b.lo[0] = -1.0;
    b.hi[0] = 2.0;
    b.lo[1] = 0.0;
    b.hi[1] = 3.0;
    auto f = [](const double* x, double* o) {
      o[0] = std::exp(x[0]) * std::cos(3 * x[1]) + x[0] * x[0];
      o[1] = std::sin(x[0] * x[1]);
    };
    const char* prev = std::getenv("BVLOC_THREADS");
    std::string saved = prev ? prev : "";
    double ref[2];
    setenv("BVLOC_THREADS", "1", 1);
    integrate_box_multi(b, 40, 2, f, ref);
    double worst = 0;
    for (const char* workers : {"3", "8"}) {
      setenv("BVLOC_THREADS", workers, 1);
      double got[2];
      integrate_box_multi(b, 40, 2, f, got);
      for (int i = 0; i < 2; ++i)
        worst = std::max(worst, std::abs(got[i] - ref[i]));
    }
    if (prev)
      setenv("BVLOC_THREADS", saved.c_str(), 1);
    else
      unsetenv("BVLOC_THREADS");
    c.residual = worst;
    c.pass = worst == 0.0;
    c.detail = "bitwise equal over 1, 3, 8 workers";
  });
}

void localization_suite(Registry& reg) {
  reg.check("element.closedness", [&](VerifyCheck& c) {
    bool ok = true;
    double worst = 0;
    std::string detail;
    for (const std::string& id : catalog_ids()) {
      CatalogEntry e = entry(reg.opt, id);
      double s = closedness_sample(e, 1.0);
      bool closed = s <= 1e-6;
      if (closed != e.expect_closed) ok = false;
      if (e.expect_closed) worst = std::max(worst, s);
      detail += (detail.empty() ? "" : ", ") + id + "=" +
                (closed ? "closed" : "open");
    }
    c.residual = worst;
    c.pass = ok;
    c.detail = detail;
  });

  reg.check("localization.sphere_dh", [&](VerifyCheck& c) {
    LocalizationReport r = localize_fixed_loci(entry(reg.opt, "sphere_dh"),
                                               1.0, 24);
    c.residual = r.rel_residual;
    c.pass = r.closed && r.rel_residual <= 1e-6;
    c.detail = "fixed-locus sum against direct quadrature";
  });

  reg.check("localization.moment_map", [&](VerifyCheck& c) {
    LocalizationReport r = localize_moment(entry(reg.opt, "sphere_dh"), 24);
    c.residual = r.rel_residual;
    c.pass = r.rel_residual <= 1e-6;
    c.detail = "generating-function sum against direct quadrature";
  });

  reg.check("localization.sphere_cohft", [&](VerifyCheck& c) {
    CatalogEntry e = entry(reg.opt, "sphere_cohft");
    LocalizationReport disc = localize_map(e, true, 1.0, 24);
    LocalizationReport found = localize_map(e, false, 1.0, 24);
    c.residual = std::max(disc.rel_residual, found.rel_residual);
    c.pass = c.residual <= 1e-6;
    c.detail = "declared and searched zero sets";
  });

  reg.check("localization.routes_agree", [&](VerifyCheck& c) {
    CatalogEntry e = entry(reg.opt, "sphere_cohft");
    double a = localize_fixed_loci(e, 1.0, 24).localized;
    double b = localize_locus_pairing(e, 1.0, 24).localized;
    double d = localize_map(e, true, 1.0, 24).localized;
    double scale = std::max({std::abs(a), std::abs(b), std::abs(d)});
    double worst = std::max({std::abs(a - b), std::abs(b - d),
                             std::abs(a - d)}) /
                   scale;
    c.residual = worst;
    c.pass = worst <= 1e-8;
    c.detail = "frame, pairing and map routes pairwise";
  });

  reg.check("localization.s2xs2_bott", [&](VerifyCheck& c) {
    LocalizationReport r = localize_fixed_loci(entry(reg.opt, "s2xs2_bott"),
                                               1.0, 20);
    c.residual = r.rel_residual;
    c.pass = r.closed && r.rel_residual <= 1e-4;
    c.detail = "two-dimensional components";
  });

  reg.check("localization.degenerate_pi", [&](VerifyCheck& c) {
    LocalizationReport r = localize_fixed_loci(entry(reg.opt, "degenerate_pi"),
                                               1.0, 24);
    c.residual = r.rel_residual;
    c.pass = !r.closed && r.rel_residual > 1e-3;
    c.detail = "identity breaks when the element is not closed";
  });

  reg.check("localization.free_control", [&](VerifyCheck& c) {
    CatalogEntry e = entry(reg.opt, "free_control");
    bool threw = false;
    try {
      localize_fixed_loci(e, 1.0, 24);
    } catch (const PreconditionError&) {
      threw = true;
    }
    SweepResult s = gamma_sweep(e, 1.0, 3.0, 6, 24);
    c.residual = s.max_rel_dev;
    c.pass = threw && !s.flat && s.max_rel_dev >= 1e-2;
    c.detail = "no zeros to sum over and the sweep drifts";
  });

  reg.check("localization.volume_covariance", [&](VerifyCheck& c) {
    CatalogEntry base = entry(reg.opt, "sphere_dh");
    LocalizationReport r0 = localize_fixed_loci(base, 1.0, 24);
    LocalizationReport r3 = localize_fixed_loci(scale_volume(base, 3.0), 1.0,
                                                24);
    double worst =
        std::max(std::abs(r3.direct - 3 * r0.direct),
                 std::abs(r3.localized - 3 * r0.localized)) /
        std::abs(3 * r0.direct);
    LocalizationReport rf = localize_fixed_loci(flip_orientation(base), 1.0,
                                                24);
    bool flip_ok = std::abs(rf.direct + r0.direct) <
                       1e-9 * std::abs(r0.direct) &&
                   rf.rel_residual > 0.5 && rf.closed;
    c.residual = worst;
    c.pass = worst <= 1e-9 && flip_ok;
    c.detail = "volume scaling is covariant, orientation flips are flagged";
  });

  reg.check("sweep.flatness", [&](VerifyCheck& c) {
    SweepResult s = gamma_sweep(entry(reg.opt, "sphere_dh"), 1.0, 3.0, 6, 24);
    c.residual = s.max_rel_dev;
    c.pass = s.flat;
    c.detail = "deformation sweep of the closed sphere element";
  });
}

}  // namespace

std::vector<VerifyCheck> run_verify(const VerifyOptions& opt) {
  Registry reg{opt, {}};
  infrastructure_suite(reg);
  axiom_suite(reg);
  equivariant_suite(reg);
  geometry_suite(reg);
  localization_suite(reg);
  return std::move(reg.out);
}

bool all_pass(const std::vector<VerifyCheck>& checks) {
  for (const VerifyCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string verify_lines(const std::vector<VerifyCheck>& checks) {
  std::string out;
  for (const VerifyCheck& c : checks) {
    std::string line = c.pass ? "[PASS] " : "[FAIL] ";
    line += c.name;
    if (line.size() < 38) line.resize(38, ' ');
    line += " residual=" + format_double(c.residual);
    if (!c.detail.empty()) line += "  " + c.detail;
    out += line + "\n";
  }
  return out;
}

std::string verify_json(const std::vector<VerifyCheck>& checks) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "verify";
  j["all_pass"] = all_pass(checks);
  j["checks"] = nlohmann::ordered_json::array();
  for (const VerifyCheck& c : checks) {
    nlohmann::ordered_json q;
    q["name"] = c.name;
    q["pass"] = c.pass;
    q["residual"] = c.residual;
    q["detail"] = c.detail;
    j["checks"].push_back(q);
  }
  return j.dump(2) + "\n";
}

}  // namespace bvloc
