#include "bvloc/localization.hpp"

#include <cmath>
#include <numbers>

namespace bvloc {

namespace {

constexpr double kPi = std::numbers::pi;

double scalar_part_value(const EquivariantElement& el, int chart,
                         const double* pt, double phi) {
  double acc = 0;
  for (const PhiTerm& t : el.terms.at(chart)) {
    if (t.degree != 0) continue;
    acc += eval_scalar(t.comps, pt, 0).v * std::pow(phi, t.phi_pow);
  }
  return acc;
}

GradedD element_part_values(const CatalogEntry& e, int chart, const double* pt,
                            double phi, int deg) {
  Inhom<Jet> P = e.element.eval(chart, pt, phi, 0);
  GradedD r = graded_zero<double>(P.n, deg, Variance::multivector);
  if (deg >= 0 && deg <= P.n && P.part[deg])
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = P.part[deg]->c[i].v;
  return r;
}

int locus_rank(const ChartData& cd, const double* pt) {
  if (!cd.has_named("Ix")) return -1;
  return matrix_rank(bivector_matrix(cd, "Ix", pt), 1e-9);
}

// Density of one zero-set component at a chart point: the normal-blade
// frame coefficient of the top-relevant part, against the rotation weights.
double locus_density(const CatalogEntry& e, int chart, const double* x,
                     const Eigen::MatrixXd& tangent, double phi,
                     LocusReport* rep) {
  const ChartData& cd = e.geom.charts.at(chart);
  const int n = cd.chart.n;
  const int tdim = static_cast<int>(tangent.cols());
  FrameData fr = adapted_frame(cd, x, tangent);
  WeightData wd = rotation_weights(cd, x, fr, tdim);
  GradedD p2m = element_part_values(e, chart, x, phi, 2 * wd.m);
  GradedD framed = apply_linear(p2m, fr.Einv);
  unsigned normal_mask = ((1u << n) - 1) & ~((1u << tdim) - 1);
  double c_normal = framed.c[blade_pos(n, normal_mask)];
  double rho = eval_scalar(cd.vol, x, 0).v;
  double vol_of_frame = rho * fr.E.determinant();
  double density = std::pow(-2 * kPi, wd.m) * vol_of_frame * c_normal *
                   fr.gram / wd.lambda_product;
  if (rep) {
    rep->weight_product = wd.lambda_product;
    rep->weight_abs = wd.lambda_abs;
    rep->sym_residual = wd.sym_residual;
    rep->rank = locus_rank(cd, x);
  }
  return density;
}

void finish_report(LocalizationReport& r) {
  r.abs_residual = std::abs(r.direct - r.localized);
  double denom = std::max(std::abs(r.direct), std::abs(r.localized));
  r.rel_residual = denom > 0 ? r.abs_residual / denom : 0.0;
}

// Pairing-route density: the rotation two-form in chart coordinates, wedged
// to half the codimension and paired against the element, normalized by the
// squared weight product.  No frame coefficient is read off.
double pairing_density(const CatalogEntry& e, int chart, const double* x,
                       const Eigen::MatrixXd& tangent, double phi,
                       LocusReport* rep) {
  const ChartData& cd = e.geom.charts.at(chart);
  const int n = cd.chart.n;
  const int tdim = static_cast<int>(tangent.cols());
  FrameData fr = adapted_frame(cd, x, tangent);
  WeightData wd = rotation_weights(cd, x, fr, tdim);
  const int m = wd.m;
  double sym = 0;
  Eigen::MatrixXd C = lowered_derivative(cd, x, &sym);
  GradedD two_form = graded_zero<double>(n, 2, Variance::form);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = mu + 1; nu < n; ++nu)
      two_form.c[blade_pos(n, (1u << mu) | (1u << nu))] =
          C(mu, nu) - C(nu, mu);
  GradedD wedged = wedge_powers(two_form, m)[m];
  GradedD p2m = element_part_values(e, chart, x, phi, 2 * m);
  double pair = pairing(wedged, p2m);
  double fact = 1;
  for (int j = 2; j <= m; ++j) fact *= j;
  double rho = eval_scalar(cd.vol, x, 0).v;
  double density = std::pow(-2 * kPi, m) / fact * pair *
                   (rho * fr.E.determinant()) * fr.gram /
                   (std::pow(-2.0, m) * wd.lambda_product * wd.lambda_product);
  if (rep) {
    rep->weight_product = wd.lambda_product;
    rep->weight_abs = wd.lambda_abs;
    rep->sym_residual = wd.sym_residual;
    rep->rank = locus_rank(cd, x);
  }
  return density;
}

using DensityFn = double (*)(const CatalogEntry&, int, const double*,
                             const Eigen::MatrixXd&, double, LocusReport*);

LocusReport eval_locus(const CatalogEntry& e, const FixedLocus& loc, double phi,
                       int order, DensityFn density) {
  LocusReport rep;
  rep.id = loc.id;
  rep.chart = loc.chart;
  if (loc.udim == 0) {
    rep.value = density(e, loc.chart, loc.at.data(),
                        Eigen::MatrixXd(e.geom.charts[loc.chart].chart.n, 0),
                        phi, &rep);
    return rep;
  }
  const int n = e.geom.charts[loc.chart].chart.n;
  rep.value = integrate_box(loc.ubox, order, [&](const double* u) {
    std::vector<Jet> uj(loc.udim);
    seed_point(u, loc.udim, 1, uj.data());
    std::vector<Jet> xj(n);
    loc.map(uj.data(), xj.data());
    double x[kMaxVars];
    Eigen::MatrixXd T(n, loc.udim);
    for (int mu = 0; mu < n; ++mu) {
      x[mu] = xj[mu].v;
      for (int a = 0; a < loc.udim; ++a) T(mu, a) = xj[mu].grad(a);
    }
    return density(e, loc.chart, x, T, phi, nullptr);
  });
  // weights reported from the patch midpoint
  double uc[kMaxVars];
  for (int d = 0; d < loc.udim; ++d)
    uc[d] = 0.5 * (loc.ubox.lo[d] + loc.ubox.hi[d]);
  std::vector<Jet> uj(loc.udim);
  seed_point(uc, loc.udim, 1, uj.data());
  std::vector<Jet> xj(n);
  loc.map(uj.data(), xj.data());
  double x[kMaxVars];
  Eigen::MatrixXd T(n, loc.udim);
  for (int mu = 0; mu < n; ++mu) {
    x[mu] = xj[mu].v;
    for (int a = 0; a < loc.udim; ++a) T(mu, a) = xj[mu].grad(a);
  }
  density(e, loc.chart, x, T, phi, &rep);
  return rep;
}

LocalizationReport locus_sum(const CatalogEntry& e, double phi, int order,
                             const char* evaluator, DensityFn density) {
  LocalizationReport r;
  r.entry = e.id;
  r.evaluator = evaluator;
  r.phi = phi;
  r.speed = e.speed;
  r.order = order;
  if (e.geom.action.loci.empty())
    throw PreconditionError("the action has no zeros to sum over");
  r.direct = direct_integral(e, phi, order);
  r.closedness = closedness_sample(e, phi);
  r.closed = r.closedness <= 1e-6;
  if (!r.closed)
    r.warnings.push_back(
        "element is not closed; the two sides need not agree");
  for (const FixedLocus& loc : e.geom.action.loci) {
    LocusReport lr = eval_locus(e, loc, phi, order, density);
    r.localized += lr.value;
    r.loci.push_back(std::move(lr));
  }
  finish_report(r);
  return r;
}

}  // namespace

double direct_integral(const CatalogEntry& e, double phi, int order) {
  const ChartData& cd = e.geom.charts.at(0);
  return integrate_box(cd.chart.box, order, [&](const double* pt) {
    return scalar_part_value(e.element, 0, pt, phi) *
           eval_scalar(cd.vol, pt, 0).v;
  });
}

double closedness_sample(const CatalogEntry& e, double phi) {
  double worst = 0;
  for (std::size_t ci = 0; ci < e.geom.charts.size(); ++ci) {
    const ChartData& cd = e.geom.charts[ci];
    const int n = cd.chart.n;
    const int grid = (n <= 2) ? 5 : 3;
    std::vector<int> idx(n, 0);
    for (;;) {
      double pt[kMaxVars];
      for (int d = 0; d < n; ++d) {
        double span = cd.chart.box.hi[d] - cd.chart.box.lo[d];
        pt[d] = cd.chart.box.lo[d] + span * (0.12 + 0.76 * idx[d] / double(grid - 1));
      }
      Inhom<Jet> P = e.element.eval(static_cast<int>(ci), pt, phi, 1);
      Jet rho = eval_scalar(cd.vol, pt, 1);
      Graded<Jet> X = eval_graded(cd.vecX, pt, 1, 1, Variance::multivector);
      Inhom<Jet> defect = equivariant_laplacian(P, rho, X, phi);
      worst = std::max(worst, max_abs_value(defect));
      int d = 0;
      while (d < n && ++idx[d] == grid) idx[d++] = 0;
      if (d == n) break;
    }
  }
  return worst;
}

LocalizationReport localize_fixed_loci(const CatalogEntry& e, double phi,
                                       int order) {
  return locus_sum(e, phi, order, "fixed_loci", &locus_density);
}

LocalizationReport localize_locus_pairing(const CatalogEntry& e, double phi,
                                          int order) {
  return locus_sum(e, phi, order, "locus_pairing", &pairing_density);
}

LocalizationReport localize_moment(const CatalogEntry& e, int order) {
  LocalizationReport r;
  r.entry = e.id;
  r.evaluator = "moment_map";
  r.speed = e.speed;
  r.order = order;
  if (e.geom.action.loci.empty())
    throw PreconditionError("the action has no zeros to sum over");
  // the route only applies when the action is the bivector image of S
  double ham = 0;
  for (const ChartData& cd : e.geom.charts) {
    const int nc = cd.chart.n;
    double pt[kMaxVars];
    for (int d = 0; d < nc; ++d)
      pt[d] = cd.chart.box.lo[d] +
              0.37 * (cd.chart.box.hi[d] - cd.chart.box.lo[d]);
    Jet s = eval_scalar(cd.named_field("S"), pt, 1);
    std::vector<Jet> X = eval_field(cd.vecX, pt, 0);
    Eigen::MatrixXd A = bivector_matrix(cd, "Ix", pt);
    for (int mu = 0; mu < nc; ++mu) {
      double resid = X[mu].v;
      for (int nu = 0; nu < nc; ++nu) resid -= A(mu, nu) * s.grad(nu);
      ham = std::max(ham, std::abs(resid));
    }
  }
  if (ham > 1e-6)
    throw PreconditionError(
        "the action is not generated by S through the bivector");
  const int n = e.geom.dim;
  const int m = n / 2;
  r.direct = direct_integral(e, 1.0, order);
  r.closedness = closedness_sample(e, 1.0);
  r.closed = r.closedness <= 1e-6;
  double fact = 1;
  for (int j = 2; j <= m; ++j) fact *= j;
  for (const FixedLocus& loc : e.geom.action.loci) {
    if (loc.udim != 0)
      throw PreconditionError("moment-map route needs isolated zeros");
    const ChartData& cd = e.geom.charts.at(loc.chart);
    LocusReport lr;
    lr.id = loc.id;
    lr.chart = loc.chart;
    FrameData fr =
        adapted_frame(cd, loc.at.data(), Eigen::MatrixXd(cd.chart.n, 0));
    WeightData wd = rotation_weights(cd, loc.at.data(), fr, 0);
    double h = eval_scalar(cd.named_field("S"), loc.at.data(), 0).v;
    Graded<Jet> pij =
        eval_graded(cd.named_field("Ix"), loc.at.data(), 0, 2,
                    Variance::multivector);
    GradedD pi = graded_zero<double>(cd.chart.n, 2, Variance::multivector);
    for (std::size_t i = 0; i < pi.c.size(); ++i) pi.c[i] = pij.c[i].v;
    GradedD pim = wedge_powers(pi, m)[m];
    double rho = eval_scalar(cd.vol, loc.at.data(), 0).v;
    double top = rho * pim.c[0 /* single top blade */];
    lr.value = std::pow(-2 * kPi, m) / fact * std::exp(h) * top /
               wd.lambda_product;
    lr.weight_product = wd.lambda_product;
    lr.weight_abs = wd.lambda_abs;
    lr.sym_residual = wd.sym_residual;
    lr.rank = locus_rank(cd, loc.at.data());
    r.localized += lr.value;
    r.loci.push_back(std::move(lr));
  }
  finish_report(r);
  return r;
}

LocalizationReport localize_map(const CatalogEntry& e, bool discrete,
                                double phi, int order) {
  LocalizationReport r;
  r.entry = e.id;
  r.evaluator = discrete ? "map_discrete" : "map_zeros";
  r.phi = phi;
  r.speed = e.speed;
  r.order = order;
  if (!e.geom.eqmap)
    throw PreconditionError("entry declares no equivariant map");
  const EquivariantMapSpec& spec = *e.geom.eqmap;
  r.direct = direct_integral(e, phi, order);
  r.closedness = closedness_sample(e, phi);
  r.closed = r.closedness <= 1e-6;

  std::vector<ChartPoint> zeros;
  if (discrete) {
    for (const FixedLocus& loc : e.geom.action.loci) {
      if (loc.udim != 0)
        throw PreconditionError("map route needs isolated zeros");
      ChartPoint cp;
      cp.chart = loc.chart;
      cp.at = loc.at;
      zeros.push_back(cp);
    }
  } else {
    zeros = find_zeros(e.geom);
    if (zeros.empty())
      throw PreconditionError("no zeros of the action were found");
  }

  const int n = e.geom.dim;
  const int m = n / 2;
  int zi = 0;
  for (const ChartPoint& cp : zeros) {
    const ChartData& cd = e.geom.charts.at(cp.chart);
    std::vector<Jet> F = eval_field(cd.named_field("F"), cp.at.data(), 1);
    if (static_cast<int>(F.size()) != 2 * spec.m)
      throw PreconditionError("map component count mismatch");
    LocusReport lr;
    lr.id = discrete ? e.geom.action.loci[zi].id
                     : ("zero_" + std::to_string(zi));
    lr.chart = cp.chart;
    double fmag = 0;
    for (const Jet& c : F) fmag = std::max(fmag, std::abs(c.v));
    if (fmag > 1e-8)
      r.warnings.push_back("map does not vanish at " + lr.id);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < spec.m; ++j) {
      const Jet& re = F[2 * j];
      const Jet& im = F[2 * j + 1];
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          // conj(d f)_mu (d f)_nu
          double tre = re.grad(mu) * re.grad(nu) + im.grad(mu) * im.grad(nu);
          double tim = re.grad(mu) * im.grad(nu) - im.grad(mu) * re.grad(nu);
          A(mu, nu) += spec.weights[j] * tim;
          B(mu, nu) += spec.weights[j] * spec.weights[j] * tre;
        }
    }
    double detB = B.determinant();
    if (detB <= 0)
      throw PreconditionError("map derivative matrix is not positive");
    std::vector<double> flat(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) flat[i * n + j] = A(i, j);
    double pfA = pfaffian(flat.data(), n, n);
    GradedD p2m = element_part_values(e, cp.chart, cp.at.data(), phi, n);
    double rho = eval_scalar(cd.vol, cp.at.data(), 0).v;
    lr.value = std::pow(2 * kPi, m) * pfA / std::sqrt(detB) * rho * p2m.c[0];
    lr.rank = locus_rank(cd, cp.at.data());
    r.localized += lr.value;
    r.loci.push_back(std::move(lr));
    ++zi;
  }
  finish_report(r);
  return r;
}

SweepResult gamma_sweep(const CatalogEntry& e, double phi, double tmax,
                        int steps, int order) {
  SweepResult res;
  res.entry = e.id;
  res.phi = phi;
  res.order = order;
  if (steps < 1) throw PreconditionError("sweep needs at least one step");
  const ChartData& cd = e.geom.charts.at(0);
  const int n = cd.chart.n;
  const int jmax = n / 2;
  for (int i = 0; i < steps; ++i)
    res.t.push_back(steps == 1 ? 0.0 : tmax * i / double(steps - 1));

  std::vector<double> acc(2 * steps);
  integrate_box_multi(
      cd.chart.box, order, 2 * steps,
      [&](const double* pt, double* out) {
        std::vector<Jet> gj = eval_field(cd.named_field("gamma"), pt, 1);
        Graded<Jet> gamma = graded_zero<Jet>(n, 1, Variance::form);
        for (int mu = 0; mu < n; ++mu) gamma.c[mu] = gj[mu];
        Graded<Jet> dgj = d_form(gamma);
        GradedD dg = graded_zero<double>(n, 2, Variance::form);
        for (std::size_t q = 0; q < dg.c.size(); ++q) dg.c[q] = dgj.c[q].v;
        std::vector<Jet> X = eval_field(cd.vecX, pt, 0);
        double gX = 0;
        for (int mu = 0; mu < n; ++mu) gX += gj[mu].v * X[mu].v;
        Jet rho = eval_scalar(cd.vol, pt, 0);
        Inhom<Jet> P = e.element.eval(0, pt, phi, 0);
        Inhom<Jet> flat = flat_with_vol(P, rho);
        std::vector<GradedD> W = wedge_powers(dg, jmax);
        std::vector<double> V(jmax + 1, 0.0);
        for (int j = 0; j <= jmax; ++j) {
          int fd = n - 2 * j;
          if (fd < 0 || !flat.part[fd]) continue;
          GradedD fpart = graded_zero<double>(n, fd, Variance::form);
          for (std::size_t q = 0; q < fpart.c.size(); ++q)
            fpart.c[q] = flat.part[fd]->c[q].v;
          GradedD topw = wedge(fpart, W[j]);
          V[j] = topw.c[0];
        }
        for (int i = 0; i < steps; ++i) {
          double t = res.t[i];
          std::complex<double> it(0.0, t);
          std::complex<double> z = 0.0;
          std::complex<double> itp = 1.0;
          double fact = 1.0;
          for (int j = 0; j <= jmax; ++j) {
            if (j > 0) {
              itp *= it;
              fact *= j;
            }
            z += itp / fact * V[j];
          }
          z *= std::exp(std::complex<double>(0.0, t * phi * gX));
          out[2 * i] = z.real();
          out[2 * i + 1] = z.imag();
        }
      },
      acc.data());

  for (int i = 0; i < steps; ++i)
    res.z.emplace_back(acc[2 * i], acc[2 * i + 1]);
  double base = std::abs(res.z[0]);
  for (int i = 1; i < steps; ++i)
    res.max_rel_dev =
        std::max(res.max_rel_dev, std::abs(res.z[i] - res.z[0]) /
                                      (base > 0 ? base : 1.0));
  res.flat = res.max_rel_dev <= 1e-6;
  return res;
}

std::vector<PhasePoint> phase_compare(const CatalogEntry& e,
                                      const std::vector<double>& ts) {
  const ChartData& cd = e.geom.charts.at(0);
  const int n = cd.chart.n;
  if (e.geom.phase_crit.empty())
    throw PreconditionError("no critical loci declared for the phase");

  // total oscillation scales with the phase range, so the node count must too
  double phase_scale = 0;
  {
    std::vector<int> idx(n, 0);
    const int grid = 9;
    for (;;) {
      double pt[kMaxVars];
      for (int d = 0; d < n; ++d)
        pt[d] = cd.chart.box.lo[d] +
                (cd.chart.box.hi[d] - cd.chart.box.lo[d]) * idx[d] /
                    double(grid - 1);
      phase_scale = std::max(
          phase_scale, std::abs(eval_scalar(cd.named_field("phase"), pt, 0).v));
      int d = 0;
      while (d < n && ++idx[d] == grid) idx[d++] = 0;
      if (d == n) break;
    }
    phase_scale = std::max(phase_scale, 1.0);
  }

  std::vector<PhasePoint> out;
  for (double t : ts) {
    PhasePoint pp;
    pp.t = t;
    int order = std::max(
        24, static_cast<int>(std::ceil(1.2 * t * phase_scale)) + 16);
    order = std::min(order, 512);
    double acc[2];
    integrate_box_multi(
        cd.chart.box, order, 2,
        [&](const double* pt, double* v) {
          double ph = eval_scalar(cd.named_field("phase"), pt, 0).v;
          double rho = eval_scalar(cd.vol, pt, 0).v;
          v[0] = std::cos(t * ph) * rho;
          v[1] = std::sin(t * ph) * rho;
        },
        acc);
    pp.direct = {acc[0], acc[1]};

    std::complex<double> est = 0.0;
    for (const FixedLocus& loc : e.geom.phase_crit) {
      const ChartData& lcd = e.geom.charts.at(loc.chart);
      const int ln = lcd.chart.n;
      auto point_term = [&](const double* x,
                            const Eigen::MatrixXd& T) -> std::complex<double> {
        Jet ph = eval_scalar(lcd.named_field("phase"), x, 2);
        Eigen::MatrixXd H(ln, ln);
        for (int i = 0; i < ln; ++i)
          for (int j = 0; j < ln; ++j) H(i, j) = ph.hess(i, j);
        const int tdim = static_cast<int>(T.cols());
        // orthonormal complement of the tangent in chart coordinates
        Eigen::MatrixXd N(ln, ln - tdim);
        {
          Eigen::MatrixXd full(ln, ln + tdim);
          int have = 0;
          Eigen::MatrixXd Q(ln, ln);
          auto push = [&](Eigen::VectorXd v2) {
            for (int a = 0; a < have; ++a) v2 -= Q.col(a) * Q.col(a).dot(v2);
            if (v2.norm() < 1e-12) return false;
            Q.col(have++) = v2.normalized();
            return true;
          };
          for (int a = 0; a < tdim; ++a) push(T.col(a));
          for (int i = 0; i < ln; ++i) {
            if (have == ln) break;
            push(Eigen::VectorXd::Unit(ln, i));
          }
          if (have < ln)
            throw PreconditionError("phase locus tangent is degenerate");
          N = Q.rightCols(ln - tdim);
        }
        Eigen::MatrixXd HN = N.transpose() * H * N;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(HN);
        int sgn = 0;
        double det = 1;
        for (int i = 0; i < HN.rows(); ++i) {
          double lam = es.eigenvalues()(i);
          if (std::abs(lam) < 1e-10)
            throw PreconditionError("degenerate normal second derivatives");
          sgn += lam > 0 ? 1 : -1;
          det *= lam;
        }
        double rho = eval_scalar(lcd.vol, x, 0).v;
        double gram = 1.0;
        if (tdim > 0) gram = std::sqrt((T.transpose() * T).determinant());
        std::complex<double> ph_fac =
            std::exp(std::complex<double>(0.0, t * ph.v + kPi * sgn / 4.0));
        return std::pow(2 * kPi / t, (ln - tdim) / 2.0) * ph_fac * rho * gram /
               std::sqrt(std::abs(det));
      };
      if (loc.udim == 0) {
        est += point_term(loc.at.data(), Eigen::MatrixXd(ln, 0));
      } else {
        double acc2[2];
        integrate_box_multi(
            loc.ubox, 24, 2,
            [&](const double* u, double* v) {
              std::vector<Jet> uj(loc.udim);
              seed_point(u, loc.udim, 1, uj.data());
              std::vector<Jet> xj(ln);
              loc.map(uj.data(), xj.data());
              double x[kMaxVars];
              Eigen::MatrixXd T(ln, loc.udim);
              for (int mu = 0; mu < ln; ++mu) {
                x[mu] = xj[mu].v;
                for (int a = 0; a < loc.udim; ++a) T(mu, a) = xj[mu].grad(a);
              }
              std::complex<double> c = point_term(x, T);
              v[0] = c.real();
              v[1] = c.imag();
            },
            acc2);
        est += std::complex<double>(acc2[0], acc2[1]);
      }
    }
    pp.estimate = est;
    pp.rel_err = std::abs(pp.direct - pp.estimate) / std::abs(pp.direct);
    out.push_back(pp);
  }
  return out;
}

}  // namespace bvloc
