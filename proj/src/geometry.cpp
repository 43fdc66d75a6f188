#include "bvloc/geometry.hpp"

#include <cmath>

namespace bvloc {

namespace {

int packed_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

Eigen::MatrixXd value_matrix(const std::vector<Jet>& full, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = full[i * n + j].v;
  return m;
}

}  // namespace

const Field& ChartData::named_field(const std::string& key) const {
  auto it = named.find(key);
  if (it == named.end())
    throw PreconditionError("chart '" + chart.name + "' has no field '" + key +
                            "'");
  return it->second;
}

std::vector<Jet> metric_matrix(const ChartData& cd, const double* pt, int ord) {
  const int n = cd.chart.n;
  std::vector<Jet> packed = eval_field(cd.metric, pt, ord);
  if (static_cast<int>(packed.size()) != n * (n + 1) / 2)
    throw PreconditionError("metric field has wrong component count");
  std::vector<Jet> full(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) full[i * n + j] = packed[packed_index(n, i, j)];
  return full;
}

FrameData adapted_frame(const ChartData& cd, const double* pt,
                        const Eigen::MatrixXd& tangent) {
  const int n = cd.chart.n;
  const int tdim = static_cast<int>(tangent.cols());
  Eigen::MatrixXd G = value_matrix(metric_matrix(cd, pt, 0), n);

  FrameData fr;
  fr.gram = 1.0;
  if (tdim > 0) {
    Eigen::MatrixXd TG = tangent.transpose() * G * tangent;
    double d = TG.determinant();
    if (d <= 0) throw PreconditionError("locus tangent directions degenerate");
    fr.gram = std::sqrt(d);
  }

  // g-orthonormal columns: tangent span first, then whichever coordinate
  // directions are independent of what came before.
  Eigen::MatrixXd E(n, n);
  int have = 0;
  auto push = [&](Eigen::VectorXd v) {
    for (int a = 0; a < have; ++a)
      v -= E.col(a) * (E.col(a).transpose() * G * v)(0, 0);
    double nrm2 = (v.transpose() * G * v)(0, 0);
    if (nrm2 < 1e-20) return false;
    E.col(have++) = v / std::sqrt(nrm2);
    return true;
  };
  for (int a = 0; a < tdim; ++a)
    if (!push(tangent.col(a)))
      throw PreconditionError("locus tangent directions degenerate");
  for (int i = 0; i < n && have < n; ++i)
    push(Eigen::VectorXd::Unit(n, i));
  if (have < n) throw PreconditionError("frame construction ran short");

  double rho = eval_scalar(cd.vol, pt, 0).v;
  if (rho * E.determinant() < 0) E.col(n - 1) *= -1.0;
  fr.E = E;
  fr.Einv = E.inverse();
  return fr;
}

Eigen::MatrixXd lowered_derivative(const ChartData& cd, const double* pt,
                                   double* sym_residual) {
  const int n = cd.chart.n;
  std::vector<Jet> g = metric_matrix(cd, pt, 1);
  std::vector<Jet> X = eval_field(cd.vecX, pt, 1);
  Eigen::MatrixXd Ginv = value_matrix(g, n).inverse();

  // lowered components as jets
  std::vector<Jet> Xl(n);
  for (int nu = 0; nu < n; ++nu) {
    Jet acc = jet_const(0.0);
    for (int lam = 0; lam < n; ++lam) acc = acc + g[nu * n + lam] * X[lam];
    Xl[nu] = acc;
  }

  Eigen::MatrixXd C(n, n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      double val = Xl[nu].grad(mu);
      for (int lam = 0; lam < n; ++lam) {
        double gamma = 0;
        for (int sig = 0; sig < n; ++sig)
          gamma += 0.5 * Ginv(lam, sig) *
                   (g[sig * n + nu].grad(mu) + g[sig * n + mu].grad(nu) -
                    g[mu * n + nu].grad(sig));
        val -= gamma * Xl[lam].v;
      }
      C(mu, nu) = val;
    }

  if (sym_residual) {
    double r = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r = std::max(r, std::abs(C(i, j) + C(j, i)));
    *sym_residual = r;
  }
  return C;
}

WeightData rotation_weights(const ChartData& cd, const double* pt,
                            const FrameData& fr, int tdim) {
  const int n = cd.chart.n;
  WeightData w;
  Eigen::MatrixXd C = lowered_derivative(cd, pt, &w.sym_residual);
  Eigen::MatrixXd M = C - C.transpose();
  Eigen::MatrixXd Mo = fr.E.transpose() * M * fr.E;

  // the action fixes the locus, so nothing may rotate tangent directions
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i < tdim || j < tdim)
        w.sym_residual = std::max(w.sym_residual, std::abs(Mo(i, j)));

  const int c = n - tdim;
  if (c % 2 != 0)
    throw PreconditionError("odd codimension at a zero of the action");
  w.m = c / 2;
  Eigen::MatrixXd Nb = Mo.block(tdim, tdim, c, c);
  w.frame_two_form = Nb;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Nb);
  Eigen::VectorXd s = svd.singularValues();
  double top = s.size() ? s(0) : 0.0;
  if (top < 1e-12)
    throw PreconditionError("degenerate rotation weights at a zero");
  for (int i = 0; i + 1 < s.size(); i += 2) {
    if (std::abs(s(i) - s(i + 1)) > 1e-8 * top)
      throw PreconditionError("rotation weights do not pair up");
    if (s(i + 1) < 1e-10 * top)
      throw PreconditionError("degenerate rotation weights at a zero");
    w.lambda_abs.push_back(s(i) / 2.0);
  }

  std::vector<double> flat(c * c);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) flat[i * c + j] = Nb(i, j);
  double pf = pfaffian(flat.data(), c, c);
  w.lambda_product = pf / std::pow(-2.0, w.m);
  return w;
}

Eigen::MatrixXd bivector_matrix(const ChartData& cd, const std::string& key,
                                const double* pt) {
  const int n = cd.chart.n;
  std::vector<Jet> comps = eval_field(cd.named_field(key), pt, 0);
  const auto& masks = blade_masks(n, 2);
  if (comps.size() != masks.size())
    throw PreconditionError("bivector field has wrong component count");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t p = 0; p < masks.size(); ++p) {
    int i = std::countr_zero(masks[p]);
    int j = std::countr_zero(masks[p] & (masks[p] - 1));
    if (i > j) std::swap(i, j);
    A(i, j) = comps[p].v;
    A(j, i) = -comps[p].v;
  }
  return A;
}

int matrix_rank(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

GradedD apply_linear(const GradedD& p, const Eigen::MatrixXd& A) {
  const int n = p.n;
  GradedD r = graded_zero<double>(n, p.k, p.var);
  if (is_zero_degree_range(p)) return r;
  const auto& masks = blade_masks(n, p.k);
  std::vector<int> rows, cols;
  for (std::size_t kk = 0; kk < masks.size(); ++kk) {
    rows.clear();
    for (int b = 0; b < n; ++b)
      if (masks[kk] & (1u << b)) rows.push_back(b);
    for (std::size_t jj = 0; jj < masks.size(); ++jj) {
      if (p.c[jj] == 0.0) continue;
      cols.clear();
      for (int b = 0; b < n; ++b)
        if (masks[jj] & (1u << b)) cols.push_back(b);
      Eigen::MatrixXd minor(p.k, p.k);
      for (int a = 0; a < p.k; ++a)
        for (int b = 0; b < p.k; ++b) minor(a, b) = A(rows[a], cols[b]);
      r.c[kk] += p.c[jj] * (p.k == 0 ? 1.0 : minor.determinant());
    }
  }
  return r;
}

std::vector<ChartPoint> find_zeros(const Geometry& g) {
  std::vector<ChartPoint> out;
  std::vector<std::vector<double>> seen;  // embedded positions
  const int grid = 6;
  for (std::size_t ci = 0; ci < g.charts.size(); ++ci) {
    const ChartData& cd = g.charts[ci];
    const int n = cd.chart.n;
    const Box& box = cd.chart.box;
    std::vector<int> idx(n, 0);
    for (;;) {
      double pt[kMaxVars];
      for (int d = 0; d < n; ++d)
        pt[d] = box.lo[d] +
                (box.hi[d] - box.lo[d]) * (idx[d] + 0.5) / double(grid);
      // Newton iterations from this start
      Eigen::VectorXd x(n);
      for (int d = 0; d < n; ++d) x(d) = pt[d];
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        double xp[kMaxVars];
        for (int d = 0; d < n; ++d) xp[d] = x(d);
        std::vector<Jet> Xj = eval_field(cd.vecX, xp, 1);
        Eigen::VectorXd F(n);
        Eigen::MatrixXd J(n, n);
        for (int i = 0; i < n; ++i) {
          F(i) = Xj[i].v;
          for (int j = 0; j < n; ++j) J(i, j) = Xj[i].grad(j);
        }
        if (F.norm() < 1e-12) {
          ok = std::abs(J.determinant()) > 1e-10;
          break;
        }
        Eigen::VectorXd dx = J.fullPivLu().solve(-F);
        if (!dx.allFinite()) break;
        double cap = 0.25 * (box.hi[0] - box.lo[0]);
        if (dx.norm() > cap) dx *= cap / dx.norm();
        x += dx;
        bool inside = true;
        for (int d = 0; d < n; ++d) {
          double span = box.hi[d] - box.lo[d];
          if (x(d) < box.lo[d] - 0.1 * span || x(d) > box.hi[d] + 0.1 * span)
            inside = false;
        }
        if (!inside) break;
      }
      if (ok) {
        bool interior = true;
        for (int d = 0; d < n; ++d) {
          double span = box.hi[d] - box.lo[d];
          if (x(d) < box.lo[d] + 1e-9 * span || x(d) > box.hi[d] - 1e-9 * span)
            interior = false;
        }
        if (interior && cd.chart.embed) {
          std::vector<double> emb(cd.chart.embed_dim);
          double xp[kMaxVars];
          for (int d = 0; d < n; ++d) xp[d] = x(d);
          cd.chart.embed(xp, emb.data());
          bool dup = false;
          for (const auto& e : seen) {
            if (e.size() != emb.size()) continue;
            double d2 = 0;
            for (std::size_t q = 0; q < e.size(); ++q)
              d2 += (e[q] - emb[q]) * (e[q] - emb[q]);
            if (std::sqrt(d2) < 1e-6) {
              dup = true;
              break;
            }
          }
          if (!dup) {
            seen.push_back(emb);
            ChartPoint cp;
            cp.chart = static_cast<int>(ci);
            for (int d = 0; d < n; ++d) cp.at[d] = x(d);
            out.push_back(cp);
          }
        }
      }
      // advance the grid multi-index
      int d = 0;
      while (d < n && ++idx[d] == grid) idx[d++] = 0;
      if (d == n) break;
    }
  }
  return out;
}

}  // namespace bvloc
