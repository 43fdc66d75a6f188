#include "bvloc/bv_ops.hpp"

#include <cmath>

namespace bvloc {

Graded<Jet> partial_coeffs(const Graded<Jet>& a, int mu) {
  Graded<Jet> r = a;
  for (auto& c : r.c) c = partial(c, mu);
  return r;
}

Graded<Jet> d_form(const Graded<Jet>& a) {
  if (a.var != Variance::form) throw PreconditionError("d: expects a form");
  Graded<Jet> r = graded_zero<Jet>(a.n, a.k + 1, Variance::form);
  for (int mu = 0; mu < a.n; ++mu) {
    Graded<Jet> dxmu =
        basis_blade<Jet>(a.n, 1u << mu, Variance::form, jet_const(1.0));
    r = r + wedge(dxmu, partial_coeffs(a, mu));
  }
  return r;
}

Inhom<Jet> d_form(const Inhom<Jet>& a) {
  Inhom<Jet> r;
  r.n = a.n;
  r.var = a.var;
  for (int k = 0; k < a.n; ++k)
    if (a.part[k]) r.add(d_form(*a.part[k]));
  return r;
}

Graded<Jet> flat_with_vol(const Graded<Jet>& p, const Jet& rho) {
  if (p.var != Variance::multivector)
    throw PreconditionError("flat: expects a multivector");
  Graded<Jet> vol = basis_blade<Jet>(p.n, (1u << p.n) - 1, Variance::form, rho);
  return left_contract(p, vol);
}

Graded<Jet> sharp_with_vol(const Graded<Jet>& beta, const Jet& rho) {
  if (beta.var != Variance::form)
    throw PreconditionError("sharp: expects a form");
  const int n = beta.n;
  const int q = n - beta.k;
  Graded<Jet> r = graded_zero<Jet>(n, q, Variance::multivector);
  if (is_zero_degree_range(beta) || is_zero_degree_range(r)) return r;
  Jet irho = recip(rho);
  const int eps = reversal_sign(q);
  const unsigned full = (1u << n) - 1;
  const auto& mq = blade_masks(n, q);
  for (std::size_t j = 0; j < mq.size(); ++j) {
    unsigned comp = full & ~mq[j];
    int s = eps * merge_sign(mq[j], comp);
    const Jet& b = beta.c[blade_pos(n, comp)];
    r.c[j] = (s > 0 ? b : scaled(b, -1.0)) * irho;
  }
  return r;
}

Graded<Jet> bv_laplacian(const Graded<Jet>& p, const Jet& rho) {
  return sharp_with_vol(d_form(flat_with_vol(p, rho)), rho);
}

Inhom<Jet> bv_laplacian(const Inhom<Jet>& p, const Jet& rho) {
  Inhom<Jet> r;
  r.n = p.n;
  r.var = Variance::multivector;
  for (int k = 1; k <= p.n; ++k)
    if (p.part[k]) r.add(bv_laplacian(*p.part[k], rho));
  return r;
}

Graded<Jet> flat_laplacian(const Graded<Jet>& p) {
  Graded<Jet> r = graded_zero<Jet>(p.n, p.k - 1, Variance::multivector);
  for (int i = 0; i < p.n; ++i)
    r = r + partial_coeffs(annihilate(p, i), i);
  return r;
}

Graded<Jet> schouten(const Graded<Jet>& p, const Graded<Jet>& q) {
  if (p.var != Variance::multivector || q.var != Variance::multivector)
    throw PreconditionError("bracket: expects multivectors");
  const int n = p.n;
  Graded<Jet> r = graded_zero<Jet>(n, p.k + q.k - 1, Variance::multivector);
  const int sp = (p.k % 2 == 0) ? -1 : 1;  // (-1)^(deg p + 1)
  for (int i = 0; i < n; ++i) {
    Graded<Jet> t1 = wedge(annihilate(p, i), partial_coeffs(q, i));
    Graded<Jet> t2 = wedge(partial_coeffs(p, i), annihilate(q, i));
    if (is_zero_degree_range(t1)) continue;
    for (std::size_t a = 0; a < r.c.size(); ++a)
      r.c[a] = r.c[a] + (sp > 0 ? t1.c[a] : scaled(t1.c[a], -1.0)) - t2.c[a];
  }
  return r;
}

Graded<Jet> lie_multivector(const Graded<Jet>& x1, const Graded<Jet>& p) {
  if (x1.k != 1) throw PreconditionError("lie: generator must be degree one");
  return schouten(x1, p);
}

Graded<Jet> lie_form(const Graded<Jet>& x1, const Graded<Jet>& a) {
  if (x1.k != 1) throw PreconditionError("lie: generator must be degree one");
  Graded<Jet> r = left_contract(x1, d_form(a));
  if (a.k >= 1) r = r + d_form(left_contract(x1, a));
  return r;
}

Inhom<Jet> equivariant_laplacian(const Inhom<Jet>& p, const Jet& rho,
                                 const Graded<Jet>& x1, double phi) {
  Inhom<Jet> r = bv_laplacian(p, rho);
  for (int k = 0; k <= p.n; ++k)
    if (p.part[k] && k + 1 <= p.n)
      r.add(wedge(x1, *p.part[k]) * phi);
  return r;
}

Inhom<Jet> equivariant_d(const Inhom<Jet>& a, const Graded<Jet>& x1,
                         double phi) {
  Inhom<Jet> r = d_form(a);
  for (int k = 1; k <= a.n; ++k)
    if (a.part[k]) r.add(left_contract(x1, *a.part[k]) * phi);
  return r;
}

Inhom<Jet> flat_with_vol(const Inhom<Jet>& p, const Jet& rho) {
  Inhom<Jet> r;
  r.n = p.n;
  r.var = Variance::form;
  for (int k = 0; k <= p.n; ++k)
    if (p.part[k]) r.add(flat_with_vol(*p.part[k], rho));
  return r;
}

double max_abs_value(const Graded<Jet>& a) {
  double m = 0;
  for (const auto& c : a.c) m = std::max(m, std::abs(c.v));
  return m;
}

double max_abs_value(const Inhom<Jet>& a) {
  double m = 0;
  for (const auto& part : a.part)
    if (part) m = std::max(m, max_abs_value(*part));
  return m;
}

Inhom<Jet> inhom_sub(const Inhom<Jet>& a, const Inhom<Jet>& b) {
  Inhom<Jet> r = a;
  for (int k = 0; k <= b.n; ++k)
    if (b.part[k]) r.add(*b.part[k] * -1.0);
  return r;
}

}  // namespace bvloc
