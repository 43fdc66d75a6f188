#include "bvloc/jets.hpp"

#include <cmath>

namespace bvloc {

Jet jet_const(double c) {
  Jet r;
  r.v = c;
  return r;
}

Jet jet_var(double x, int i, int n, int ord) {
  if (n < 1 || n > kMaxVars || i < 0 || i >= n)
    throw PreconditionError("jet_var: bad coordinate slot");
  Jet r;
  r.n = n;
  r.ord = ord;
  r.v = x;
  if (ord >= 1)
    for (int j = 0; j < n; ++j) r.g[j] = (j == i) ? 1.0 : 0.0;
  if (ord >= 2)
    for (int j = 0; j < n * n; ++j) r.h[j] = 0.0;
  if (ord >= 3)
    for (int j = 0; j < n * n * n; ++j) r.t[j] = 0.0;
  return r;
}

Jet partial(const Jet& a, int mu) {
  if (a.n == 0) return jet_const(0.0);
  if (a.ord < 1)
    throw PreconditionError("partial: jet carries no derivative data");
  if (mu < 0 || mu >= a.n) throw PreconditionError("partial: bad direction");
  Jet r;
  const int n = a.n;
  r.n = n;
  r.ord = a.ord - 1;
  r.v = a.g[mu];
  if (r.ord >= 1)
    for (int j = 0; j < n; ++j) r.g[j] = a.h[mu * n + j];
  if (r.ord >= 2)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r.h[j * n + k] = a.t[(mu * n + j) * n + k];
  return r;
}

Jet compose1(double f0, double f1, double f2, double f3, const Jet& a) {
  Jet r;
  r.n = a.n;
  r.ord = a.ord;
  r.v = f0;
  if (a.n == 0) return r;
  const int n = a.n;
  if (r.ord >= 1)
    for (int i = 0; i < n; ++i) r.g[i] = f1 * a.g[i];
  if (r.ord >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r.h[i * n + j] = f2 * a.g[i] * a.g[j] + f1 * a.h[i * n + j];
  if (r.ord >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          r.t[(i * n + j) * n + k] =
              f3 * a.g[i] * a.g[j] * a.g[k] +
              f2 * (a.g[i] * a.h[j * n + k] + a.g[j] * a.h[i * n + k] +
                    a.g[k] * a.h[i * n + j]) +
              f1 * a.t[(i * n + j) * n + k];
  return r;
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return compose1(e, e, e, e, a);
}

Jet log(const Jet& a) {
  if (a.v <= 0.0) throw PreconditionError("log: nonpositive argument");
  const double iv = 1.0 / a.v;
  return compose1(std::log(a.v), iv, -iv * iv, 2.0 * iv * iv * iv, a);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose1(s, c, -s, -c, a);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose1(c, -s, -c, s, a);
}

Jet sqrt(const Jet& a) {
  if (a.v <= 0.0) throw PreconditionError("sqrt: nonpositive argument");
  const double s = std::sqrt(a.v);
  return compose1(s, 0.5 / s, -0.25 / (s * a.v), 0.375 / (s * a.v * a.v), a);
}

Jet recip(const Jet& a) {
  if (a.v == 0.0) throw PreconditionError("recip: division by zero");
  const double iv = 1.0 / a.v;
  return compose1(iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv,
                  a);
}

Jet pow(const Jet& a, int k) {
  if (k < 0) return recip(pow(a, -k));
  Jet r = jet_const(1.0);
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

}  // namespace bvloc
