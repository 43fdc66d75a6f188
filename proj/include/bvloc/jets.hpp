#pragma once

#include <array>

#include "bvloc/errors.hpp"

namespace bvloc {

// Truncated Taylor expansion of a scalar in up to kMaxVars chart coordinates.
// n == 0 is a constant broadcast, valid to every order.  Arrays hold only the
// active prefix (n, n*n, n*n*n entries); the tail is never read or written.
inline constexpr int kMaxVars = 6;

struct Jet {
  int n = 0;
  int ord = 0;
  double v = 0.0;
  std::array<double, kMaxVars> g;
  std::array<double, kMaxVars * kMaxVars> h;
  std::array<double, kMaxVars * kMaxVars * kMaxVars> t;

  Jet() = default;
  Jet(const Jet& o) { assign(o); }
  Jet& operator=(const Jet& o) {
    if (this != &o) assign(o);
    return *this;
  }

  double grad(int i) const { return n ? g[i] : 0.0; }
  double hess(int i, int j) const { return n ? h[i * n + j] : 0.0; }
  double third(int i, int j, int k) const {
    return n ? t[(i * n + j) * n + k] : 0.0;
  }

 private:
  void assign(const Jet& o) {
    n = o.n;
    ord = o.ord;
    v = o.v;
    if (n == 0) return;
    if (ord >= 1)
      for (int i = 0; i < n; ++i) g[i] = o.g[i];
    if (ord >= 2)
      for (int i = 0; i < n * n; ++i) h[i] = o.h[i];
    if (ord >= 3)
      for (int i = 0; i < n * n * n; ++i) t[i] = o.t[i];
  }
};

Jet jet_const(double c);
// Coordinate seed: value x, unit gradient in slot i, vanishing higher terms.
Jet jet_var(double x, int i, int n, int ord);

// d/dx_mu as a jet of one order less.
Jet partial(const Jet& a, int mu);

// Univariate postcomposition given derivatives f0..f3 of f at a.v.
Jet compose1(double f0, double f1, double f2, double f3, const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
Jet recip(const Jet& a);
Jet pow(const Jet& a, int k);

namespace detail {

inline void require_same_dim(const Jet& a, const Jet& b) {
  if (a.n != b.n) throw PreconditionError("jet dimension mismatch");
}

}  // namespace detail

inline Jet scaled(const Jet& a, double c) {
  Jet r = a;
  r.v *= c;
  if (r.n == 0) return r;
  if (r.ord >= 1)
    for (int i = 0; i < r.n; ++i) r.g[i] *= c;
  if (r.ord >= 2)
    for (int i = 0; i < r.n * r.n; ++i) r.h[i] *= c;
  if (r.ord >= 3)
    for (int i = 0; i < r.n * r.n * r.n; ++i) r.t[i] *= c;
  return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
  if (a.n == 0) {
    Jet r = b;
    r.v += a.v;
    return r;
  }
  if (b.n == 0) {
    Jet r = a;
    r.v += b.v;
    return r;
  }
  detail::require_same_dim(a, b);
  Jet r;
  r.n = a.n;
  r.ord = a.ord < b.ord ? a.ord : b.ord;
  r.v = a.v + b.v;
  const int n = r.n;
  if (r.ord >= 1)
    for (int i = 0; i < n; ++i) r.g[i] = a.g[i] + b.g[i];
  if (r.ord >= 2)
    for (int i = 0; i < n * n; ++i) r.h[i] = a.h[i] + b.h[i];
  if (r.ord >= 3)
    for (int i = 0; i < n * n * n; ++i) r.t[i] = a.t[i] + b.t[i];
  return r;
}

inline Jet operator-(const Jet& a) { return scaled(a, -1.0); }

inline Jet operator-(const Jet& a, const Jet& b) { return a + scaled(b, -1.0); }

inline Jet operator*(const Jet& a, const Jet& b) {
  if (a.n == 0) return scaled(b, a.v);
  if (b.n == 0) return scaled(a, b.v);
  detail::require_same_dim(a, b);
  Jet r;
  const int n = a.n;
  r.n = n;
  r.ord = a.ord < b.ord ? a.ord : b.ord;
  r.v = a.v * b.v;
  if (r.ord >= 1)
    for (int i = 0; i < n; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  if (r.ord >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r.h[i * n + j] = a.h[i * n + j] * b.v + a.g[i] * b.g[j] +
                         a.g[j] * b.g[i] + a.v * b.h[i * n + j];
  if (r.ord >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const int ij = i * n + j, ik = i * n + k, jk = j * n + k;
          r.t[(i * n + j) * n + k] =
              a.t[(i * n + j) * n + k] * b.v + a.v * b.t[(i * n + j) * n + k] +
              a.h[ij] * b.g[k] + a.h[ik] * b.g[j] + a.h[jk] * b.g[i] +
              a.g[i] * b.h[jk] + a.g[j] * b.h[ik] + a.g[k] * b.h[ij];
        }
  return r;
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

inline Jet operator*(const Jet& a, double c) { return scaled(a, c); }
inline Jet operator*(double c, const Jet& a) { return scaled(a, c); }
inline Jet operator+(const Jet& a, double c) {
  Jet r = a;
  r.v += c;
  return r;
}
inline Jet operator+(double c, const Jet& a) { return a + c; }
inline Jet operator-(const Jet& a, double c) { return a + (-c); }
inline Jet operator-(double c, const Jet& a) { return scaled(a, -1.0) + c; }
inline Jet operator/(const Jet& a, double c) { return scaled(a, 1.0 / c); }
inline Jet operator/(double c, const Jet& a) { return scaled(recip(a), c); }

}  // namespace bvloc
