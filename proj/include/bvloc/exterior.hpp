#pragma once

#include <bit>
#include <optional>
#include <vector>

#include "bvloc/errors.hpp"
#include "bvloc/jets.hpp"

namespace bvloc {

enum class Variance { form, multivector };

// Homogeneous exterior-algebra element over coefficient type T (double or
// Jet).  Coefficients sit in ascending-bitmask blade order; degrees outside
// [0, n] are the zero element with an empty coefficient vector.
template <class T>
struct Graded {
  int n = 0;
  int k = 0;
  Variance var = Variance::form;
  std::vector<T> c;
};

using GradedD = Graded<double>;
using GradedJ = Graded<Jet>;

// Basis blades of degree k in n slots, ascending mask order.
const std::vector<unsigned>& blade_masks(int n, int k);
// Position of a blade mask within its degree's coefficient vector.
int blade_pos(int n, unsigned mask);

// Sign of sorting the concatenation of two disjoint sorted index sets.
inline int merge_sign(unsigned a, unsigned b) {
  int s = 0;
  for (unsigned m = b; m; m &= m - 1) {
    int j = std::countr_zero(m);
    s += std::popcount(a >> (j + 1));
  }
  return (s & 1) ? -1 : 1;
}

// (-1)^(q(q-1)/2): order reversal of a q-blade.
inline int reversal_sign(int q) { return ((q * (q - 1) / 2) % 2) ? -1 : 1; }

template <class T>
Graded<T> graded_zero(int n, int k, Variance var) {
  Graded<T> r;
  r.n = n;
  r.k = k;
  r.var = var;
  if (k >= 0 && k <= n) r.c.assign(blade_masks(n, k).size(), T{});
  return r;
}

template <class T>
Graded<T> basis_blade(int n, unsigned mask, Variance var, T coeff) {
  Graded<T> r = graded_zero<T>(n, std::popcount(mask), var);
  r.c[blade_pos(n, mask)] = coeff;
  return r;
}

template <class T>
bool is_zero_degree_range(const Graded<T>& a) {
  return a.k < 0 || a.k > a.n;
}

template <class T>
Graded<T> operator+(const Graded<T>& a, const Graded<T>& b) {
  if (a.n != b.n || a.k != b.k || a.var != b.var)
    throw PreconditionError("graded add: shape mismatch");
  Graded<T> r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
  return r;
}

template <class T>
Graded<T> operator-(const Graded<T>& a, const Graded<T>& b) {
  if (a.n != b.n || a.k != b.k || a.var != b.var)
    throw PreconditionError("graded sub: shape mismatch");
  Graded<T> r = a;
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
  return r;
}

template <class T, class S>
Graded<T> operator*(const Graded<T>& a, const S& s) {
  Graded<T> r = a;
  for (auto& x : r.c) x = x * s;
  return r;
}

template <class T>
Graded<T> wedge(const Graded<T>& a, const Graded<T>& b) {
  if (a.n != b.n) throw PreconditionError("wedge: dimension mismatch");
  if (a.var != b.var) throw PreconditionError("wedge: variance mismatch");
  Graded<T> r = graded_zero<T>(a.n, a.k + b.k, a.var);
  if (is_zero_degree_range(r) || is_zero_degree_range(a) ||
      is_zero_degree_range(b))
    return r;
  const auto& ma = blade_masks(a.n, a.k);
  const auto& mb = blade_masks(b.n, b.k);
  for (std::size_t i = 0; i < ma.size(); ++i)
    for (std::size_t j = 0; j < mb.size(); ++j) {
      if (ma[i] & mb[j]) continue;
      int p = blade_pos(a.n, ma[i] | mb[j]);
      int s = merge_sign(ma[i], mb[j]);
      r.c[p] = r.c[p] + (s > 0 ? a.c[i] * b.c[j] : a.c[i] * b.c[j] * -1.0);
    }
  return r;
}

// Left odd derivative in slot i: strips the slot off blades containing it,
// with the sign of commuting past the lower slots.
template <class T>
Graded<T> annihilate(const Graded<T>& a, int i) {
  Graded<T> r = graded_zero<T>(a.n, a.k - 1, a.var);
  if (is_zero_degree_range(a) || a.k == 0) return r;
  const unsigned bit = 1u << i;
  const auto& ma = blade_masks(a.n, a.k);
  for (std::size_t p = 0; p < ma.size(); ++p) {
    if (!(ma[p] & bit)) continue;
    int s = (std::popcount(ma[p] & (bit - 1)) & 1) ? -1 : 1;
    int q = blade_pos(a.n, ma[p] & ~bit);
    r.c[q] = r.c[q] + (s > 0 ? a.c[p] : a.c[p] * -1.0);
  }
  return r;
}

// Pairing of a form with a multivector of the same degree: unit on matching
// sorted blades.
template <class T>
T pairing(const Graded<T>& a, const Graded<T>& b) {
  if (a.n != b.n || a.k != b.k || a.var == b.var)
    throw PreconditionError("pairing: needs equal degrees, opposite variance");
  T acc{};
  for (std::size_t i = 0; i < a.c.size(); ++i) acc = acc + a.c[i] * b.c[i];
  return acc;
}

namespace detail {

// Shared kernel of both contractions: out_K += eps * P_J * sgn(J,K) * a_{JuK}.
template <class T>
Graded<T> contract_kernel(const Graded<T>& p, const Graded<T>& a, int eps) {
  if (p.n != a.n) throw PreconditionError("contract: dimension mismatch");
  if (p.var != Variance::multivector || a.var != Variance::form)
    throw PreconditionError("contract: expects multivector against form");
  if (p.k > a.k)
    throw PreconditionError("contract: multivector degree exceeds the form");
  Graded<T> r = graded_zero<T>(a.n, a.k - p.k, Variance::form);
  if (is_zero_degree_range(p) || is_zero_degree_range(a)) return r;
  const auto& mp = blade_masks(p.n, p.k);
  const auto& mr = blade_masks(a.n, r.k);
  for (std::size_t j = 0; j < mp.size(); ++j)
    for (std::size_t kk = 0; kk < mr.size(); ++kk) {
      if (mp[j] & mr[kk]) continue;
      int s = eps * merge_sign(mp[j], mr[kk]);
      const T& av = a.c[blade_pos(a.n, mp[j] | mr[kk])];
      r.c[kk] = r.c[kk] + (s > 0 ? p.c[j] * av : p.c[j] * av * -1.0);
    }
  return r;
}

}  // namespace detail

// P |_ a: iterated interior product, innermost slot applied first.
template <class T>
Graded<T> left_contract(const Graded<T>& p, const Graded<T>& a) {
  return detail::contract_kernel(p, a, reversal_sign(p.k));
}

// a _| P: adjoint of right wedge multiplication, no reversal sign.
template <class T>
Graded<T> right_contract(const Graded<T>& a, const Graded<T>& p) {
  return detail::contract_kernel(p, a, 1);
}

// Mixed-degree element; absent degrees are zero.
template <class T>
struct Inhom {
  int n = 0;
  Variance var = Variance::form;
  std::array<std::optional<Graded<T>>, kMaxVars + 1> part;

  Graded<T>& at(int k) {
    if (!part[k]) part[k] = graded_zero<T>(n, k, var);
    return *part[k];
  }
  void add(const Graded<T>& g) {
    if (g.k < 0 || g.k > n || g.n != n || g.var != var)
      throw PreconditionError("inhom add: shape mismatch");
    at(g.k) = at(g.k) + g;
  }
};

template <class T>
Inhom<T> inhom_wedge(const Inhom<T>& a, const Inhom<T>& b) {
  if (a.n != b.n || a.var != b.var)
    throw PreconditionError("inhom wedge: shape mismatch");
  Inhom<T> r;
  r.n = a.n;
  r.var = a.var;
  for (int i = 0; i <= a.n; ++i) {
    if (!a.part[i]) continue;
    for (int j = 0; j + i <= a.n; ++j) {
      if (!b.part[j]) continue;
      r.add(wedge(*a.part[i], *b.part[j]));
    }
  }
  return r;
}

// Wedge powers x^0 .. x^jmax of a homogeneous element of positive degree.
template <class T>
std::vector<Graded<T>> wedge_powers(const Graded<T>& x, int jmax) {
  if (x.k < 1) throw PreconditionError("wedge_powers: needs positive degree");
  std::vector<Graded<T>> out;
  Graded<T> unit = graded_zero<T>(x.n, 0, x.var);
  unit.c[0] = T{} + 1.0;
  out.push_back(unit);
  for (int j = 1; j <= jmax; ++j) out.push_back(wedge(out.back(), x));
  return out;
}

// Pfaffian of an antisymmetric matrix (row-major, even dim), first-row
// expansion.  pf [[0, a], [-a, 0]] = a.
double pfaffian(const double* m, int dim, int stride);

}  // namespace bvloc
