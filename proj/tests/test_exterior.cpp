#include "bvloc/exterior.hpp"

#include <Eigen/Dense>
#include <bit>
#include <random>

#include "doctest.h"

using namespace bvloc;

namespace {

std::mt19937 rng(20240811);

GradedD rand_graded(int n, int k, Variance var) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GradedD g = graded_zero<double>(n, k, var);
  for (auto& x : g.c) x = u(rng);
  return g;
}

// Reference route for the left contraction: interior products applied
// innermost slot first, one annihilation per set bit, descending.
GradedD chain_contract(unsigned pmask, const GradedD& a) {
  GradedD r = a;
  std::vector<int> slots;
  for (unsigned m = pmask; m; m &= m - 1) slots.push_back(std::countr_zero(m));
  for (auto it = slots.rbegin(); it != slots.rend(); ++it)
    r = annihilate(r, *it);
  return r;
}

}  // namespace

TEST_CASE("single slot contraction keeps the remaining slot") {
  GradedD a = basis_blade<double>(2, 0b11u, Variance::form, 1.0);  // dx1^dx2
  GradedD p = basis_blade<double>(2, 0b01u, Variance::multivector, 1.0);
  GradedD r = left_contract(p, a);
  CHECK(r.k == 1);
  CHECK(r.c[blade_pos(2, 0b10u)] == 1.0);  // +dx2
  CHECK(r.c[blade_pos(2, 0b01u)] == 0.0);
}

TEST_CASE("two slot contraction of the area element gives minus one") {
  GradedD a = basis_blade<double>(2, 0b11u, Variance::form, 1.0);
  GradedD p = basis_blade<double>(2, 0b11u, Variance::multivector, 1.0);
  GradedD r = left_contract(p, a);
  CHECK(r.k == 0);
  CHECK(r.c[0] == -1.0);
}

TEST_CASE("pair contraction into a three slot volume") {
  GradedD a = basis_blade<double>(3, 0b111u, Variance::form, 1.0);
  GradedD p = basis_blade<double>(3, 0b011u, Variance::multivector, 1.0);
  GradedD r = left_contract(p, a);
  CHECK(r.k == 1);
  CHECK(r.c[blade_pos(3, 0b100u)] == -1.0);  // -dx3
}

TEST_CASE("left contraction equals the interior product chain") {
  const int n = 4;
  for (int ak = 0; ak <= n; ++ak) {
    GradedD a = rand_graded(n, ak, Variance::form);
    for (int pk = 0; pk <= ak; ++pk)
      for (unsigned pm : blade_masks(n, pk)) {
        GradedD p = basis_blade<double>(n, pm, Variance::multivector, 1.0);
        GradedD lhs = left_contract(p, a);
        GradedD ref = chain_contract(pm, a);
        REQUIRE(lhs.c.size() == ref.c.size());
        for (std::size_t i = 0; i < lhs.c.size(); ++i)
          CHECK(lhs.c[i] == doctest::Approx(ref.c[i]).epsilon(1e-14));
      }
  }
}

TEST_CASE("contraction adjunctions against the wedge pairing") {
  const int n = 4;
  for (int ak = 0; ak <= n; ++ak)
    for (int pk = 0; pk <= ak; ++pk) {
      int qk = ak - pk;
      GradedD a = rand_graded(n, ak, Variance::form);
      GradedD p = rand_graded(n, pk, Variance::multivector);
      GradedD q = rand_graded(n, qk, Variance::multivector);
      double lhs_left = pairing(left_contract(p, a), q);
      double rhs = pairing(a, wedge(p, q));
      CHECK(lhs_left ==
            doctest::Approx(reversal_sign(pk) * rhs).epsilon(1e-12));
      double lhs_right = pairing(right_contract(a, p), q);
      CHECK(lhs_right == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("contractions compose across wedge factors") {
  const int n = 4;
  for (int pk = 0; pk <= 2; ++pk)
    for (int qk = 0; qk + pk <= n; ++qk) {
      GradedD p = rand_graded(n, pk, Variance::multivector);
      GradedD q = rand_graded(n, qk, Variance::multivector);
      GradedD a = rand_graded(n, n, Variance::form);
      GradedD lhs = left_contract(wedge(p, q), a);
      GradedD rhs = left_contract(p, left_contract(q, a));
      for (std::size_t i = 0; i < lhs.c.size(); ++i)
        CHECK(lhs.c[i] == doctest::Approx(rhs.c[i]).epsilon(1e-12));
      GradedD lhs2 = right_contract(a, wedge(p, q));
      GradedD rhs2 = right_contract(right_contract(a, p), q);
      for (std::size_t i = 0; i < lhs2.c.size(); ++i)
        CHECK(lhs2.c[i] == doctest::Approx(rhs2.c[i]).epsilon(1e-12));
    }
}

TEST_CASE("wedge grading and antisymmetry") {
  GradedD x = rand_graded(4, 1, Variance::form);
  GradedD y = rand_graded(4, 1, Variance::form);
  GradedD xy = wedge(x, y);
  GradedD yx = wedge(y, x);
  for (std::size_t i = 0; i < xy.c.size(); ++i)
    CHECK(xy.c[i] == doctest::Approx(-yx.c[i]));
  GradedD xx = wedge(x, x);
  for (auto v : xx.c) CHECK(v == doctest::Approx(0.0));
  GradedD b = rand_graded(4, 2, Variance::form);
  GradedD bx = wedge(b, x);
  GradedD xb = wedge(x, b);
  for (std::size_t i = 0; i < bx.c.size(); ++i)
    CHECK(bx.c[i] == doctest::Approx(xb.c[i]));  // even-odd commute
}

TEST_CASE("wedge associativity on random elements") {
  GradedD a = rand_graded(4, 1, Variance::multivector);
  GradedD b = rand_graded(4, 2, Variance::multivector);
  GradedD c = rand_graded(4, 1, Variance::multivector);
  GradedD l = wedge(wedge(a, b), c);
  GradedD r = wedge(a, wedge(b, c));
  for (std::size_t i = 0; i < l.c.size(); ++i)
    CHECK(l.c[i] == doctest::Approx(r.c[i]).epsilon(1e-13));
}

TEST_CASE("annihilations anticommute") {
  GradedD a = rand_graded(4, 3, Variance::form);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      GradedD ij = annihilate(annihilate(a, i), j);
      GradedD ji = annihilate(annihilate(a, j), i);
      for (std::size_t p = 0; p < ij.c.size(); ++p)
        CHECK(ij.c[p] == doctest::Approx(-ji.c[p]));
    }
}

TEST_CASE("degenerate degree combinations collapse to zero") {
  GradedD a = rand_graded(2, 2, Variance::form);
  GradedD b = rand_graded(2, 1, Variance::form);
  GradedD w = wedge(a, b);
  CHECK(w.k == 3);
  CHECK(w.c.empty());
  GradedD z = annihilate(annihilate(annihilate(a, 0), 1), 0);
  CHECK(z.c.empty());
}

TEST_CASE("pfaffian squares to the determinant") {
  CHECK(pfaffian((const double[]){0.0, 2.5, -2.5, 0.0}, 2, 2) == 2.5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int dim : {2, 4, 6}) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        m(i, j) = u(rng);
        m(j, i) = -m(i, j);
      }
    std::vector<double> flat(dim * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) flat[i * dim + j] = m(i, j);
    double pf = pfaffian(flat.data(), dim, dim);
    CHECK(pf * pf == doctest::Approx(m.determinant()).epsilon(1e-10));
  }
}

TEST_CASE("wedge powers of a symplectic style two form") {
  GradedD w = graded_zero<double>(4, 2, Variance::form);
  w.c[blade_pos(4, 0b0011u)] = 1.0;  // dx1^dx2
  w.c[blade_pos(4, 0b1100u)] = 1.0;  // dx3^dx4
  auto pows = wedge_powers(w, 2);
  CHECK(pows[0].k == 0);
  CHECK(pows[0].c[0] == 1.0);
  CHECK(pows[2].c[blade_pos(4, 0b1111u)] == doctest::Approx(2.0));
}

TEST_CASE("jet coefficients ride through blade operations") {
  // d(f g) on coefficients: wedge of jet-coefficient one forms keeps the
  // product rule intact in every derivative slot.
  Jet f = bvloc::exp(jet_var(0.3, 0, 2, 2));
  Jet g = bvloc::sin(jet_var(0.7, 1, 2, 2)) + 2.0;
  GradedJ a = basis_blade<Jet>(2, 0b01u, Variance::form, f);
  GradedJ b = basis_blade<Jet>(2, 0b10u, Variance::form, g);
  GradedJ w = wedge(a, b);
  const Jet& cw = w.c[blade_pos(2, 0b11u)];
  Jet ref = f * g;
  CHECK(cw.v == doctest::Approx(ref.v));
  CHECK(cw.grad(0) == doctest::Approx(ref.grad(0)));
  CHECK(cw.hess(0, 1) == doctest::Approx(ref.hess(0, 1)));
}

TEST_CASE("inhomogeneous wedge distributes over degrees") {
  Inhom<double> A;
  A.n = 3;
  A.var = Variance::form;
  A.add(rand_graded(3, 0, Variance::form));
  A.add(rand_graded(3, 2, Variance::form));
  Inhom<double> B;
  B.n = 3;
  B.var = Variance::form;
  B.add(rand_graded(3, 1, Variance::form));
  Inhom<double> W = inhom_wedge(A, B);
  GradedD w1 = wedge(*A.part[0], *B.part[1]);
  GradedD w3 = wedge(*A.part[2], *B.part[1]);
  for (std::size_t i = 0; i < w1.c.size(); ++i)
    CHECK(W.part[1]->c[i] == doctest::Approx(w1.c[i]));
  for (std::size_t i = 0; i < w3.c.size(); ++i)
    CHECK(W.part[3]->c[i] == doctest::Approx(w3.c[i]));
}
