#pragma once

#include <functional>
#include <vector>

#include "bvloc/exterior.hpp"
#include "bvloc/jets.hpp"

namespace bvloc {

// Chart-local evaluator: receives the n seeded coordinate jets, writes ncomp
// output jets.  extra_order is how many derivative orders the evaluator
// consumes internally on top of what the caller asks for.
struct Field {
  int n = 0;
  int ncomp = 1;
  int extra_order = 0;
  std::function<void(const Jet* x, Jet* out)> eval;
};

// Seed coordinate jets for a point at the given order.
void seed_point(const double* pt, int n, int ord, Jet* out);

std::vector<Jet> eval_field(const Field& f, const double* pt, int ord);
Jet eval_scalar(const Field& f, const double* pt, int ord);

// Interpret the ncomp outputs as blade coefficients of a homogeneous element.
Graded<Jet> eval_graded(const Field& f, const double* pt, int ord, int degree,
                        Variance var);

Field scalar_field(int n, std::function<Jet(const Jet*)> fn);
Field constant_field(int n, std::vector<double> values);
Field scale_field(const Field& f, double c);
// Adds c * x[i] * x[j] to component k; used to knock a metric off its
// symmetry group on purpose.
Field skew_component_field(const Field& f, int k, int i, int j, double c);

}  // namespace bvloc
