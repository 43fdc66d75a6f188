#pragma once

#include <functional>

#include "bvloc/geometry.hpp"

namespace bvloc {

struct QuadRule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};
const QuadRule& gauss_legendre(int order);

// Worker count: hardware concurrency clamped to [1, 16], overridable through
// the BVLOC_THREADS environment variable.
int thread_budget();

// Tensor-product rule over the box, m integrands evaluated in one pass.
// The node set is split into a fixed block partition reduced by a fixed
// pairwise tree, so results are bitwise identical for any worker count.
void integrate_box_multi(const Box& box, int order, int m,
                         const std::function<void(const double*, double*)>& f,
                         double* out);

double integrate_box(const Box& box, int order,
                     const std::function<double(const double*)>& f);

}  // namespace bvloc
