#include "bvloc/exterior.hpp"

#include <bit>
#include <vector>

namespace bvloc {

namespace {

struct BladeTables {
  // masks[n][k]: blades of degree k in n slots; pos[n][mask]: slot in degree.
  std::vector<std::vector<std::vector<unsigned>>> masks;
  std::vector<std::vector<int>> pos;

  BladeTables() {
    masks.resize(kMaxVars + 1);
    pos.resize(kMaxVars + 1);
    for (int n = 0; n <= kMaxVars; ++n) {
      masks[n].resize(n + 1);
      pos[n].assign(std::size_t{1} << n, -1);
      for (unsigned m = 0; m < (1u << n); ++m) {
        int k = std::popcount(m);
        pos[n][m] = static_cast<int>(masks[n][k].size());
        masks[n][k].push_back(m);
      }
    }
  }
};

const BladeTables& tables() {
  static const BladeTables t;
  return t;
}

const std::vector<unsigned> kNoBlades;

}  // namespace

const std::vector<unsigned>& blade_masks(int n, int k) {
  if (n < 0 || n > kMaxVars) throw PreconditionError("blade_masks: bad dim");
  if (k < 0 || k > n) return kNoBlades;
  return tables().masks[n][k];
}

int blade_pos(int n, unsigned mask) {
  if (n < 0 || n > kMaxVars || mask >= (1u << n))
    throw PreconditionError("blade_pos: bad mask");
  return tables().pos[n][mask];
}

double pfaffian(const double* m, int dim, int stride) {
  if (dim % 2 != 0) throw PreconditionError("pfaffian: odd dimension");
  if (dim == 0) return 1.0;
  if (dim == 2) return m[0 * stride + 1];
  // expand along the first row into the submatrix with rows/cols 0 and j cut
  double acc = 0.0;
  std::vector<double> sub((dim - 2) * (dim - 2));
  for (int j = 1; j < dim; ++j) {
    double a = m[0 * stride + j];
    if (a == 0.0) continue;
    int ri = 0;
    for (int r = 1; r < dim; ++r) {
      if (r == j) continue;
      int ci = 0;
      for (int c = 1; c < dim; ++c) {
        if (c == j) continue;
        sub[ri * (dim - 2) + ci] = m[r * stride + c];
        ++ci;
      }
      ++ri;
    }
    double sign = (j % 2 == 1) ? 1.0 : -1.0;
    acc += sign * a * pfaffian(sub.data(), dim - 2, dim - 2);
  }
  return acc;
}

}  // namespace bvloc
