#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvloc/bv_ops.hpp"
#include "bvloc/geometry.hpp"

namespace bvloc {

// Polynomial coefficient of the deformation parameter: phi^phi_pow times a
// homogeneous multivector of the given degree.
struct PhiTerm {
  int phi_pow = 0;
  int degree = 0;
  Field comps;
};

struct EquivariantElement {
  std::vector<std::vector<PhiTerm>> terms;  // indexed like Geometry::charts
  Inhom<Jet> eval(int chart, const double* pt, double phi, int ord) const;
};

// exp(S) sum_j (phi I)^j / j! from the named scalar S and bivector I; charts
// without an I field contribute the scalar term only.
EquivariantElement exponential_element(const Geometry& g,
                                       const std::string& s_key,
                                       const std::string& i_key);

struct CatalogEntry {
  std::string id;
  std::string blurb;
  std::string expected;  // one-line statement of the known answer
  double speed = 1.0;
  Geometry geom;
  EquivariantElement element;
  std::vector<std::string> evaluators;
  bool expect_closed = true;
  bool expect_flat_sweep = true;
  std::map<std::string, int> expected_ranks;  // locus id -> bivector rank
};

const std::vector<std::string>& catalog_ids();
CatalogEntry make_entry(const std::string& id, double speed);
inline CatalogEntry make_entry(const std::string& id) {
  return make_entry(id, 1.0);
}

// Modified copies used by the covariance and fault-injection checks.
CatalogEntry flip_orientation(const CatalogEntry& e);
CatalogEntry scale_volume(const CatalogEntry& e, double c);
CatalogEntry skew_metric(const CatalogEntry& e);

}  // namespace bvloc
