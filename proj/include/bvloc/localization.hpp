#pragma once

#include <complex>

#include "bvloc/catalog.hpp"
#include "bvloc/quadrature.hpp"

namespace bvloc {

struct LocusReport {
  std::string id;
  int chart = 0;
  double value = 0.0;            // contribution to the localized total
  double weight_product = 0.0;   // signed product of the rotation weights
  std::vector<double> weight_abs;
  int rank = -1;                 // rank of the named bivector, when present
  double sym_residual = 0.0;
};

struct LocalizationReport {
  std::string entry, evaluator;
  double phi = 1.0, speed = 1.0;
  int order = 24;
  double direct = 0.0, localized = 0.0;
  double abs_residual = 0.0, rel_residual = 0.0;
  double closedness = 0.0;  // max sampled coefficient of the closing defect
  bool closed = true;
  std::vector<LocusReport> loci;
  std::vector<std::string> warnings;
};

struct SweepResult {
  std::string entry;
  double phi = 1.0;
  int order = 24;
  std::vector<double> t;
  std::vector<std::complex<double>> z;
  double max_rel_dev = 0.0;
  bool flat = false;
};

struct PhasePoint {
  double t = 0.0;
  std::complex<double> direct, estimate;
  double rel_err = 0.0;
};

// Quadrature of the scalar part against the volume over the covering chart.
double direct_integral(const CatalogEntry& e, double phi, int order);

// Max coefficient of the equivariant closing defect over a coarse sample of
// every chart.
double closedness_sample(const CatalogEntry& e, double phi);

// Sum over the zeros of the action: isolated points and higher-dimensional
// components alike.  Reads the element through an adapted orthonormal frame.
LocalizationReport localize_fixed_loci(const CatalogEntry& e, double phi,
                                       int order);

// Same sum computed a second way: the m-th wedge power of the rotation
// two-form paired against the element in chart coordinates, divided by the
// squared weight product.  Shares no frame-coefficient extraction with
// localize_fixed_loci.
LocalizationReport localize_locus_pairing(const CatalogEntry& e, double phi,
                                          int order);

// Moment-map route (isolated zeros only); checks that the action is the
// bivector image of the generating function before summing.
LocalizationReport localize_moment(const CatalogEntry& e, int order);

// Route through the declared equivariant map; `discrete` uses the declared
// zeros, otherwise they are searched for numerically.
LocalizationReport localize_map(const CatalogEntry& e, bool discrete,
                                double phi, int order);

// Deformation sweep of the pairing by a one-form; flat iff the element is
// closed and the one-form is action-invariant.
SweepResult gamma_sweep(const CatalogEntry& e, double phi, double tmax,
                        int steps, int order);

// Oscillatory pairing against exp(i t phase) compared with the critical-set
// expansion.
std::vector<PhasePoint> phase_compare(const CatalogEntry& e,
                                      const std::vector<double>& ts);

}  // namespace bvloc
