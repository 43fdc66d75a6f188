#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvloc/fields.hpp"

namespace bvloc {

struct Box {
  int n = 0;
  std::array<double, kMaxVars> lo{};
  std::array<double, kMaxVars> hi{};
};

struct Chart {
  std::string name;
  int n = 0;
  Box box;
  // Per-face licence to drop boundary terms: the face either carries no
  // measure or is identified with its opposite.  Index 2*axis + (1 if the
  // upper face).
  std::array<bool, 2 * kMaxVars> face_flux_free{};
  // Injection into an ambient space; used to recognise the same manifold
  // point seen from two charts.
  std::function<void(const double*, double*)> embed;
  int embed_dim = 0;
};

// A chart together with the geometric data expressed in it.  metric is the
// packed upper triangle (row-major), vol the signed top-form coefficient.
struct ChartData {
  Chart chart;
  Field metric;
  Field vecX;
  Field vol;
  std::map<std::string, Field> named;

  const Field& named_field(const std::string& key) const;
  bool has_named(const std::string& key) const { return named.count(key) > 0; }
};

// Connected component of a zero/critical set.  udim == 0 is an isolated
// point at `at`; otherwise `map` sends the udim-dimensional parameter box
// into chart coordinates.
struct FixedLocus {
  std::string id;
  int chart = 0;
  int udim = 0;
  std::array<double, kMaxVars> at{};
  Box ubox;
  std::function<void(const Jet*, Jet*)> map;
};

struct CircleAction {
  double speed = 1.0;
  std::vector<FixedLocus> loci;
};

struct EquivariantMapSpec {
  int m = 0;                    // complex components of the named "F" field
  std::vector<double> weights;  // rotation weight of each component
};

struct Geometry {
  std::string name;
  int dim = 0;
  std::vector<ChartData> charts;  // charts[0] covers the manifold a.e.
  CircleAction action;
  std::optional<EquivariantMapSpec> eqmap;
  std::vector<FixedLocus> phase_crit;
  int default_order = 24;
};

// Full symmetric matrix of jets from the packed metric field.
std::vector<Jet> metric_matrix(const ChartData& cd, const double* pt, int ord);

// Oriented g-orthonormal frame at a point whose first tdim columns span the
// given tangent directions.  Orientation is fixed against the vol sign by
// flipping the last column if needed; gram is the tangent volume factor
// sqrt(det T^t g T) of the unorthonormalised tangent columns.
struct FrameData {
  Eigen::MatrixXd E, Einv;
  double gram = 1.0;
};
FrameData adapted_frame(const ChartData& cd, const double* pt,
                        const Eigen::MatrixXd& tangent);

// Antisymmetric rotation data of the action at a zero of X, reduced to the
// frame's normal block.  lambda_product carries the sign (pfaffian route),
// lambda_abs the magnitudes; sym_residual measures the metric invariance
// defect of X.
struct WeightData {
  int m = 0;
  std::vector<double> lambda_abs;
  double lambda_product = 0.0;
  double sym_residual = 0.0;
  Eigen::MatrixXd frame_two_form;
};
WeightData rotation_weights(const ChartData& cd, const double* pt,
                            const FrameData& fr, int tdim);

// Covariant derivative matrix C of the lowered field; callers build the
// rotation two-form as C - C^t.  sym_residual receives the magnitude of the
// symmetric part, the metric-invariance defect of X.
Eigen::MatrixXd lowered_derivative(const ChartData& cd, const double* pt,
                                   double* sym_residual);

// Full antisymmetric component matrix of a named bivector field.
Eigen::MatrixXd bivector_matrix(const ChartData& cd, const std::string& key,
                                const double* pt);
int matrix_rank(const Eigen::MatrixXd& m, double rel_tol);

// Basis substitution e_j -> sum_i A(i,j) e_i extended multiplicatively.
GradedD apply_linear(const GradedD& p, const Eigen::MatrixXd& A);

struct ChartPoint {
  int chart = 0;
  std::array<double, kMaxVars> at{};
};
// Newton search for zeros of X over every chart, deduplicated through the
// chart embeddings.
std::vector<ChartPoint> find_zeros(const Geometry& g);

}  // namespace bvloc
