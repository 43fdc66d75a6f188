#pragma once

#include "bvloc/exterior.hpp"
#include "bvloc/jets.hpp"

namespace bvloc {

// Exterior derivative; consumes one jet order of the coefficients.
Graded<Jet> d_form(const Graded<Jet>& a);
Inhom<Jet> d_form(const Inhom<Jet>& a);

// Duality against the volume form with density coefficient rho, and its
// inverse.
Graded<Jet> flat_with_vol(const Graded<Jet>& p, const Jet& rho);
Graded<Jet> sharp_with_vol(const Graded<Jet>& beta, const Jet& rho);

// Odd Laplacian: conjugate the exterior derivative through the duality.
Graded<Jet> bv_laplacian(const Graded<Jet>& p, const Jet& rho);
Inhom<Jet> bv_laplacian(const Inhom<Jet>& p, const Jet& rho);

// Divergence-free reference route valid for constant density.
Graded<Jet> flat_laplacian(const Graded<Jet>& p);

// Odd bracket of multivector fields measuring the Laplacian's failure to be
// a derivation.
Graded<Jet> schouten(const Graded<Jet>& p, const Graded<Jet>& q);

// Lie derivative along a degree-one multivector, on each variance.
Graded<Jet> lie_multivector(const Graded<Jet>& x1, const Graded<Jet>& p);
Graded<Jet> lie_form(const Graded<Jet>& x1, const Graded<Jet>& a);

// One-parameter extensions by the action generator.
Inhom<Jet> equivariant_laplacian(const Inhom<Jet>& p, const Jet& rho,
                                 const Graded<Jet>& x1, double phi);
Inhom<Jet> equivariant_d(const Inhom<Jet>& a, const Graded<Jet>& x1,
                         double phi);
Inhom<Jet> flat_with_vol(const Inhom<Jet>& p, const Jet& rho);

// Coefficient-wise coordinate derivative, same degree.
Graded<Jet> partial_coeffs(const Graded<Jet>& a, int mu);

double max_abs_value(const Graded<Jet>& a);
double max_abs_value(const Inhom<Jet>& a);
Inhom<Jet> inhom_sub(const Inhom<Jet>& a, const Inhom<Jet>& b);

}  // namespace bvloc
