#include "bvloc/fields.hpp"

namespace bvloc {

void seed_point(const double* pt, int n, int ord, Jet* out) {
  for (int i = 0; i < n; ++i) out[i] = jet_var(pt[i], i, n, ord);
}

std::vector<Jet> eval_field(const Field& f, const double* pt, int ord) {
  std::vector<Jet> x(f.n);
  seed_point(pt, f.n, ord + f.extra_order, x.data());
  std::vector<Jet> out(f.ncomp);
  f.eval(x.data(), out.data());
  return out;
}

Jet eval_scalar(const Field& f, const double* pt, int ord) {
  if (f.ncomp != 1) throw PreconditionError("eval_scalar: field is not scalar");
  return eval_field(f, pt, ord)[0];
}

Graded<Jet> eval_graded(const Field& f, const double* pt, int ord, int degree,
                        Variance var) {
  Graded<Jet> g = graded_zero<Jet>(f.n, degree, var);
  if (static_cast<int>(g.c.size()) != f.ncomp)
    throw PreconditionError("eval_graded: component count does not match degree");
  std::vector<Jet> out = eval_field(f, pt, ord);
  for (std::size_t i = 0; i < g.c.size(); ++i) g.c[i] = out[i];
  return g;
}

Field scalar_field(int n, std::function<Jet(const Jet*)> fn) {
  Field f;
  f.n = n;
  f.ncomp = 1;
  f.eval = [fn = std::move(fn)](const Jet* x, Jet* out) { out[0] = fn(x); };
  return f;
}

Field constant_field(int n, std::vector<double> values) {
  Field f;
  f.n = n;
  f.ncomp = static_cast<int>(values.size());
  f.eval = [values = std::move(values)](const Jet*, Jet* out) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = jet_const(values[i]);
  };
  return f;
}

Field scale_field(const Field& f, double c) {
  Field r = f;
  r.eval = [base = f.eval, nc = f.ncomp, c](const Jet* x, Jet* out) {
    base(x, out);
    for (int i = 0; i < nc; ++i) out[i] = scaled(out[i], c);
  };
  return r;
}

Field skew_component_field(const Field& f, int k, int i, int j, double c) {
  Field r = f;
  r.eval = [base = f.eval, k, i, j, c](const Jet* x, Jet* out) {
    base(x, out);
    out[k] = out[k] + x[i] * x[j] * c;
  };
  return r;
}

}  // namespace bvloc
