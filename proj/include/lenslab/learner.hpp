#ifndef LENSLAB_LEARNER_HPP
#define LENSLAB_LEARNER_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lenslab/error.hpp"

namespace lenslab {

using Vec = std::vector<double>;

// A differentiable parameterized function I : R^k x R^m -> R^n with optional
// analytic gradients of the total error composite E(p,a,b).
struct ParamFn {
  std::size_t k = 0, m = 0, n = 0;
  std::function<Vec(const Vec& p, const Vec& a)> eval;
  // Vector-Jacobian products J_p^T dy and J_a^T dy; combined with the error
  // derivative they yield the analytic gradients of the total error
  // E(p,a,b) = sum_j err(I_j(p,a), b_j). Optional: finite differences are
  // used when absent.
  std::function<Vec(const Vec& p, const Vec& a, const Vec& dy)> vjp_p;
  std::function<Vec(const Vec& p, const Vec& a, const Vec& dy)> vjp_a;
};

struct ErrFn {
  std::string name;
  std::function<double(double x, double y)> value;
  std::function<double(double x, double y)> dx;  // partial derivative in the first slot
};

// Registry lookup by name; "squared" ships, (x-y)^2/2.
ErrFn error_function(const std::string& name);

struct LearnerLens {
  ParamFn fn;
  double eps = 0.1;
  std::optional<double> eps_a;  // overrides the request step size when present
  ErrFn err = error_function("squared");

  double step_p() const { return eps; }
  double step_a() const { return eps_a.value_or(eps); }
};

// Codiscrete arrow: an ordered pair of points.
struct VecDelta {
  Vec from;
  Vec to;
};

struct LearnerPutResult {
  Vec p2;
  Vec a2;
  VecDelta amendment;  // from b to I(p2, a2)
};

double total_error(const LearnerLens& ll, const Vec& y, const Vec& b);

// Gradient-descent put: p' = p - eps*grad_p E, a' = a - eps_a*grad_a E,
// amended target I(p', a').
LearnerPutResult learner_put(const LearnerLens& ll, const Vec& p, const Vec& a, const Vec& b);

// Two-stage composite following sequential lens composition: the downstream
// lens runs first and its request becomes the upstream target.
struct ComposedLearner {
  LearnerLens first;   // R^m -> R^h
  LearnerLens second;  // R^h -> R^n
};

struct ComposedPutResult {
  Vec p2;  // updated first-stage parameters
  Vec q2;  // updated second-stage parameters
  Vec a2;  // updated input
  VecDelta amendment;
};

ComposedLearner learner_seq_compose(const LearnerLens& l1, const LearnerLens& l2);
ComposedPutResult composed_put(const ComposedLearner& c, const Vec& p, const Vec& q, const Vec& a,
                               const Vec& b);
Vec composed_eval(const ComposedLearner& c, const Vec& p, const Vec& q, const Vec& a);

struct GradcheckEntry {
  std::string which;  // "p" or "a"
  std::size_t index;
  double analytic;
  double numeric;
  double rel_error;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double tolerance = 1e-4;
  bool pass() const;
};

// Analytic gradients against central finite differences (step 1e-6);
// relative-error denominator max(1, |analytic|, |numeric|).
GradcheckReport gradcheck(const ParamFn& fn, const ErrFn& err, const Vec& p, const Vec& a,
                          const Vec& b);

struct LearnerLawEntry {
  std::string law;
  std::string probe;
  bool ok;
  std::string detail;
};

struct LearnerLawReport {
  std::vector<LearnerLawEntry> entries;
  bool stability_pass() const;
  bool putget_pass() const;
};

// Stability is checked only at consistent probes (b = I(p,a)); amended Putget
// at every probe.
LearnerLawReport check_learner_laws(const LearnerLens& ll,
                                    const std::vector<std::array<Vec, 3>>& probes);

// Affine-layer network; parameters are the flattened weight (and optional
// bias) entries of every layer. Analytic gradients via reverse accumulation.
struct AffineLayerSpec {
  std::size_t in = 0, out = 0;
  bool has_bias = true;
  std::vector<double> init;  // row-major weights then bias, initial values
};

ParamFn affine_network(const std::vector<AffineLayerSpec>& layers);

}  // namespace lenslab

#endif
