#include "lenslab/learner.hpp"

#include <cmath>

namespace lenslab {

ErrFn error_function(const std::string& name) {
  if (name == "squared")
    return {"squared", [](double x, double y) { return 0.5 * (x - y) * (x - y); },
            [](double x, double y) { return x - y; }};
  // Non-smooth fixture error: its subgradient does not vanish at equality,
  // which is exactly the Stability caveat of gradient-descent learners.
  if (name == "abs")
    return {"abs", [](double x, double y) { return std::fabs(x - y); },
            [](double x, double y) { return x >= y ? 1.0 : -1.0; }};
  throw error(errc::parse_error, "unknown error function '" + name + "'");
}

static void check_dims(const ParamFn& fn, const Vec& p, const Vec& a) {
  if (p.size() != fn.k || a.size() != fn.m)
    throw error(errc::dim_mismatch, "parameter/input dimensions do not match the function");
}

double total_error(const LearnerLens& ll, const Vec& y, const Vec& b) {
  if (y.size() != b.size()) throw error(errc::dim_mismatch, "total_error operand sizes differ");
  double e = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) e += ll.err.value(y[j], b[j]);
  return e;
}

static Vec error_derivative(const LearnerLens& ll, const Vec& y, const Vec& b) {
  Vec dy(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) dy[j] = ll.err.dx(y[j], b[j]);
  return dy;
}

static double total_error_at(const LearnerLens& ll, const Vec& p, const Vec& a, const Vec& b) {
  return total_error(ll, ll.fn.eval(p, a), b);
}

static constexpr double kFdStep = 1e-6;

static Vec numeric_grad(const std::function<double(const Vec&)>& f, Vec x) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + kFdStep;
    const double hi = f(x);
    x[i] = saved - kFdStep;
    const double lo = f(x);
    x[i] = saved;
    g[i] = (hi - lo) / (2.0 * kFdStep);
  }
  return g;
}

static std::pair<Vec, Vec> error_gradients(const LearnerLens& ll, const Vec& p, const Vec& a,
                                           const Vec& b) {
  const ParamFn& fn = ll.fn;
  if (fn.vjp_p && fn.vjp_a) {
    const Vec dy = error_derivative(ll, fn.eval(p, a), b);
    return {fn.vjp_p(p, a, dy), fn.vjp_a(p, a, dy)};
  }
  auto ep = [&](const Vec& pp) { return total_error_at(ll, pp, a, b); };
  auto ea = [&](const Vec& aa) { return total_error_at(ll, p, aa, b); };
  return {numeric_grad(ep, p), numeric_grad(ea, a)};
}

LearnerPutResult learner_put(const LearnerLens& ll, const Vec& p, const Vec& a, const Vec& b) {
  check_dims(ll.fn, p, a);
  if (b.size() != ll.fn.n) throw error(errc::dim_mismatch, "target dimension mismatch");
  auto [gp, ga] = error_gradients(ll, p, a, b);
  LearnerPutResult r;
  r.p2 = p;
  r.a2 = a;
  for (std::size_t i = 0; i < gp.size(); ++i) {
    if (!std::isfinite(gp[i])) throw error(errc::non_finite_gradient, "parameter gradient");
    r.p2[i] -= ll.step_p() * gp[i];
  }
  for (std::size_t i = 0; i < ga.size(); ++i) {
    if (!std::isfinite(ga[i])) throw error(errc::non_finite_gradient, "input gradient");
    r.a2[i] -= ll.step_a() * ga[i];
  }
  // Amended target: Putget0 holds by construction.
  r.amendment = {b, ll.fn.eval(r.p2, r.a2)};
  return r;
}

ComposedLearner learner_seq_compose(const LearnerLens& l1, const LearnerLens& l2) {
  if (l1.fn.n != l2.fn.m)
    throw error(errc::dim_mismatch, "inner dimensions of the composed learners differ");
  return {l1, l2};
}

Vec composed_eval(const ComposedLearner& c, const Vec& p, const Vec& q, const Vec& a) {
  return c.second.fn.eval(q, c.first.fn.eval(p, a));
}

ComposedPutResult composed_put(const ComposedLearner& c, const Vec& p, const Vec& q, const Vec& a,
                               const Vec& b) {
  const Vec x = c.first.fn.eval(p, a);
  LearnerPutResult down = learner_put(c.second, q, x, b);
  // The downstream request becomes the upstream target.
  LearnerPutResult up = learner_put(c.first, p, a, down.a2);
  ComposedPutResult r;
  r.p2 = up.p2;
  r.q2 = down.p2;
  r.a2 = up.a2;
  r.amendment = {b, c.second.fn.eval(down.p2, c.first.fn.eval(up.p2, up.a2))};
  return r;
}

bool GradcheckReport::pass() const {
  for (const auto& e : entries)
    if (e.rel_error >= tolerance) return false;
  return true;
}

GradcheckReport gradcheck(const ParamFn& fn, const ErrFn& err, const Vec& p, const Vec& a,
                          const Vec& b) {
  LearnerLens probe{fn, 1.0, std::nullopt, err};
  if (!fn.vjp_p || !fn.vjp_a)
    throw error(errc::domain_error, "gradcheck requires analytic gradients");
  const Vec dy = error_derivative(probe, fn.eval(p, a), b);
  const Vec ap = fn.vjp_p(p, a, dy);
  const Vec aa = fn.vjp_a(p, a, dy);
  auto ep = [&](const Vec& pp) { return total_error_at(probe, pp, a, b); };
  auto ea = [&](const Vec& xx) { return total_error_at(probe, p, xx, b); };
  const Vec np = numeric_grad(ep, p);
  const Vec na = numeric_grad(ea, a);
  GradcheckReport rep;
  auto add = [&](const std::string& which, std::size_t i, double an, double nu) {
    const double denom = std::max({1.0, std::fabs(an), std::fabs(nu)});
    rep.entries.push_back({which, i, an, nu, std::fabs(an - nu) / denom});
  };
  for (std::size_t i = 0; i < ap.size(); ++i) add("p", i, ap[i], np[i]);
  for (std::size_t i = 0; i < aa.size(); ++i) add("a", i, aa[i], na[i]);
  return rep;
}

bool LearnerLawReport::stability_pass() const {
  for (const auto& e : entries)
    if (e.law == "Stability" && !e.ok) return false;
  return true;
}

bool LearnerLawReport::putget_pass() const {
  for (const auto& e : entries)
    if (e.law == "Putget" && !e.ok) return false;
  return true;
}

static std::string vec_str(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

LearnerLawReport check_learner_laws(const LearnerLens& ll,
                                    const std::vector<std::array<Vec, 3>>& probes) {
  LearnerLawReport rep;
  for (const auto& [p, a, b] : probes) {
    const Vec y = ll.fn.eval(p, a);
    LearnerPutResult r = learner_put(ll, p, a, b);
    // Amended Putget: the amended target equals I(p', a') exactly.
    const Vec expected = ll.fn.eval(r.p2, r.a2);
    rep.entries.push_back({"Putget", vec_str(p) + vec_str(a) + vec_str(b),
                           r.amendment.to == expected && r.amendment.from == b, ""});
    if (y == b) {
      // Consistent probe: all three propagated updates must be identities.
      const bool stable = r.p2 == p && r.a2 == a && r.amendment.to == r.amendment.from;
      rep.entries.push_back({"Stability", vec_str(p) + vec_str(a) + vec_str(b), stable,
                             stable ? "" : "non-identity update on an identity delta"});
    }
  }
  return rep;
}

ParamFn affine_network(const std::vector<AffineLayerSpec>& layers) {
  if (layers.empty()) throw error(errc::parse_error, "network needs at least one layer");
  for (std::size_t i = 0; i + 1 < layers.size(); ++i)
    if (layers[i].out != layers[i + 1].in)
      throw error(errc::dim_mismatch, "layer dimension mismatch in network spec");

  ParamFn fn;
  fn.m = layers.front().in;
  fn.n = layers.back().out;
  for (const auto& l : layers) fn.k += l.out * l.in + (l.has_bias ? l.out : 0);

  auto specs = layers;
  auto forward = [specs](const Vec& p, const Vec& a) {
    Vec x = a;
    std::size_t off = 0;
    for (const auto& l : specs) {
      Vec y(l.out, 0.0);
      for (std::size_t r = 0; r < l.out; ++r)
        for (std::size_t c = 0; c < l.in; ++c) y[r] += p[off + r * l.in + c] * x[c];
      off += l.out * l.in;
      if (l.has_bias) {
        for (std::size_t r = 0; r < l.out; ++r) y[r] += p[off + r];
        off += l.out;
      }
      x = std::move(y);
    }
    return x;
  };
  fn.eval = forward;

  // Reverse accumulation through the affine chain.
  auto backward = [specs](const Vec& p, const Vec& a, const Vec& dy) {
    std::vector<Vec> acts{a};
    std::size_t off = 0;
    for (const auto& l : specs) {
      const Vec& x = acts.back();
      Vec y(l.out, 0.0);
      for (std::size_t r = 0; r < l.out; ++r)
        for (std::size_t c = 0; c < l.in; ++c) y[r] += p[off + r * l.in + c] * x[c];
      off += l.out * l.in;
      if (l.has_bias) {
        for (std::size_t r = 0; r < l.out; ++r) y[r] += p[off + r];
        off += l.out;
      }
      acts.push_back(std::move(y));
    }
    Vec gp(p.size(), 0.0);
    Vec grad = dy;
    std::size_t tail = p.size();
    for (std::size_t li = specs.size(); li-- > 0;) {
      const auto& l = specs[li];
      if (l.has_bias) {
        tail -= l.out;
        for (std::size_t r = 0; r < l.out; ++r) gp[tail + r] = grad[r];
      }
      tail -= l.out * l.in;
      const Vec& x = acts[li];
      Vec gx(l.in, 0.0);
      for (std::size_t r = 0; r < l.out; ++r)
        for (std::size_t c = 0; c < l.in; ++c) {
          gp[tail + r * l.in + c] = grad[r] * x[c];
          gx[c] += p[tail + r * l.in + c] * grad[r];
        }
      grad = std::move(gx);
    }
    return std::pair<Vec, Vec>{gp, grad};
  };
  fn.vjp_p = [backward](const Vec& p, const Vec& a, const Vec& dy) {
    return backward(p, a, dy).first;
  };
  fn.vjp_a = [backward](const Vec& p, const Vec& a, const Vec& dy) {
    return backward(p, a, dy).second;
  };
  return fn;
}

}  // namespace lenslab
