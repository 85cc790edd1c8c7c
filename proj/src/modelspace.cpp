#include "lenslab/modelspace.hpp"

#include <algorithm>

namespace lenslab {

DeptValue DeptValue::unknown(std::set<std::string> c) {
  if (c.empty()) throw error(errc::domain_error, "a labelled null needs a nonempty constraint");
  return {false, "", std::move(c)};
}

std::string DeptValue::render() const {
  if (known) return name;
  std::string s = "?{";
  bool first = true;
  for (const auto& d : constraint) {
    if (!first) s += ",";
    s += d;
    first = false;
  }
  return s + "}";
}

static std::string schema_tag(Schema s) {
  switch (s) {
    case Schema::A: return "A";
    case Schema::B: return "B";
    case Schema::C: return "C";
  }
  return "?";
}

static std::string render_row(const RelRow& r) {
  std::string s = r.name;
  s += ",";
  s += r.expr ? std::to_string(*r.expr) : "null";
  s += ",";
  s += r.dep ? r.dep->render() : "-";
  return s;
}

std::string RelModel::canonical_id() const {
  std::string s = schema_tag(schema) + "{";
  bool first = true;
  for (const auto& [oid, row] : rows) {
    if (!first) s += ";";
    s += oid + "=" + render_row(row);
    first = false;
  }
  return s + "}";
}

std::string ModelDelta::canonical_id() const {
  std::string s = "[" + from.canonical_id() + " => " + to.canonical_id() + " keep ";
  bool first = true;
  for (const auto& [o, m] : kept) {
    if (!first) s += ",";
    s += o + ">" + m;
    first = false;
  }
  return s + "]";
}

ModelDelta identity_delta(const RelModel& m) {
  ModelDelta d{m, m, {}};
  for (const auto& [oid, row] : m.rows) d.kept.emplace(oid, oid);
  return d;
}

void validate_delta(const ModelDelta& d) {
  if (d.from.schema != d.to.schema)
    throw error(errc::schema_mismatch, "delta endpoints live over different schemas");
  std::set<std::string> image;
  for (const auto& [o, m] : d.kept) {
    if (!d.from.rows.count(o))
      throw error(errc::dangling_reference, "kept map references missing source row " + o);
    if (!d.to.rows.count(m))
      throw error(errc::dangling_reference, "kept map references missing target row " + m);
    if (!image.insert(m).second)
      throw error(errc::dangling_reference, "kept map is not injective at " + m);
  }
}

ModelDelta delta_compose(const ModelDelta& d1, const ModelDelta& d2) {
  if (d1.to != d2.from)
    throw error(errc::not_composable, "delta endpoints do not match");
  ModelDelta d{d1.from, d2.to, {}};
  for (const auto& [o, m] : d1.kept) {
    auto it = d2.kept.find(m);
    if (it != d2.kept.end()) d.kept.emplace(o, it->second);
  }
  return d;
}

std::string Threshold::render() const { return any ? "any" : "gt" + std::to_string(bound); }

static const std::set<std::string> kDeptUniverse{"Testing", "ML", "HR"};

ViewDef ViewDef::it_view() {
  return {Schema::A, Schema::B, {"Testing", "ML"}, false, {}, kDeptUniverse};
}

ViewDef ViewDef::ml_view() {
  // Schema B's department domain is the IT set, so the trans complement at
  // this level is {Testing}, not {Testing, HR}.
  return {Schema::B, Schema::C, {"ML"}, false, {}, {"Testing", "ML"}};
}

ViewDef ViewDef::long_view() {
  return {Schema::A, Schema::C, {"ML"}, false, {}, kDeptUniverse};
}

ViewDef ViewDef::it_view_thresholded(std::vector<Threshold> thetas) {
  return {Schema::A, Schema::B, {"Testing", "ML"}, true, std::move(thetas), kDeptUniverse};
}

static bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

static std::set<std::string> intersect(const std::set<std::string>& a,
                                       const std::set<std::string>& b) {
  std::set<std::string> r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.begin()));
  return r;
}

bool row_in_view(const ViewDef& vd, const Threshold& theta, const RelRow& row) {
  if (!row.dep) return false;
  // Certain membership only: an ambiguous labelled null keeps the row out.
  const bool dep_ok = row.dep->known ? vd.dept_filter.count(row.dep->name) > 0
                                     : subset(row.dep->constraint, vd.dept_filter);
  if (!dep_ok) return false;
  if (vd.thresholded && !theta.any) return row.expr && *row.expr > theta.bound;
  return true;
}

// Certainly outside the view: no admissible department matches the filter.
static bool row_out_of_view(const ViewDef& vd, const RelRow& row) {
  if (!row.dep) return true;
  return row.dep->known ? vd.dept_filter.count(row.dep->name) == 0
                        : intersect(row.dep->constraint, vd.dept_filter).empty();
}

static RelRow project_row(const ViewDef& vd, const RelRow& row) {
  RelRow r;
  r.name = row.name;
  if (vd.target == Schema::B) r.dep = row.dep;
  return r;
}

RelModel view_model(const ViewDef& vd, const Threshold& theta, const RelModel& m) {
  if (m.schema != vd.source)
    throw error(errc::schema_mismatch, "model schema does not match the view source");
  RelModel out;
  out.schema = vd.target;
  for (const auto& [oid, row] : m.rows)
    if (row_in_view(vd, theta, row)) out.rows.emplace(oid, project_row(vd, row));
  return out;
}

ModelDelta view_delta(const ViewDef& vd, const Threshold& theta_from, const Threshold& theta_to,
                      const ModelDelta& d) {
  ModelDelta out{view_model(vd, theta_from, d.from), view_model(vd, theta_to, d.to), {}};
  for (const auto& [o, m] : d.kept)
    if (out.from.rows.count(o) && out.to.rows.count(m)) out.kept.emplace(o, m);
  return out;
}

UpdatePolicy parse_policy(const std::string& name) {
  if (name == "quit") return UpdatePolicy::quit;
  if (name == "trans") return UpdatePolicy::trans;
  if (name == "param") return UpdatePolicy::param;
  throw error(errc::parse_error, "unknown policy '" + name + "'");
}

std::string policy_name(UpdatePolicy p) {
  switch (p) {
    case UpdatePolicy::quit: return "quit";
    case UpdatePolicy::trans: return "trans";
    case UpdatePolicy::param: return "param";
  }
  return "?";
}

// Writes a view-level department value back through the filter; intersecting
// with the filter keeps the row certainly visible whenever possible.
static DeptValue writeback_dep(const DeptValue& v, const std::set<std::string>& filter) {
  if (v.known) return v;
  auto cut = intersect(v.constraint, filter);
  return cut.empty() ? v : DeptValue::unknown(cut);
}

static ModelDelta make_amendment(const ViewDef& vd, const Threshold& theta,
                                 const RelModel& view_target, const RelModel& src2) {
  ModelDelta am{view_target, view_model(vd, theta, src2), {}};
  for (const auto& [oid, row] : am.to.rows)
    if (am.from.rows.count(oid)) am.kept.emplace(oid, oid);
  return am;
}

static PolicyPutResult param_put(const ViewDef& vd, const Threshold& theta, const RelModel& src,
                                 const ModelDelta& vdelta) {
  // Only pure deletions can be explained by raising the threshold.
  std::set<std::string> image;
  for (const auto& [o, m] : vdelta.kept) {
    if (o != m || !(vdelta.from.rows.at(o) == vdelta.to.rows.at(m)))
      throw error(errc::policy_inapplicable,
                  "threshold policy cannot explain renamed or edited rows");
    image.insert(m);
  }
  for (const auto& [oid, row] : vdelta.to.rows)
    if (!image.count(oid))
      throw error(errc::policy_inapplicable, "threshold policy cannot explain insertions");
  // Prefer keeping the current parameter (identity updates stay put), then
  // search the admissible list in order.
  if (view_model(vd, theta, src) == vdelta.to)
    return {theta, identity_delta(src), identity_delta(vdelta.to)};
  for (const auto& t2 : vd.thresholds) {
    if (view_model(vd, t2, src) == vdelta.to)
      return {t2, identity_delta(src), identity_delta(vdelta.to)};
  }
  throw error(errc::policy_inapplicable, "no admissible threshold reproduces the updated view");
}

PolicyPutResult policy_put(UpdatePolicy policy, const ViewDef& vd, const Threshold& theta,
                           const RelModel& src, const ModelDelta& vdelta) {
  const RelModel V = view_model(vd, theta, src);
  if (vdelta.from != V)
    throw error(errc::domain_error, "view update is not anchored at the view of the source");
  validate_delta(vdelta);
  if (policy == UpdatePolicy::param) return param_put(vd, theta, src, vdelta);

  RelModel src2;
  src2.schema = src.schema;
  ModelDelta u{src, {}, {}};
  std::set<std::string> inserted_image;
  for (const auto& [oid, row] : src.rows) {
    if (!V.rows.count(oid)) {
      // Invisible (including ambiguous) rows ride along unchanged.
      src2.rows.emplace(oid, row);
      u.kept.emplace(oid, oid);
      continue;
    }
    auto it = vdelta.kept.find(oid);
    if (it != vdelta.kept.end()) {
      const RelRow& vrow = vdelta.to.rows.at(it->second);
      RelRow nrow = row;
      nrow.name = vrow.name;
      if (vd.target == Schema::B && vrow.dep) nrow.dep = writeback_dep(*vrow.dep, vd.dept_filter);
      src2.rows.emplace(it->second, nrow);
      u.kept.emplace(oid, it->second);
      inserted_image.insert(it->second);
    } else if (policy == UpdatePolicy::trans) {
      RelRow nrow = row;
      nrow.dep = DeptValue::unknown([&] {
        std::set<std::string> rest;
        for (const auto& d : vd.dept_universe)
          if (!vd.dept_filter.count(d)) rest.insert(d);
        return rest;
      }());
      if (src.schema == Schema::A) nrow.expr.reset();
      src2.rows.emplace(oid, nrow);
      u.kept.emplace(oid, oid);
    }
    // quit: the row is dropped from the source.
  }
  for (const auto& [oid, vrow] : vdelta.to.rows) {
    if (inserted_image.count(oid)) continue;
    RelRow nrow;
    nrow.name = vrow.name;
    nrow.dep = vrow.dep ? writeback_dep(*vrow.dep, vd.dept_filter)
                        : DeptValue::unknown(vd.dept_filter);
    src2.rows.emplace(oid, nrow);
  }
  u.to = src2;
  return {theta, u, make_amendment(vd, theta, vdelta.to, src2)};
}

std::vector<Threshold> default_thresholds() {
  return {Threshold::any_exp(), Threshold::at_least(3), Threshold::at_least(5),
          Threshold::at_least(9)};
}

RelModel fixture_model_a() {
  RelModel m;
  m.schema = Schema::A;
  m.rows["#A"] = {"Ann", 10, DeptValue::of("HR")};
  m.rows["#J"] = {"John", 10, DeptValue::of("Testing")};
  m.rows["#M"] = {"Mary", 3, DeptValue::of("ML")};
  return m;
}

Scenario scenario_w() {
  Scenario s;
  s.source = fixture_model_a();
  const RelModel c = view_model(ViewDef::long_view(), Threshold::any_exp(), s.source);
  RelModel c2;
  c2.schema = Schema::C;
  c2.rows["#M2"] = {"Mary", std::nullopt, std::nullopt};
  s.view_update = {c, c2, {}};  // Mary leaves and a fresh Mary row appears
  s.policy = UpdatePolicy::quit;
  return s;
}

ChainPropagation propagate_composed(UpdatePolicy policy, const RelModel& a, const ModelDelta& w) {
  const Threshold any = Threshold::any_exp();
  const RelModel b = view_model(ViewDef::it_view(), any, a);
  PolicyPutResult down = policy_put(policy, ViewDef::ml_view(), any, b, w);
  PolicyPutResult up = policy_put(policy, ViewDef::it_view(), any, a, down.source_delta);
  return {down.source_delta, up.source_delta};
}

// fine refines coarse: equal names, nulls may be filled, constraints may shrink.
static bool row_refines(const RelRow& coarse, const RelRow& fine) {
  if (coarse.name != fine.name) return false;
  if (coarse.expr && (!fine.expr || *fine.expr != *coarse.expr)) return false;
  if (coarse.dep.has_value() != fine.dep.has_value()) return false;
  if (!coarse.dep) return true;
  if (coarse.dep->known) return *fine.dep == *coarse.dep;
  if (fine.dep->known) return coarse.dep->constraint.count(fine.dep->name) > 0;
  return subset(fine.dep->constraint, coarse.dep->constraint);
}

PolicyComparison compare_policies(const Scenario& s) {
  const Threshold any = Threshold::any_exp();
  PolicyComparison out;
  out.u_long =
      policy_put(s.policy, ViewDef::long_view(), any, s.source, s.view_update).source_delta;
  out.u_composed = propagate_composed(s.policy, s.source, s.view_update).a_delta;
  out.equal = out.u_long == out.u_composed;
  if (out.equal) return out;

  ModelDelta delta{out.u_long.to, out.u_composed.to, {}};
  for (const auto& [oid, row] : delta.from.rows) {
    auto it = delta.to.rows.find(oid);
    if (it == delta.to.rows.end() || !row_refines(row, it->second))
      throw error(errc::no_comparison_delta,
                  "composed result does not refine the long result at row " + oid);
    delta.kept.emplace(oid, oid);
  }
  if (delta.to.rows.size() != delta.from.rows.size() ||
      !(delta_compose(out.u_long, delta) == out.u_composed))
    throw error(errc::no_comparison_delta,
                "no refinement delta reconciles the two propagated updates");
  out.comparison = delta;
  return out;
}

std::vector<Scenario> generate_scenarios(UpdatePolicy policy, std::size_t count) {
  std::vector<Scenario> out;
  const Threshold any = Threshold::any_exp();
  for (std::size_t i = 0; i < count; ++i) {
    Scenario s;
    s.policy = policy;
    s.source.schema = Schema::A;
    s.source.rows["#A"] = {"Ann", 10, DeptValue::of("HR")};
    s.source.rows["#B"] = {"Bob", static_cast<int>(i % 9), DeptValue::of("ML")};
    s.source.rows["#J"] = {"John", static_cast<int>(5 + i), DeptValue::of("Testing")};
    s.source.rows["#M"] = {"Mary", 3, DeptValue::of("ML")};
    const RelModel c = view_model(ViewDef::long_view(), any, s.source);
    RelModel c2;
    c2.schema = Schema::C;
    std::map<std::string, std::string> kept;
    switch (i % 3) {
      case 0:  // Mary leaves, a new hire appears
        c2.rows["#B"] = c.rows.at("#B");
        c2.rows["#N" + std::to_string(i)] = {"Hire" + std::to_string(i), std::nullopt,
                                             std::nullopt};
        kept["#B"] = "#B";
        break;
      case 1:  // Bob leaves
        c2.rows["#M"] = c.rows.at("#M");
        kept["#M"] = "#M";
        break;
      default:  // Mary gets renamed
        c2.rows["#B"] = c.rows.at("#B");
        c2.rows["#M"] = {"Maria", std::nullopt, std::nullopt};
        kept["#B"] = "#B";
        kept["#M"] = "#M";
        break;
    }
    s.view_update = {c, c2, kept};
    out.push_back(std::move(s));
  }
  return out;
}

// --- Bridge into the generic lens machinery -------------------------------

struct ModelUniverse::Space {
  std::string name;
  Schema schema = Schema::A;
  std::map<std::string, RelModel> models;
  std::map<std::string, ModelDelta> deltas;
  std::shared_ptr<const FinCat> cat;

  bool intern(const RelModel& m) { return models.emplace(m.canonical_id(), m).second; }
  bool intern(const ModelDelta& d) {
    bool fresh = intern(d.from);
    fresh |= intern(d.to);
    fresh |= deltas.emplace(d.canonical_id(), d).second;
    return fresh;
  }
  const ModelDelta& lookup(const ModelDelta& d) const {
    auto it = deltas.find(d.canonical_id());
    if (it == deltas.end())
      throw error(errc::unknown_arrow, "delta outside the generated universe: " + d.canonical_id());
    return it->second;
  }
};

const RelModel& ModelUniverse::model(const std::string& object_id) const {
  for (const auto& sp : {a_, b_, c_}) {
    auto it = sp->models.find(object_id);
    if (it != sp->models.end()) return it->second;
  }
  throw error(errc::unknown_object, "no such model in the universe: " + object_id);
}

const ModelDelta& ModelUniverse::delta(const std::string& arrow_id) const {
  for (const auto& sp : {a_, b_, c_}) {
    auto it = sp->deltas.find(arrow_id);
    if (it != sp->deltas.end()) return it->second;
  }
  throw error(errc::unknown_arrow, "no such delta in the universe: " + arrow_id);
}

static std::shared_ptr<const FinCat> freeze_space(ModelUniverse::Space& sp) {
  FinCat c;
  c.name = sp.name;
  for (const auto& [id, m] : sp.models) {
    c.objects.push_back(id);
    c.identities[id] = identity_delta(m).canonical_id();
  }
  for (const auto& [id, d] : sp.deltas)
    c.arrows.push_back({id, d.from.canonical_id(), d.to.canonical_id()});
  for (const auto& [id1, d1] : sp.deltas)
    for (const auto& [id2, d2] : sp.deltas)
      if (d1.to == d2.from) c.table[{id1, id2}] = delta_compose(d1, d2).canonical_id();
  auto out = std::make_shared<FinCat>(validate_category(std::move(c)));
  sp.cat = out;
  return out;
}

ParamFunctor ModelUniverse::make_get(const ViewDef& vd, std::shared_ptr<Space> src,
                                     std::shared_ptr<Space> dst, bool thresholded) const {
  ParamFunctor pf;
  pf.source = src->cat;
  pf.target = dst->cat;
  std::vector<Threshold> params = thresholded ? thetas_ : std::vector<Threshold>{};
  if (thresholded) {
    pf.params = params_theta;
  } else {
    pf.params = params_terminal;
    params = {Threshold::any_exp()};
  }
  auto functor_at = [&](const Threshold& t) {
    Functor f;
    f.source = src->cat;
    f.target = dst->cat;
    for (const auto& [id, m] : src->models) f.obj_map[id] = view_model(vd, t, m).canonical_id();
    for (const auto& [id, d] : src->deltas) f.arr_map[id] = view_delta(vd, t, t, d).canonical_id();
    return f;
  };
  auto trans_along = [&](const Threshold& t1, const Threshold& t2) {
    NatTrans n;
    n.from = pf.on_obj.at(t1.render());
    n.to = pf.on_obj.at(t2.render());
    for (const auto& [id, m] : src->models) {
      ModelDelta step{view_model(vd, t1, m), view_model(vd, t2, m), {}};
      for (const auto& [oid, row] : step.to.rows)
        if (step.from.rows.count(oid)) step.kept.emplace(oid, oid);
      n.components[id] = step.canonical_id();
    }
    return n;
  };
  if (!thresholded) {
    pf.on_obj.emplace("*", functor_at(Threshold::any_exp()));
    pf.on_arr.emplace("id_*", identity_nat_trans(pf.on_obj.at("*")));
    return pf;
  }
  for (const auto& t : params) pf.on_obj.emplace(t.render(), functor_at(t));
  for (const auto& t1 : params)
    for (const auto& t2 : params)
      pf.on_arr.emplace("<" + t1.render() + ">" + t2.render(), trans_along(t1, t2));
  return pf;
}

static ViewDef view_for(const ModelUniverse::Space& src, const ModelUniverse::Space& dst) {
  if (src.schema == Schema::A && dst.schema == Schema::B) return ViewDef::it_view();
  if (src.schema == Schema::B && dst.schema == Schema::C) return ViewDef::ml_view();
  if (src.schema == Schema::A && dst.schema == Schema::C) return ViewDef::long_view();
  throw error(errc::schema_mismatch, "no view connects these model spaces");
}

static AlaLens policy_lens_for(UpdatePolicy pol, ParamFunctor get, const ViewDef& vd,
                               std::shared_ptr<ModelUniverse::Space> src,
                               std::shared_ptr<ModelUniverse::Space> dst,
                               std::map<std::string, Threshold> theta_by_id) {
  auto params = get.params;
  return make_lens(std::move(get), [pol, vd, src, dst, params, theta_by_id](
                                       const std::string& p, const std::string& S,
                                       const std::string& v) {
    const RelModel& M = src->models.at(S);
    auto dit = dst->deltas.find(v);
    if (dit == dst->deltas.end()) throw error(errc::unknown_arrow, "unknown view update " + v);
    const Threshold th =
        theta_by_id.empty() ? Threshold::any_exp() : theta_by_id.at(p);
    PolicyPutResult r = policy_put(pol, vd, th, M, dit->second);
    const std::string e = theta_by_id.empty() ? params->identity(p)
                                              : "<" + p + ">" + r.theta2.render();
    return PutResult{e, src->lookup(r.source_delta).canonical_id(),
                     dst->lookup(r.amendment).canonical_id()};
  });
}

AlaLens ModelUniverse::make_policy_lens(UpdatePolicy pol, const ViewDef& vd,
                                        std::shared_ptr<Space> src, std::shared_ptr<Space> dst,
                                        bool thresholded) const {
  std::map<std::string, Threshold> theta_by_id;
  if (thresholded)
    for (const auto& t : thetas_) theta_by_id.emplace(t.render(), t);
  return policy_lens_for(pol, make_get(vd, src, dst, thresholded), vd, src, dst,
                         std::move(theta_by_id));
}

AlaLens ModelUniverse::lens1(UpdatePolicy policy) const {
  return make_policy_lens(policy, ViewDef::it_view(), a_, b_, false);
}

AlaLens ModelUniverse::lens2(UpdatePolicy policy) const {
  return make_policy_lens(policy, ViewDef::ml_view(), b_, c_, false);
}

AlaLens ModelUniverse::long_lens(UpdatePolicy policy) const {
  return policy_of(policy)(pfun_compose(get1(), get2()));
}

AlaLens ModelUniverse::param_lens() const {
  if (thetas_.empty())
    throw error(errc::policy_undefined, "universe was built without thresholds");
  return make_policy_lens(UpdatePolicy::param, ViewDef::it_view_thresholded(thetas_), a_, b_, true);
}

ParamFunctor ModelUniverse::get1() const { return make_get(ViewDef::it_view(), a_, b_, false); }
ParamFunctor ModelUniverse::get2() const { return make_get(ViewDef::ml_view(), b_, c_, false); }

Policy ModelUniverse::policy_of(UpdatePolicy policy) const {
  std::map<std::string, std::shared_ptr<Space>> by_name{
      {a_->name, a_}, {b_->name, b_}, {c_->name, c_}};
  return [policy, by_name](const ParamFunctor& get) {
    auto src = by_name.at(get.source->name);
    auto dst = by_name.at(get.target->name);
    return policy_lens_for(policy, get, view_for(*src, *dst), src, dst, {});
  };
}

ModelUniverse build_universe(const std::vector<Scenario>& scenarios,
                             const std::vector<Threshold>& thetas) {
  ModelUniverse u;
  u.a_ = std::make_shared<ModelUniverse::Space>();
  u.b_ = std::make_shared<ModelUniverse::Space>();
  u.c_ = std::make_shared<ModelUniverse::Space>();
  u.a_->name = "models-A";
  u.a_->schema = Schema::A;
  u.b_->name = "models-B";
  u.b_->schema = Schema::B;
  u.c_->name = "models-C";
  u.c_->schema = Schema::C;
  u.thetas_ = thetas;

  const Threshold any = Threshold::any_exp();
  std::set<UpdatePolicy> policies;
  for (const auto& s : scenarios) {
    u.a_->intern(s.source);
    // quit/trans scenarios carry a C-level update, param scenarios a B-level one.
    (s.view_update.from.schema == Schema::B ? u.b_ : u.c_)->intern(s.view_update);
    policies.insert(s.policy);
  }

  const SizeLimits limits;
  auto guard = [&] {
    for (const auto& sp : {u.a_, u.b_, u.c_})
      if (sp->models.size() > limits.max_objects || sp->deltas.size() > limits.max_arrows)
        throw error(errc::size_limit_exceeded, "model universe closure exceeded size limits");
  };

  bool changed = true;
  while (changed) {
    changed = false;
    guard();
    // Identities and view images of every model.
    for (const auto& [id, m] : std::map(u.a_->models)) {
      changed |= u.a_->intern(identity_delta(m));
      changed |= u.b_->intern(view_model(ViewDef::it_view(), any, m));
      for (const auto& t : thetas)
        changed |= u.b_->intern(view_model(ViewDef::it_view_thresholded(thetas), t, m));
    }
    for (const auto& [id, m] : std::map(u.b_->models)) {
      changed |= u.b_->intern(identity_delta(m));
      changed |= u.c_->intern(view_model(ViewDef::ml_view(), any, m));
    }
    for (const auto& [id, m] : std::map(u.c_->models)) changed |= u.c_->intern(identity_delta(m));
    // View images of every delta, plus threshold transitions.
    for (const auto& [id, d] : std::map(u.a_->deltas)) {
      changed |= u.b_->intern(view_delta(ViewDef::it_view(), any, any, d));
      const ViewDef thv = ViewDef::it_view_thresholded(thetas);
      for (const auto& t : thetas) changed |= u.b_->intern(view_delta(thv, t, t, d));
    }
    if (!thetas.empty()) {
      const ViewDef thv = ViewDef::it_view_thresholded(thetas);
      for (const auto& [id, m] : std::map(u.a_->models))
        for (const auto& t1 : thetas)
          for (const auto& t2 : thetas) {
            ModelDelta step{view_model(thv, t1, m), view_model(thv, t2, m), {}};
            for (const auto& [oid, row] : step.to.rows)
              if (step.from.rows.count(oid)) step.kept.emplace(oid, oid);
            changed |= u.b_->intern(step);
          }
    }
    for (const auto& [id, d] : std::map(u.b_->deltas))
      changed |= u.c_->intern(view_delta(ViewDef::ml_view(), any, any, d));
    // Composition closure within each space.
    for (const auto& sp : {u.a_, u.b_, u.c_})
      for (const auto& [i1, d1] : std::map(sp->deltas))
        for (const auto& [i2, d2] : std::map(sp->deltas))
          if (d1.to == d2.from) changed |= sp->intern(delta_compose(d1, d2));
    // Policy puts over every admissible (model, view update) pair.
    auto close_puts = [&](const ViewDef& vd, std::shared_ptr<ModelUniverse::Space> src,
                          std::shared_ptr<ModelUniverse::Space> dst) {
      for (const auto& [mid, m] : std::map(src->models)) {
        const std::string vid = view_model(vd, any, m).canonical_id();
        for (const auto& [did, d] : std::map(dst->deltas)) {
          if (d.from.canonical_id() != vid) continue;
          for (const auto pol : policies) {
            // The threshold policy only ever returns identity deltas, which
            // the identity/threshold closures intern already.
            if (pol == UpdatePolicy::param) continue;
            PolicyPutResult r = policy_put(pol, vd, any, m, d);
            changed |= src->intern(r.source_delta);
            changed |= dst->intern(r.amendment);
          }
        }
      }
    };
    close_puts(ViewDef::long_view(), u.a_, u.c_);
    close_puts(ViewDef::ml_view(), u.b_, u.c_);
    close_puts(ViewDef::it_view(), u.a_, u.b_);
  }
  guard();

  u.cat_a = freeze_space(*u.a_);
  u.cat_b = freeze_space(*u.b_);
  u.cat_c = freeze_space(*u.c_);
  u.params_terminal = std::make_shared<FinCat>(terminal_category());
  if (!thetas.empty()) {
    std::vector<std::string> names;
    for (const auto& t : thetas) names.push_back(t.render());
    u.params_theta = std::make_shared<FinCat>(codiscrete_category(names, "thresholds"));
  }
  return u;
}

}  // namespace lenslab
