#include "lenslab/json_io.hpp"

#include <fstream>

namespace lenslab {

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw error(errc::parse_error, path.string() + ": " + e.what());
  }
}

static void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                                const std::string& what) {
  if (!j.is_object()) throw error(errc::parse_error, what + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw error(errc::parse_error, what + ": unknown key '" + k + "'");
}

static const json& require(const json& j, const std::string& key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw error(errc::parse_error, what + ": missing key '" + key + "'");
  return *it;
}

FinCat category_from_json(const json& j) {
  reject_unknown_keys(j, {"name", "objects", "arrows", "identities", "compose"}, "category");
  FinCat c;
  c.name = j.value("name", "");
  for (const auto& o : require(j, "objects", "category")) c.objects.push_back(o.get<std::string>());
  for (const auto& a : require(j, "arrows", "category")) {
    reject_unknown_keys(a, {"id", "src", "dst"}, "arrow");
    c.arrows.push_back({require(a, "id", "arrow").get<std::string>(),
                        require(a, "src", "arrow").get<std::string>(),
                        require(a, "dst", "arrow").get<std::string>()});
  }
  for (const auto& [obj, arr] : require(j, "identities", "category").items())
    c.identities[obj] = arr.get<std::string>();
  for (const auto& t : require(j, "compose", "category")) {
    if (!t.is_array() || t.size() != 3)
      throw error(errc::parse_error, "compose entries must be [first, second, result] triples");
    c.table[{t[0].get<std::string>(), t[1].get<std::string>()}] = t[2].get<std::string>();
  }
  return validate_category(std::move(c));
}

json category_to_json(const FinCat& c) {
  json j;
  if (!c.name.empty()) j["name"] = c.name;
  j["objects"] = c.objects;
  j["arrows"] = json::array();
  for (const auto& a : c.arrows) j["arrows"].push_back({{"id", a.id}, {"src", a.src}, {"dst", a.dst}});
  j["identities"] = c.identities;
  j["compose"] = json::array();
  for (const auto& [fg, h] : c.table) j["compose"].push_back({fg.first, fg.second, h});
  return j;
}

static std::shared_ptr<const FinCat> category_ref(const json& j,
                                                  const std::filesystem::path& base) {
  if (j.is_string())
    return std::make_shared<FinCat>(category_from_json(load_json(base / j.get<std::string>())));
  return std::make_shared<FinCat>(category_from_json(j));
}

Functor functor_from_json(const json& j, std::shared_ptr<const FinCat> source,
                          std::shared_ptr<const FinCat> target) {
  reject_unknown_keys(j, {"obj_map", "arr_map"}, "functor");
  Functor f;
  f.source = std::move(source);
  f.target = std::move(target);
  for (const auto& [k, v] : require(j, "obj_map", "functor").items())
    f.obj_map[k] = v.get<std::string>();
  for (const auto& [k, v] : require(j, "arr_map", "functor").items())
    f.arr_map[k] = v.get<std::string>();
  auto issues = validate_functor(f);
  if (!issues.empty()) throw error(errc::parse_error, "invalid functor: " + issues.front());
  return f;
}

ParamFunctor pfunctor_from_json(const json& j, const std::filesystem::path& base) {
  reject_unknown_keys(j, {"params", "source", "target", "on_obj", "on_arr"}, "p-functor");
  ParamFunctor pf;
  pf.params = category_ref(require(j, "params", "p-functor"), base);
  pf.source = category_ref(require(j, "source", "p-functor"), base);
  pf.target = category_ref(require(j, "target", "p-functor"), base);
  for (const auto& [p, fj] : require(j, "on_obj", "p-functor").items())
    pf.on_obj.emplace(p, functor_from_json(fj, pf.source, pf.target));
  for (const auto& [e, nj] : require(j, "on_arr", "p-functor").items()) {
    reject_unknown_keys(nj, {"components"}, "p-functor transformation");
    const Arrow& arr = pf.params->arrow(e);
    NatTrans n;
    n.from = pf.at(arr.src);
    n.to = pf.at(arr.dst);
    for (const auto& [s, a] : require(nj, "components", "transformation").items())
      n.components[s] = a.get<std::string>();
    pf.on_arr.emplace(e, std::move(n));
  }
  auto issues = validate_pfunctor(pf);
  if (!issues.empty()) throw error(errc::parse_error, "invalid p-functor: " + issues.front());
  return pf;
}

json pfunctor_to_json(const ParamFunctor& pf) {
  json j;
  j["params"] = category_to_json(*pf.params);
  j["source"] = category_to_json(*pf.source);
  j["target"] = category_to_json(*pf.target);
  j["on_obj"] = json::object();
  for (const auto& [p, f] : pf.on_obj)
    j["on_obj"][p] = {{"obj_map", f.obj_map}, {"arr_map", f.arr_map}};
  j["on_arr"] = json::object();
  for (const auto& [e, n] : pf.on_arr) j["on_arr"][e] = {{"components", n.components}};
  return j;
}

AlaLens lens_from_json(const json& j, const std::filesystem::path& base) {
  if (j.contains("compose")) {
    reject_unknown_keys(j, {"compose", "components"}, "lens descriptor");
    const std::string kind = require(j, "compose", "lens descriptor").get<std::string>();
    const json& comp = require(j, "components", "lens descriptor");
    if (!comp.is_array() || comp.size() != 2)
      throw error(errc::parse_error, "lens descriptor needs exactly two components");
    AlaLens a = lens_from_json(load_json(base / comp[0].get<std::string>()), base);
    AlaLens b = lens_from_json(load_json(base / comp[1].get<std::string>()), base);
    if (kind == "seq") return seq_compose(a, b);
    if (kind == "par") return par_compose(a, b);
    throw error(errc::parse_error, "unknown composition kind '" + kind + "'");
  }
  reject_unknown_keys(j, {"get", "put"}, "lens");
  const json& getj = require(j, "get", "lens");
  ParamFunctor get = getj.is_string()
                         ? pfunctor_from_json(load_json(base / getj.get<std::string>()), base)
                         : pfunctor_from_json(getj, base);
  std::vector<PutRow> rows;
  for (const auto& r : require(j, "put", "lens")) {
    reject_unknown_keys(r, {"p", "S", "v", "e", "u", "amendment"}, "put row");
    rows.push_back({require(r, "p", "put row").get<std::string>(),
                    require(r, "S", "put row").get<std::string>(),
                    require(r, "v", "put row").get<std::string>(),
                    {require(r, "e", "put row").get<std::string>(),
                     require(r, "u", "put row").get<std::string>(),
                     require(r, "amendment", "put row").get<std::string>()}});
  }
  return make_table_lens(std::move(get), rows);
}

json lens_to_json(const AlaLens& lens) {
  json j;
  j["get"] = pfunctor_to_json(lens.get);
  j["put"] = json::array();
  for (const auto& key : put_domain(lens)) {
    PutResult r = lens.put(key.p, key.S, key.v);
    j["put"].push_back({{"p", key.p},
                        {"S", key.S},
                        {"v", key.v},
                        {"e", r.e},
                        {"u", r.u},
                        {"amendment", r.amendment}});
  }
  return j;
}

static Schema schema_from_string(const std::string& s) {
  if (s == "A") return Schema::A;
  if (s == "B") return Schema::B;
  if (s == "C") return Schema::C;
  throw error(errc::parse_error, "unknown schema '" + s + "'");
}

static DeptValue dept_from_json(const json& j) {
  if (j.is_string()) return DeptValue::of(j.get<std::string>());
  reject_unknown_keys(j, {"unknown"}, "department value");
  std::set<std::string> c;
  for (const auto& d : require(j, "unknown", "department value")) c.insert(d.get<std::string>());
  return DeptValue::unknown(std::move(c));
}

static std::pair<std::string, RelRow> row_from_json(const json& j) {
  reject_unknown_keys(j, {"oid", "name", "expr", "dep"}, "row");
  RelRow r;
  r.name = require(j, "name", "row").get<std::string>();
  if (j.contains("expr") && !j["expr"].is_null()) r.expr = j["expr"].get<int>();
  if (j.contains("dep") && !j["dep"].is_null()) r.dep = dept_from_json(j["dep"]);
  return {require(j, "oid", "row").get<std::string>(), r};
}

static json dept_to_json(const DeptValue& d) {
  if (d.known) return d.name;
  return json{{"unknown", d.constraint}};
}

static json row_to_json(const std::string& oid, const RelRow& r) {
  json j{{"oid", oid}, {"name", r.name}};
  if (r.expr) j["expr"] = *r.expr;
  if (r.dep) j["dep"] = dept_to_json(*r.dep);
  return j;
}

json model_to_json(const RelModel& m) {
  json rows = json::array();
  for (const auto& [oid, r] : m.rows) rows.push_back(row_to_json(oid, r));
  const char* tag = m.schema == Schema::A ? "A" : m.schema == Schema::B ? "B" : "C";
  return json{{"schema", tag}, {"rows", rows}};
}

json delta_to_json(const ModelDelta& d) {
  json kept = json::array();
  for (const auto& [o, m] : d.kept) kept.push_back({o, m});
  return json{{"from", model_to_json(d.from)}, {"to", model_to_json(d.to)}, {"kept", kept}};
}

static RelModel model_from_json(const json& j, Schema fallback) {
  reject_unknown_keys(j, {"schema", "rows"}, "model");
  RelModel m;
  m.schema = j.contains("schema") ? schema_from_string(j["schema"].get<std::string>()) : fallback;
  for (const auto& rj : require(j, "rows", "model")) {
    auto [oid, row] = row_from_json(rj);
    if (!m.rows.emplace(oid, std::move(row)).second)
      throw error(errc::parse_error, "duplicate row oid " + oid);
  }
  return m;
}

Scenario scenario_from_json(const json& j) {
  reject_unknown_keys(j, {"source", "view_update", "policy"}, "scenario");
  Scenario s;
  s.source = model_from_json(require(j, "source", "scenario"), Schema::A);
  s.policy = parse_policy(require(j, "policy", "scenario").get<std::string>());

  const ViewDef vd = s.policy == UpdatePolicy::param
                         ? ViewDef::it_view_thresholded(default_thresholds())
                         : ViewDef::long_view();
  const RelModel view = view_model(vd, Threshold::any_exp(), s.source);
  const json& vu = require(j, "view_update", "scenario");
  reject_unknown_keys(vu, {"deleted", "inserted", "kept"}, "view update");
  std::map<std::string, RelRow> fresh;  // updated attribute images and insertions
  if (vu.contains("inserted"))
    for (const auto& rj : vu["inserted"]) {
      auto [oid, row] = row_from_json(rj);
      fresh.emplace(oid, std::move(row));
    }
  ModelDelta d{view, {}, {}};
  d.to.schema = vd.target;
  std::set<std::string> mentioned;
  if (vu.contains("kept"))
    for (const auto& pairj : vu["kept"]) {
      if (!pairj.is_array() || pairj.size() != 2)
        throw error(errc::parse_error, "kept entries must be [from, to] pairs");
      const std::string o = pairj[0].get<std::string>(), m = pairj[1].get<std::string>();
      if (!view.rows.count(o))
        throw error(errc::parse_error, "kept references " + o + " which is not in the view");
      mentioned.insert(o);
      auto it = fresh.find(m);
      d.to.rows[m] = it != fresh.end() ? it->second : view.rows.at(o);
      if (it != fresh.end()) fresh.erase(it);
      d.kept.emplace(o, m);
    }
  if (vu.contains("deleted"))
    for (const auto& oj : vu["deleted"]) {
      const std::string o = oj.get<std::string>();
      if (!view.rows.count(o) || mentioned.count(o))
        throw error(errc::parse_error, "deleted oid " + o + " is not an unclaimed view row");
      mentioned.insert(o);
    }
  for (const auto& [oid, row] : view.rows)
    if (!mentioned.count(oid))
      throw error(errc::parse_error, "view row " + oid + " is neither kept nor deleted");
  for (auto& [oid, row] : fresh) d.to.rows.emplace(oid, std::move(row));
  s.view_update = std::move(d);
  return s;
}

LearnerLens learner_from_json(const json& j, Vec* init) {
  reject_unknown_keys(j, {"layers", "eps", "eps_a", "err"}, "learner spec");
  std::vector<AffineLayerSpec> layers;
  for (const auto& lj : require(j, "layers", "learner spec")) {
    reject_unknown_keys(lj, {"kind", "in", "out", "w", "b"}, "layer");
    if (require(lj, "kind", "layer").get<std::string>() != "affine")
      throw error(errc::parse_error, "only affine layers are supported");
    AffineLayerSpec l;
    l.in = require(lj, "in", "layer").get<std::size_t>();
    l.out = require(lj, "out", "layer").get<std::size_t>();
    l.has_bias = lj.contains("b");
    const json& w = require(lj, "w", "layer");
    if (w.size() != l.out) throw error(errc::parse_error, "weight matrix has wrong row count");
    for (const auto& rowj : w) {
      if (rowj.size() != l.in) throw error(errc::parse_error, "weight row has wrong length");
      for (const auto& x : rowj) l.init.push_back(x.get<double>());
    }
    if (l.has_bias) {
      if (lj["b"].size() != l.out) throw error(errc::parse_error, "bias has wrong length");
      for (const auto& x : lj["b"]) l.init.push_back(x.get<double>());
    }
    layers.push_back(std::move(l));
  }
  LearnerLens ll;
  ll.fn = affine_network(layers);
  if (init) {
    init->clear();
    for (const auto& l : layers) init->insert(init->end(), l.init.begin(), l.init.end());
  }
  ll.eps = j.value("eps", 0.1);
  if (j.contains("eps_a")) ll.eps_a = j["eps_a"].get<double>();
  ll.err = error_function(j.value("err", "squared"));
  return ll;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw error(errc::parse_error, "expected a JSON array of numbers");
  Vec v;
  for (const auto& x : j) v.push_back(x.get<double>());
  return v;
}

FileKind detect_file_kind(const json& j) {
  if (!j.is_object()) throw error(errc::parse_error, "artifact must be a JSON object");
  if (j.contains("objects")) return FileKind::category;
  if (j.contains("on_obj")) return FileKind::pfunctor;
  if (j.contains("get") || j.contains("compose")) return FileKind::lens;
  if (j.contains("view_update")) return FileKind::scenario;
  if (j.contains("layers")) return FileKind::learner;
  throw error(errc::parse_error, "unrecognized artifact kind");
}

}  // namespace lenslab
