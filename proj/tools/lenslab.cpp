#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lenslab/json_io.hpp"

namespace {

using namespace lenslab;

struct Output {
  json body = json::object();
  std::ostringstream text;
  bool json_only = false;

  void line(const std::string& s) {
    if (!json_only) std::cout << s << "\n";
    text << s << "\n";
  }
  int finish(int code) {
    body["exit"] = code;
    std::cout << body.dump(2) << "\n";
    return code;
  }
};

int classify(const error& e) {
  return e.code() == errc::parse_error || e.code() == errc::boundary_mismatch ? 2 : 1;
}

json report_json(const LawReport& r) {
  json j{{"law", r.law}, {"pass", r.pass()}, {"counterexamples", json::array()}};
  for (const auto& c : r.counterexamples)
    j["counterexamples"].push_back({{"key", c.key}, {"expected", c.expected}, {"actual", c.actual}});
  return j;
}

std::filesystem::path base_of(const std::string& path) {
  return std::filesystem::path(path).parent_path();
}

AlaLens load_lens_file(const std::string& path) {
  return lens_from_json(load_json(path), base_of(path));
}

int cmd_validate(Output& out, const std::string& path) {
  const json j = load_json(path);  // parse failures propagate as exit 2
  const FileKind kind = detect_file_kind(j);
  const char* names[] = {"category", "p-functor", "lens", "scenario", "learner"};
  out.body["command"] = "validate";
  out.body["kind"] = names[static_cast<int>(kind)];
  try {
    switch (kind) {
      case FileKind::category: category_from_json(j); break;
      case FileKind::pfunctor: pfunctor_from_json(j, base_of(path)); break;
      case FileKind::lens: lens_from_json(j, base_of(path)); break;
      case FileKind::scenario: scenario_from_json(j); break;
      case FileKind::learner: learner_from_json(j); break;
    }
  } catch (const error& e) {
    if (e.code() == errc::parse_error) throw;
    out.line(std::string("validate ") + path + ": FAIL " + errc_name(e.code()) + ": " + e.what());
    out.body["findings"] = {{{"code", errc_name(e.code())}, {"message", e.what()}}};
    return 1;
  }
  out.line(std::string("validate ") + path + ": ok (" + out.body["kind"].get<std::string>() + ")");
  return 0;
}

int cmd_check(Output& out, const std::string& path, const std::string& laws_csv) {
  AlaLens lens = load_lens_file(path);
  std::vector<std::string> laws;
  std::stringstream ss(laws_csv);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) laws.push_back(item);
  out.body["command"] = "check";
  out.body["laws"] = json::object();
  bool all_pass = true;
  bool putput_requested = false;
  for (const auto& name : laws) {
    LawReport r;
    if (name == "stability") r = check_stability(lens);
    else if (name == "putget") r = check_putget(lens);
    else if (name == "hippocratic") r = check_hippocratic(lens);
    else if (name == "putput") { r = check_putput(lens); putput_requested = true; }
    else throw error(errc::parse_error, "unknown law name '" + name + "'");
    out.body["laws"][name] = report_json(r);
    out.line(r.render());
    all_pass = all_pass && r.pass();
  }
  if (!putput_requested) {
    // Putput is diagnostic: always reported, never part of the verdict unless
    // explicitly requested.
    LawReport r = check_putput(lens);
    out.body["diagnostic"]["putput"] = report_json(r);
    out.line("diagnostic " + r.render());
  }
  return all_pass ? 0 : 1;
}

int cmd_compose(Output& out, bool par, const std::vector<std::string>& inputs,
                const std::string& out_path, bool descriptor) {
  out.body["command"] = "compose";
  json result;
  if (descriptor) {
    result = {{"compose", par ? "par" : "seq"}, {"components", inputs}};
    // Still perform the composition so boundary errors surface now.
    AlaLens a = load_lens_file(inputs[0]);
    AlaLens b = load_lens_file(inputs[1]);
    par ? par_compose(a, b) : seq_compose(a, b);
  } else {
    AlaLens a = load_lens_file(inputs[0]);
    AlaLens b = load_lens_file(inputs[1]);
    result = lens_to_json(par ? par_compose(a, b) : seq_compose(a, b));
  }
  std::ofstream of(out_path);
  if (!of) throw error(errc::parse_error, "cannot write " + out_path);
  of << result.dump(2) << "\n";
  out.body["output"] = out_path;
  out.line(std::string(par ? "par" : "seq") + " composition written to " + out_path);
  return 0;
}

int cmd_assoc(Output& out, const std::vector<std::string>& inputs) {
  LawReport r = check_associativity(load_lens_file(inputs[0]), load_lens_file(inputs[1]),
                                    load_lens_file(inputs[2]));
  out.body["command"] = "assoc";
  out.body["report"] = report_json(r);
  out.line(r.render());
  return r.pass() ? 0 : 1;
}

int cmd_equiv(Output& out, const std::string& a_path, const std::string& b_path,
              const std::string& iota_path) {
  AlaLens a = load_lens_file(a_path);
  AlaLens b = load_lens_file(b_path);
  std::optional<Functor> iota;
  if (!iota_path.empty())
    iota = functor_from_json(load_json(iota_path), a.get.params, b.get.params);
  EquivalenceResult r = check_equivalence(a, b, iota);
  out.body["command"] = "equiv";
  out.body["equivalent"] = r.equivalent;
  out.body["counterexamples"] = json::array();
  for (const auto& c : r.counterexamples)
    out.body["counterexamples"].push_back(
        {{"key", c.key}, {"expected", c.expected}, {"actual", c.actual}});
  out.line(std::string("equivalence: ") + (r.equivalent ? "yes" : "no"));
  for (const auto& c : r.counterexamples)
    out.line("  " + c.key + ": expected " + c.expected + ", got " + c.actual);
  return r.equivalent ? 0 : 1;
}

int cmd_propagate(Output& out, const std::string& scenario_path) {
  Scenario s = scenario_from_json(load_json(scenario_path));
  out.body["command"] = "propagate";
  out.body["policy"] = policy_name(s.policy);
  if (s.policy == UpdatePolicy::param) {
    const ViewDef vd = ViewDef::it_view_thresholded(default_thresholds());
    PolicyPutResult r =
        policy_put(UpdatePolicy::param, vd, Threshold::any_exp(), s.source, s.view_update);
    out.body["theta"] = r.theta2.render();
    out.body["source_delta"] = delta_to_json(r.source_delta);
    out.line("threshold update: any -> " + r.theta2.render() + " (source unchanged)");
    return 0;
  }
  ChainPropagation p = propagate_composed(s.policy, s.source, s.view_update);
  out.body["b_delta"] = delta_to_json(p.b_delta);
  out.body["a_delta"] = delta_to_json(p.a_delta);
  out.line("propagated through " + policy_name(s.policy) + " chain:");
  out.line("  B-level: " + p.b_delta.canonical_id());
  out.line("  A-level: " + p.a_delta.canonical_id());
  return 0;
}

int cmd_compare(Output& out, const std::string& scenario_path) {
  Scenario s = scenario_from_json(load_json(scenario_path));
  if (s.policy == UpdatePolicy::param)
    throw error(errc::parse_error, "compare requires a quit or trans scenario");
  out.body["command"] = "compare";
  out.body["policy"] = policy_name(s.policy);
  PolicyComparison c = compare_policies(s);
  out.body["equal"] = c.equal;
  out.body["u_long"] = delta_to_json(c.u_long);
  out.body["u_composed"] = delta_to_json(c.u_composed);
  if (c.equal) {
    out.line("long and composed propagation agree");
  } else {
    out.body["comparison_delta"] = delta_to_json(*c.comparison);
    out.line("long and composed propagation differ; comparison delta reconciles them:");
    out.line("  " + c.comparison->canonical_id());
  }
  return 0;
}

json vec_to_json(const Vec& v) { return json(v); }

int cmd_learner(Output& out, const std::string& spec_path, const std::vector<std::string>& put_args,
                bool do_gradcheck) {
  Vec init;
  LearnerLens ll = learner_from_json(load_json(spec_path), &init);
  out.body["command"] = "learner";
  if (do_gradcheck) {
    Vec a(ll.fn.m), b(ll.fn.n);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = 0.3 + 0.1 * static_cast<double>(j);
    for (std::size_t j = 0; j < b.size(); ++j) b[j] = 0.7 - 0.1 * static_cast<double>(j);
    GradcheckReport r = gradcheck(ll.fn, ll.err, init, a, b);
    out.body["gradcheck"] = json::array();
    double worst = 0.0;
    for (const auto& e : r.entries) {
      out.body["gradcheck"].push_back({{"which", e.which},
                                       {"index", e.index},
                                       {"analytic", e.analytic},
                                       {"numeric", e.numeric},
                                       {"rel_error", e.rel_error}});
      worst = std::max(worst, e.rel_error);
    }
    out.body["pass"] = r.pass();
    out.line("gradcheck: " + std::string(r.pass() ? "pass" : "FAIL") +
             " (worst rel error " + std::to_string(worst) + ")");
    return r.pass() ? 0 : 1;
  }
  if (put_args.size() != 3)
    throw error(errc::parse_error, "--put needs p.json a.json b.json");
  const Vec p = vec_from_json(load_json(put_args[0]));
  const Vec a = vec_from_json(load_json(put_args[1]));
  const Vec b = vec_from_json(load_json(put_args[2]));
  LearnerPutResult r = learner_put(ll, p, a, b);
  out.body["p2"] = vec_to_json(r.p2);
  out.body["a2"] = vec_to_json(r.a2);
  out.body["amendment"] = {{"from", vec_to_json(r.amendment.from)},
                           {"to", vec_to_json(r.amendment.to)}};
  auto render = [](const Vec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
  };
  out.line("p' = " + render(r.p2));
  out.line("a' = " + render(r.a2));
  out.line("amended target = " + render(r.amendment.to));
  return 0;
}

int cmd_policy_functoriality(Output& out, const std::string& policy_name_arg,
                             const std::string& scenario_path) {
  const UpdatePolicy pol = parse_policy(policy_name_arg);
  if (pol == UpdatePolicy::param)
    throw error(errc::parse_error, "policy-functoriality requires quit or trans");
  Scenario s = scenario_path.empty() ? scenario_w() : scenario_from_json(load_json(scenario_path));
  s.policy = pol;
  ModelUniverse u = build_universe({s});
  LawReport r = check_policy_functoriality(u.policy_of(pol), u.get1(), u.get2());
  out.body["command"] = "policy-functoriality";
  out.body["policy"] = policy_name_arg;
  out.body["report"] = report_json(r);
  out.line("policy-functoriality (" + policy_name_arg + "): " +
           (r.pass() ? "pass" : "FAIL"));
  for (const auto& c : r.counterexamples)
    out.line("  " + c.key + ": expected " + c.expected + ", got " + c.actual);
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ala-lens workbench: categories, lenses, laws, and propagation"};
  app.require_subcommand(1);
  bool json_only = false;
  app.add_flag("--json", json_only, "emit only the JSON report");

  std::string path, laws = "stability,putget", out_path, iota_path, scenario_path;
  std::string spec_path, policy;
  std::vector<std::string> inputs, put_args;
  bool par = false, seq = false, descriptor = false, do_gradcheck = false;

  auto* validate = app.add_subcommand("validate", "validate an artifact file");
  validate->add_option("path", path)->required();

  auto* check = app.add_subcommand("check", "run lens laws");
  check->add_option("path", path)->required();
  check->add_option("--laws", laws, "comma-separated law list");

  auto* compose = app.add_subcommand("compose", "compose two lens files");
  compose->add_flag("--seq", seq);
  compose->add_flag("--par", par);
  compose->add_option("inputs", inputs)->expected(2);
  compose->add_option("-o,--output", out_path)->required();
  compose->add_flag("--descriptor", descriptor, "write a composition descriptor");

  auto* assoc = app.add_subcommand("assoc", "check associativity of three lenses");
  assoc->add_option("inputs", inputs)->expected(3);

  auto* equiv = app.add_subcommand("equiv", "check lens equivalence");
  equiv->add_option("inputs", inputs)->expected(2);
  equiv->add_option("--iota", iota_path, "parameter isomorphism file");

  auto* propagate = app.add_subcommand("propagate", "propagate a view update scenario");
  propagate->add_option("--scenario", scenario_path)->required();

  auto* compare = app.add_subcommand("compare", "compare long vs composed propagation");
  compare->add_option("--scenario", scenario_path)->required();

  auto* learner = app.add_subcommand("learner", "gradient-descent learner operations");
  learner->add_option("--spec", spec_path)->required();
  learner->add_option("--put", put_args, "p.json a.json b.json")->expected(3);
  learner->add_flag("--gradcheck", do_gradcheck);

  auto* polfun = app.add_subcommand("policy-functoriality", "policy vs composition");
  polfun->add_option("--policy", policy)->required();
  polfun->add_option("--scenario", scenario_path);

  CLI11_PARSE(app, argc, argv);

  Output out;
  out.json_only = json_only;
  try {
    if (*validate) return out.finish(cmd_validate(out, path));
    if (*check) return out.finish(cmd_check(out, path, laws));
    if (*compose) {
      if (seq == par) throw lenslab::error(lenslab::errc::parse_error,
                                           "pass exactly one of --seq / --par");
      return out.finish(cmd_compose(out, par, inputs, out_path, descriptor));
    }
    if (*assoc) return out.finish(cmd_assoc(out, inputs));
    if (*equiv) return out.finish(cmd_equiv(out, inputs[0], inputs[1], iota_path));
    if (*propagate) return out.finish(cmd_propagate(out, scenario_path));
    if (*compare) return out.finish(cmd_compare(out, scenario_path));
    if (*learner) {
      if (!do_gradcheck && put_args.empty())
        throw lenslab::error(lenslab::errc::parse_error, "pass --put or --gradcheck");
      return out.finish(cmd_learner(out, spec_path, put_args, do_gradcheck));
    }
    if (*polfun) return out.finish(cmd_policy_functoriality(out, policy, scenario_path));
  } catch (const lenslab::error& e) {
    out.body["error"] = {{"code", lenslab::errc_name(e.code())}, {"message", e.what()}};
    out.line(std::string("error [") + lenslab::errc_name(e.code()) + "] " + e.what());
    return out.finish(classify(e));
  }
  return out.finish(2);
}
