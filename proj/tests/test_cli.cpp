#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "lenslab/json_io.hpp"

using namespace lenslab;
namespace fs = std::filesystem;

#ifndef LENSLAB_BIN
#error "LENSLAB_BIN must point at the CLI binary"
#endif

namespace {

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(LENSLAB_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

fs::path workdir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "lenslab-cli-fixtures";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  fs::path p = workdir() / name;
  std::ofstream(p) << content;
  return p.string();
}

std::string write_json(const std::string& name, const json& j) {
  return write_file(name, j.dump(2));
}

std::string lens_file(const std::string& name, const AlaLens& l) {
  return write_json(name, lens_to_json(l));
}

json scenario_json(const std::string& policy) {
  // The Mary story: she leaves the ML view and a fresh Mary row appears.
  return json{
      {"source",
       {{"schema", "A"},
        {"rows",
         {{{"oid", "#A"}, {"name", "Ann"}, {"expr", 10}, {"dep", "HR"}},
          {{"oid", "#J"}, {"name", "John"}, {"expr", 10}, {"dep", "Testing"}},
          {{"oid", "#M"}, {"name", "Mary"}, {"expr", 3}, {"dep", "ML"}}}}}},
      {"view_update",
       {{"deleted", {"#M"}}, {"inserted", {{{"oid", "#M2"}, {"name", "Mary"}}}}}},
      {"policy", policy}};
}

}  // namespace

TEST_CASE("validate: category files") {
  const std::string good = write_json("cat2.json", category_to_json(validate_category(fx::cat2())));
  RunResult r = run("validate " + good);
  CHECK(r.code == 0);
  CHECK(r.out.find("ok (category)") != std::string::npos);

  json broken = category_to_json(validate_category(fx::cat2()));
  json kept = json::array();
  for (const auto& t : broken["compose"])
    if (!(t[0] == "f" && t[1] == "idY")) kept.push_back(t);
  broken["compose"] = kept;
  RunResult r2 = run("validate " + write_json("cat2_broken.json", broken));
  CHECK(r2.code == 1);
  CHECK(r2.out.find("MissingComposite") != std::string::npos);

  RunResult r3 = run("validate " + write_file("garbage.json", "{not json"));
  CHECK(r3.code == 2);
}

TEST_CASE("validate: other artifact kinds") {
  RunResult s = run("validate " + write_json("w_quit.json", scenario_json("quit")));
  CHECK(s.code == 0);
  CHECK(s.out.find("ok (scenario)") != std::string::npos);

  const json nn = {{"layers", {{{"kind", "affine"}, {"in", 1}, {"out", 1}, {"w", {{1.0}}}}}},
                   {"eps", 0.1}};
  RunResult l = run("validate " + write_json("nn.json", nn));
  CHECK(l.code == 0);
  CHECK(l.out.find("ok (learner)") != std::string::npos);
}

TEST_CASE("check: laws on lens files") {
  auto c2 = fx::share(fx::cat2());
  const std::string idlens = lens_file("idlens.json", identity_lens(c2));
  RunResult r = run("check " + idlens);
  CHECK(r.code == 0);
  CHECK(r.out.find("Stability: pass") != std::string::npos);
  CHECK(r.out.find("Putget: pass") != std::string::npos);
  CHECK(r.out.find("diagnostic Putput") != std::string::npos);

  RunResult r2 = run("check " + idlens + " --laws putput");
  CHECK(r2.code == 0);

  RunResult r3 = run("check " + idlens + " --laws stability,frobnicate");
  CHECK(r3.code == 2);

  // Stability violator: every put jumps to a fixed state.
  auto P = fx::codisc({"p0", "p1"}, "P");
  auto S = fx::codisc({"s0", "s1"}, "S");
  auto T = fx::codisc({"t0", "t1"}, "T");
  ParamFunctor get = fx::codisc_pfun(P, S, T, 47);
  std::vector<PutRow> rows;
  for (const auto& p : P->objects)
    for (const auto& s : S->objects) {
      const std::string sp = pfun_get(get, p, s);
      for (const auto& v : T->arrows_from(sp))
        rows.push_back({p, s, v,
                        {fx::codisc_arrow(p, "p1"), fx::codisc_arrow(s, "s1"),
                         fx::codisc_arrow(T->arrow(v).dst, pfun_get(get, "p1", "s1"))}});
    }
  const std::string bad = lens_file("unstable.json", make_table_lens(get, rows));
  RunResult r4 = run("check " + bad);
  CHECK(r4.code == 1);
  CHECK(r4.out.find("Stability: fail") != std::string::npos);
}

TEST_CASE("compose, assoc, equiv round-trip through files") {
  auto P = fx::codisc({"p0", "p1"}, "P");
  auto Q = fx::codisc({"q0"}, "Q");
  auto A = fx::codisc({"a0", "a1"}, "A");
  auto B = fx::codisc({"b0", "b1"}, "B");
  auto C = fx::codisc({"c0", "c1"}, "C");
  const std::string k = lens_file("k.json", fx::codisc_lens(P, A, B, 201));
  const std::string l = lens_file("l.json", fx::codisc_lens(Q, B, C, 202));
  const std::string m = lens_file("m.json", fx::codisc_lens(Q, C, A, 203));
  const std::string out = (workdir() / "kl.json").string();

  RunResult r = run("compose --seq " + k + " " + l + " -o " + out);
  CHECK(r.code == 0);
  CHECK(run("validate " + out).code == 0);
  CHECK(run("check " + out).code == 0);

  // l : B -> C cannot precede k : A -> B.
  RunResult r2 = run("compose --seq " + l + " " + k + " -o " + (workdir() / "x.json").string());
  CHECK(r2.code == 2);
  CHECK(r2.out.find("BoundaryMismatch") != std::string::npos);

  const std::string outp = (workdir() / "kp.json").string();
  CHECK(run("compose --par " + k + " " + l + " -o " + outp).code == 0);
  CHECK(run("validate " + outp).code == 0);

  RunResult ra = run("assoc " + k + " " + l + " " + m);
  CHECK(ra.code == 0);
  CHECK(ra.out.find("Associativity: pass") != std::string::npos);

  CHECK(run("equiv " + k + " " + k).code == 0);
  RunResult re = run("equiv " + k + " " + l);
  CHECK(re.code != 0);
}

TEST_CASE("compose --descriptor produces a checkable reference file") {
  auto P = fx::codisc({"p0"}, "P");
  auto A = fx::codisc({"a0", "a1"}, "A");
  auto B = fx::codisc({"b0", "b1"}, "B");
  auto C = fx::codisc({"c0"}, "C");
  lens_file("d1.json", fx::codisc_lens(P, A, B, 204));
  lens_file("d2.json", fx::codisc_lens(P, B, C, 205));
  const std::string out = (workdir() / "desc.json").string();
  RunResult r = run("compose --seq " + (workdir() / "d1.json").string() + " " +
                    (workdir() / "d2.json").string() + " -o " + out + " --descriptor");
  CHECK(r.code == 0);
  CHECK(run("check " + out).code == 0);
}

TEST_CASE("propagate and compare on the Mary scenarios") {
  const std::string wq = write_json("w_quit.json", scenario_json("quit"));
  RunResult r = run("propagate --scenario " + wq);
  CHECK(r.code == 0);
  CHECK(r.out.find("B-level:") != std::string::npos);
  CHECK(r.out.find("A-level:") != std::string::npos);

  RunResult rc = run("compare --scenario " + wq);
  CHECK(rc.code == 0);
  CHECK(rc.out.find("agree") != std::string::npos);

  const std::string wt = write_json("w_trans.json", scenario_json("trans"));
  RunResult rt = run("compare --scenario " + wt);
  CHECK(rt.code == 0);
  CHECK(rt.out.find("differ") != std::string::npos);
  CHECK(rt.out.find("comparison delta") != std::string::npos);
}

TEST_CASE("propagate a threshold scenario") {
  // Mary (expr 3) drops out of the thresholded view; gt3 explains it.
  json s = {{"source", scenario_json("quit")["source"]},
            {"view_update",
             {{"deleted", {"#M"}}, {"kept", json::array({json::array({"#J", "#J"})})}}},
            {"policy", "param"}};
  RunResult r = run("propagate --scenario " + write_json("w_param.json", s));
  CHECK(r.code == 0);
  CHECK(r.out.find("any -> gt3") != std::string::npos);

  RunResult rc = run("compare --scenario " + (workdir() / "w_param.json").string());
  CHECK(rc.code == 2);
}

TEST_CASE("learner subcommand") {
  const json nn = {{"layers", {{{"kind", "affine"}, {"in", 1}, {"out", 1}, {"w", {{1.0}}}}}},
                   {"eps", 0.1}};
  const std::string spec = write_json("nn1.json", nn);
  const std::string pj = write_json("p.json", json{1.0});
  const std::string aj = write_json("a.json", json{2.0});
  const std::string bj = write_json("b.json", json{3.0});
  RunResult r = run("learner --spec " + spec + " --put " + pj + " " + aj + " " + bj);
  CHECK(r.code == 0);
  CHECK(r.out.find("p' = [1.200000]") != std::string::npos);
  CHECK(r.out.find("a' = [2.100000]") != std::string::npos);
  CHECK(r.out.find("amended target = [2.520000]") != std::string::npos);

  RunResult g = run("learner --spec " + spec + " --gradcheck");
  CHECK(g.code == 0);
  CHECK(g.out.find("gradcheck: pass") != std::string::npos);
}

TEST_CASE("policy-functoriality verdicts") {
  RunResult q = run("policy-functoriality --policy quit");
  CHECK(q.code == 0);
  CHECK(q.out.find("pass") != std::string::npos);

  RunResult t = run("policy-functoriality --policy trans");
  CHECK(t.code == 1);
  CHECK(t.out.find("FAIL") != std::string::npos);
}
