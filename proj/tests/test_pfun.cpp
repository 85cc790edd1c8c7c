#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

using namespace lenslab;

TEST_CASE("pfun_get on the identity p-functor") {
  auto c2 = fx::share(fx::cat2());
  ParamFunctor id = identity_pfunctor(c2);
  CHECK(pfun_get(id, "*", "X") == "X");
  CHECK(pfun_get(id, "*", "Y") == "Y");
  CHECK(validate_pfunctor(id).empty());
}

TEST_CASE("two-parameter fixture gives distinct functors per parameter") {
  auto P = fx::share(fx::pararrow());
  auto S = fx::codisc({"s0", "s1"}, "S");
  auto T = fx::codisc({"t0", "t1", "t2"}, "T");
  ParamFunctor pf = fx::codisc_pfun(P, S, T, 3);
  CHECK(validate_pfunctor(pf).empty());
  for (const auto& p : P->objects)
    for (const auto& s : S->objects) CHECK(pfun_get(pf, p, s) == pf.at(p).on_obj(s));
  // seed 3 happens to separate the two parameters; pin it so the fixture
  // stays a genuinely two-parameter example.
  CHECK(!functor_equal(pf.at("p0"), pf.at("p1")));
}

TEST_CASE("validate_pfunctor flags an ill-typed transformation component") {
  auto P = fx::share(fx::pararrow());
  auto S = fx::codisc({"s0", "s1"}, "S");
  auto T = fx::codisc({"t0", "t1"}, "T");
  ParamFunctor pf = fx::codisc_pfun(P, S, T, 5);
  CHECK(validate_pfunctor(pf).empty());
  NatTrans& n = pf.on_arr.at("e");
  const std::string good_src = n.from.on_obj("s0");
  const std::string other = (good_src == "t0") ? "t1" : "t0";
  n.components["s0"] = fx::codisc_arrow(other, other);  // wrong source object
  CHECK(!validate_pfunctor(pf).empty());
}

TEST_CASE("pfun_diag bracketings") {
  auto P = fx::share(fx::pararrow());
  auto S = fx::codisc({"s0", "s1"}, "S");
  auto T = fx::codisc({"t0", "t1", "t2"}, "T");
  ParamFunctor pf = fx::codisc_pfun(P, S, T, 11);

  SUBCASE("identity parameter delta reduces to the functor image") {
    for (const auto& u : S->arrows_from("s0"))
      CHECK(pfun_diag(pf, "idp0", u) == pf.at("p0").on_arr(u));
  }
  SUBCASE("identity source arrow reduces to the transformation component") {
    CHECK(pfun_diag(pf, "e", S->identity("s0")) == pf.along("e").at("s0"));
    CHECK(pfun_diag(pf, "e", S->identity("s1")) == pf.along("e").at("s1"));
  }
  SUBCASE("both non-identity: the two bracketings agree exhaustively") {
    for (const auto& a : S->arrows) {
      const std::string lhs =
          compose_arrows(*T, pf.along("e").at(a.src), pf.at("p1").on_arr(a.id));
      const std::string rhs =
          compose_arrows(*T, pf.at("p0").on_arr(a.id), pf.along("e").at(a.dst));
      CHECK(lhs == rhs);
      CHECK(pfun_diag(pf, "e", a.id) == lhs);
    }
  }
}

TEST_CASE("pfun_compose with the identity p-functor is a unitor-equivalence") {
  auto P = fx::share(fx::pararrow());
  auto S = fx::codisc({"s0", "s1"}, "S");
  auto T = fx::codisc({"t0", "t1"}, "T");
  ParamFunctor f = fx::codisc_pfun(P, S, T, 13);

  ParamFunctor right = pfun_compose(f, identity_pfunctor(T));
  CHECK(validate_pfunctor(right).empty());
  CHECK(pfun_equiv_check(right, f, right_unitor(right.params, P)));

  ParamFunctor left = pfun_compose(identity_pfunctor(S), f);
  CHECK(pfun_equiv_check(left, f, left_unitor(left.params, P)));
}

TEST_CASE("pfun_compose on_arr equals a directly computed Godement table") {
  auto P = fx::share(fx::pararrow());
  auto Q = fx::share(fx::pararrow());
  auto S = fx::codisc({"s0", "s1"}, "S");
  auto T = fx::codisc({"t0", "t1", "t2"}, "T");
  auto U = fx::codisc({"u0", "u1"}, "U");
  ParamFunctor f = fx::codisc_pfun(P, S, T, 17);
  ParamFunctor g = fx::codisc_pfun(Q, T, U, 19);

  ParamFunctor h = pfun_compose(f, g);
  CHECK(validate_pfunctor(h).empty());
  for (const auto& e : P->arrows)
    for (const auto& k : Q->arrows) {
      const NatTrans& got = h.along(pair_id(e.id, k.id));
      const NatTrans& a = f.along(e.id);
      const NatTrans& b = g.along(k.id);
      for (const auto& s : S->objects) {
        const std::string want = compose_arrows(
            *U, b.from.on_arr(a.at(s)), b.at(a.to.on_obj(s)));
        CHECK(got.at(s) == want);
      }
    }
}

TEST_CASE("pfun_compose is associative up to the canonical reassociator") {
  auto P = fx::share(fx::pararrow());
  auto Q = fx::share(fx::pararrow());
  auto R = fx::codisc({"r0", "r1"}, "R");
  auto A = fx::codisc({"a0", "a1"}, "A");
  auto B = fx::codisc({"b0", "b1"}, "B");
  auto C = fx::codisc({"c0", "c1", "c2"}, "C");
  auto D = fx::codisc({"d0", "d1"}, "D");
  ParamFunctor f = fx::codisc_pfun(P, A, B, 23);
  ParamFunctor g = fx::codisc_pfun(Q, B, C, 29);
  ParamFunctor h = fx::codisc_pfun(R, C, D, 31);

  ParamFunctor lhs = pfun_compose(pfun_compose(f, g), h);
  ParamFunctor rhs = pfun_compose(f, pfun_compose(g, h));
  CHECK(pfun_equiv_check(lhs, rhs, reassociator(lhs.params, rhs.params)));
}

TEST_CASE("pfun_equiv_check: reflexivity, renaming, perturbation") {
  auto P = fx::share(fx::pararrow());
  auto S = fx::codisc({"s0", "s1"}, "S");
  auto T = fx::codisc({"t0", "t1"}, "T");
  ParamFunctor f = fx::codisc_pfun(P, S, T, 37);

  CHECK(pfun_equiv_check(f, f, identity_functor(P)));

  // Renamed parameter space.
  FinCat ren = fx::pararrow();
  ren.name = "PARARROW2";
  ren.objects = {"q0", "q1"};
  ren.arrows = {{"idq0", "q0", "q0"}, {"idq1", "q1", "q1"}, {"eq", "q0", "q1"}};
  ren.identities = {{"q0", "idq0"}, {"q1", "idq1"}};
  ren.table = {{{"idq0", "idq0"}, "idq0"}, {{"idq1", "idq1"}, "idq1"},
               {{"idq0", "eq"}, "eq"},     {{"eq", "idq1"}, "eq"}};
  auto Ph = fx::share(std::move(ren));
  std::map<std::string, std::string> omap = {{"p0", "q0"}, {"p1", "q1"}};
  std::map<std::string, std::string> amap = {{"idp0", "idq0"}, {"idp1", "idq1"}, {"e", "eq"}};
  ParamFunctor fh;
  fh.params = Ph;
  fh.source = S;
  fh.target = T;
  for (const auto& [p, fun] : f.on_obj) fh.on_obj.emplace(omap.at(p), fun);
  for (const auto& [e, n] : f.on_arr) fh.on_arr.emplace(amap.at(e), n);
  Functor iota{P, Ph, omap, amap};
  CHECK(pfun_equiv_check(f, fh, iota));

  // Perturbed copy disagrees.
  ParamFunctor fp = f;
  auto& fun = fp.on_obj.at("p0");
  for (auto& [s, t] : fun.obj_map) t = (t == "t0") ? "t1" : "t0";
  for (const auto& a : S->arrows)
    fun.arr_map[a.id] = fx::codisc_arrow(fun.obj_map.at(a.src), fun.obj_map.at(a.dst));
  CHECK(!pfun_equiv_check(f, fp, identity_functor(P)));
}
