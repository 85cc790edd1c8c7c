#ifndef LENSLAB_TEST_FIXTURES_HPP
#define LENSLAB_TEST_FIXTURES_HPP

#include <optional>

#include "lenslab/compose.hpp"

namespace fx {

using namespace lenslab;

inline std::shared_ptr<const FinCat> share(FinCat c) {
  return std::make_shared<FinCat>(validate_category(std::move(c)));
}

// Walking arrow: X --f--> Y.
inline FinCat cat2() {
  FinCat c;
  c.name = "CAT2";
  c.objects = {"X", "Y"};
  c.arrows = {{"idX", "X", "X"}, {"idY", "Y", "Y"}, {"f", "X", "Y"}};
  c.identities = {{"X", "idX"}, {"Y", "idY"}};
  c.table = {{{"idX", "idX"}, "idX"}, {{"idY", "idY"}, "idY"},
             {{"idX", "f"}, "f"},     {{"f", "idY"}, "f"}};
  return c;
}

// Free category on two composable arrows: X --f--> Y --g--> Z, h = f;g.
inline FinCat chain3() {
  FinCat c;
  c.name = "CHAIN3";
  c.objects = {"X", "Y", "Z"};
  c.arrows = {{"idX", "X", "X"}, {"idY", "Y", "Y"}, {"idZ", "Z", "Z"},
              {"f", "X", "Y"},   {"g", "Y", "Z"},   {"h", "X", "Z"}};
  c.identities = {{"X", "idX"}, {"Y", "idY"}, {"Z", "idZ"}};
  c.table = {{{"idX", "idX"}, "idX"}, {{"idY", "idY"}, "idY"}, {{"idZ", "idZ"}, "idZ"},
             {{"idX", "f"}, "f"},     {{"f", "idY"}, "f"},     {{"idY", "g"}, "g"},
             {{"g", "idZ"}, "g"},     {{"idX", "h"}, "h"},     {{"h", "idZ"}, "h"},
             {{"f", "g"}, "h"}};
  return c;
}

// Walking arrow used as a parameter space: p0 --e--> p1.
inline FinCat pararrow() {
  FinCat c;
  c.name = "PARARROW";
  c.objects = {"p0", "p1"};
  c.arrows = {{"idp0", "p0", "p0"}, {"idp1", "p1", "p1"}, {"e", "p0", "p1"}};
  c.identities = {{"p0", "idp0"}, {"p1", "idp1"}};
  c.table = {{{"idp0", "idp0"}, "idp0"}, {{"idp1", "idp1"}, "idp1"},
             {{"idp0", "e"}, "e"},       {{"e", "idp1"}, "e"}};
  return c;
}

// Two parallel non-identity arrows X => Y.
inline FinCat parallel_pair() {
  FinCat c;
  c.name = "PAIR";
  c.objects = {"X", "Y"};
  c.arrows = {{"idX", "X", "X"}, {"idY", "Y", "Y"}, {"s", "X", "Y"}, {"t", "X", "Y"}};
  c.identities = {{"X", "idX"}, {"Y", "idY"}};
  c.table = {{{"idX", "idX"}, "idX"}, {{"idY", "idY"}, "idY"},
             {{"idX", "s"}, "s"},     {{"s", "idY"}, "s"},
             {{"idX", "t"}, "t"},     {{"t", "idY"}, "t"}};
  return c;
}

inline std::shared_ptr<const FinCat> codisc(const std::vector<std::string>& objs,
                                            const std::string& name) {
  return share(codiscrete_category(objs, name));
}

inline std::uint64_t fnv(std::uint64_t seed, const std::string& s) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string codisc_arrow(const std::string& x, const std::string& y) {
  return "<" + x + ">" + y;
}

// Deterministic p-functor between codiscrete categories: object images are
// seed-derived, everything else is forced by codiscreteness.
inline ParamFunctor codisc_pfun(std::shared_ptr<const FinCat> P, std::shared_ptr<const FinCat> S,
                                std::shared_ptr<const FinCat> T, unsigned seed) {
  ParamFunctor pf;
  pf.params = P;
  pf.source = S;
  pf.target = T;
  for (const auto& p : P->objects) {
    Functor f;
    f.source = S;
    f.target = T;
    for (const auto& s : S->objects)
      f.obj_map[s] = T->objects[fnv(seed, p + "/" + s) % T->objects.size()];
    for (const auto& a : S->arrows)
      f.arr_map[a.id] = codisc_arrow(f.obj_map.at(a.src), f.obj_map.at(a.dst));
    pf.on_obj.emplace(p, std::move(f));
  }
  for (const auto& e : P->arrows) {
    NatTrans n;
    n.from = pf.on_obj.at(e.src);
    n.to = pf.on_obj.at(e.dst);
    for (const auto& s : S->objects)
      n.components[s] = codisc_arrow(n.from.on_obj(s), n.to.on_obj(s));
    pf.on_arr.emplace(e.id, std::move(n));
  }
  return pf;
}

// Table-backed wb lens between codiscrete spaces: put targets are
// seed-derived; the amendment is forced, which makes Putget automatic.
inline AlaLens codisc_lens(std::shared_ptr<const FinCat> P, std::shared_ptr<const FinCat> S,
                           std::shared_ptr<const FinCat> T, unsigned seed) {
  ParamFunctor get = codisc_pfun(P, S, T, seed);
  std::vector<PutRow> rows;
  for (const auto& p : P->objects)
    for (const auto& s : S->objects) {
      const std::string sp = pfun_get(get, p, s);
      for (const auto& v : T->arrows_from(sp)) {
        PutRow row{p, s, v, {}};
        if (T->is_identity(v)) {
          row.result = {P->identity(p), S->identity(s), v};
        } else {
          const std::string p2 = P->objects[fnv(seed + 1, p + "/" + s + "/" + v) % P->objects.size()];
          const std::string s2 = S->objects[fnv(seed + 2, p + "/" + s + "/" + v) % S->objects.size()];
          row.result = {codisc_arrow(p, p2), codisc_arrow(s, s2),
                        codisc_arrow(T->arrow(v).dst, pfun_get(get, p2, s2))};
        }
        rows.push_back(std::move(row));
      }
    }
  return make_table_lens(std::move(get), rows);
}

// Searches a full wb put table for an arbitrary get by enumerating candidate
// (e, u, amendment) triples satisfying Stability, Putget0, and Putget.
inline std::optional<AlaLens> search_table_lens(const ParamFunctor& get, unsigned seed) {
  const FinCat& P = *get.params;
  const FinCat& S = *get.source;
  const FinCat& T = *get.target;
  std::vector<PutRow> rows;
  for (const auto& p : P.objects)
    for (const auto& s : S.objects) {
      const std::string sp = pfun_get(get, p, s);
      for (const auto& v : T.arrows_from(sp)) {
        if (T.is_identity(v)) {
          rows.push_back({p, s, v, {P.identity(p), S.identity(s), v}});
          continue;
        }
        std::vector<PutResult> candidates;
        for (const auto& e : P.arrows_from(p))
          for (const auto& u : S.arrows_from(s)) {
            const std::string diag = pfun_diag(get, e, u);
            const std::string s2p2 = pfun_get(get, P.arrow(e).dst, S.arrow(u).dst);
            for (const auto& am : T.arrows_from(T.arrow(v).dst)) {
              if (T.arrow(am).dst != s2p2) continue;  // Putget0
              if (compose_arrows(T, v, am) != diag) continue;  // Putget
              candidates.push_back({e, u, am});
            }
          }
        if (candidates.empty()) return std::nullopt;
        rows.push_back(
            {p, s, v, candidates[fnv(seed, p + "|" + s + "|" + v) % candidates.size()]});
      }
    }
  return make_table_lens(get, rows);
}

}  // namespace fx

#endif
