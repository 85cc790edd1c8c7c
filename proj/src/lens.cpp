#include "lenslab/lens.hpp"

#include <sstream>

namespace lenslab {

AlaLens::AlaLens(ParamFunctor g, PutFn put)
    : get(std::move(g)), put_fn_(std::move(put)),
      memo_(std::make_shared<std::map<PutKey, PutResult>>()) {}

PutResult AlaLens::put(const std::string& p, const std::string& S, const std::string& v) const {
  PutKey key{p, S, v};
  auto it = memo_->find(key);
  if (it != memo_->end()) return it->second;

  const FinCat& pc = params();
  const FinCat& sc = source();
  const FinCat& tc = target();
  const Arrow& va = tc.arrow(v);
  if (va.src != pfun_get(get, p, S))
    throw error(errc::domain_error, "put(" + p + "," + S + "," + v + "): v is not anchored at S_p");

  PutResult r = put_fn_(p, S, v);

  const Arrow& ea = pc.arrow(r.e);
  const Arrow& ua = sc.arrow(r.u);
  const Arrow& aa = tc.arrow(r.amendment);
  if (ea.src != p) throw error(errc::domain_error, "parameter delta does not start at " + p);
  if (ua.src != S) throw error(errc::domain_error, "request does not start at " + S);
  if (aa.src != va.dst)
    throw error(errc::domain_error, "amendment does not start at target(v)");
  // Putget0: the view of the propagated source at the new parameter equals
  // the amended target.
  if (pfun_get(get, ea.dst, ua.dst) != aa.dst)
    throw error(errc::putget0_violation,
                "put(" + p + "," + S + "," + v + "): get_{" + ea.dst + "}(" + ua.dst +
                    ") != target(amendment)");

  memo_->emplace(key, r);
  return r;
}

AlaLens make_table_lens(ParamFunctor get, const std::vector<PutRow>& rows) {
  auto table = std::make_shared<std::map<PutKey, PutResult>>();
  for (const auto& row : rows) (*table)[PutKey{row.p, row.S, row.v}] = row.result;
  AlaLens lens(std::move(get), [table](const std::string& p, const std::string& S,
                                       const std::string& v) {
    auto it = table->find(PutKey{p, S, v});
    if (it == table->end())
      throw error(errc::put_domain_incomplete, "no put row for (" + p + "," + S + "," + v + ")");
    return it->second;
  });
  // Exhaustive domain completeness and Putget0 check.
  for (const auto& key : put_domain(lens)) lens.put(key.p, key.S, key.v);
  return lens;
}

AlaLens make_lens(ParamFunctor get, PutFn put) { return AlaLens(std::move(get), std::move(put)); }

std::string LawReport::render() const {
  std::ostringstream os;
  os << law << ": " << (pass() ? "pass" : "fail");
  for (const auto& c : counterexamples)
    os << "\n  at " << c.key << ": expected " << c.expected << ", got " << c.actual;
  return os.str();
}

std::vector<PutKey> put_domain(const AlaLens& lens) {
  std::vector<PutKey> out;
  for (const auto& p : lens.params().objects)
    for (const auto& S : lens.source().objects) {
      const std::string sp = pfun_get(lens.get, p, S);
      for (const auto& v : lens.target().arrows_from(sp)) out.push_back({p, S, v});
    }
  return out;
}

static std::string key_str(const PutKey& k) {
  return "(" + k.p + "," + k.S + "," + k.v + ")";
}

LawReport check_stability(const AlaLens& lens) {
  LawReport rep{"Stability", {}};
  for (const auto& p : lens.params().objects)
    for (const auto& S : lens.source().objects) {
      const std::string sp = pfun_get(lens.get, p, S);
      const std::string idv = lens.target().identity(sp);
      PutResult r = lens.put(p, S, idv);
      PutResult want{lens.params().identity(p), lens.source().identity(S), idv};
      if (!(r == want))
        rep.counterexamples.push_back({key_str({p, S, idv}),
                                       "(" + want.e + "," + want.u + "," + want.amendment + ")",
                                       "(" + r.e + "," + r.u + "," + r.amendment + ")"});
    }
  return rep;
}

LawReport check_putget(const AlaLens& lens) {
  LawReport rep{"Putget", {}};
  for (const auto& key : put_domain(lens)) {
    PutResult r = lens.put(key.p, key.S, key.v);
    const std::string lhs = pfun_diag(lens.get, r.e, r.u);
    const std::string rhs = compose_arrows(lens.target(), key.v, r.amendment);
    if (lhs != rhs)
      rep.counterexamples.push_back(
          {key_str(key), key.v + ";" + r.amendment + " = " + rhs, "u.get_e = " + lhs});
  }
  return rep;
}

LawReport check_hippocratic(const AlaLens& lens) {
  LawReport rep{"Hippocraticness", {}};
  for (const auto& key : put_domain(lens)) {
    // Search for a source update whose view is exactly v.
    bool in_image = false;
    const Functor& getp = lens.get.at(key.p);
    for (const auto& u : lens.source().arrows_from(key.S))
      if (getp.on_arr(u) == key.v) {
        in_image = true;
        break;
      }
    if (!in_image) continue;
    PutResult r = lens.put(key.p, key.S, key.v);
    const std::string idt = lens.target().identity(lens.target().arrow(key.v).dst);
    if (r.amendment != idt)
      rep.counterexamples.push_back({key_str(key), idt, r.amendment});
  }
  return rep;
}

LawReport check_putput(const AlaLens& lens) {
  LawReport rep{"Putput", {}};
  for (const auto& key : put_domain(lens)) {
    PutResult first = lens.put(key.p, key.S, key.v);
    // Comparable only when the first amendment is an identity, so that the
    // propagated state is anchored at target(v).
    if (!lens.target().is_identity(first.amendment)) continue;
    const std::string p2 = lens.params().arrow(first.e).dst;
    const std::string s2 = lens.source().arrow(first.u).dst;
    for (const auto& v2 : lens.target().arrows_from(lens.target().arrow(key.v).dst)) {
      const std::string vv = compose_arrows(lens.target(), key.v, v2);
      PutResult second = lens.put(p2, s2, v2);
      PutResult combined = lens.put(key.p, key.S, vv);
      PutResult expect{compose_arrows(lens.params(), first.e, second.e),
                       compose_arrows(lens.source(), first.u, second.u), second.amendment};
      if (!(combined == expect))
        rep.counterexamples.push_back(
            {"(" + key.p + "," + key.S + "," + key.v + ";" + v2 + ")",
             "(" + expect.e + "," + expect.u + "," + expect.amendment + ")",
             "(" + combined.e + "," + combined.u + "," + combined.amendment + ")"});
    }
  }
  return rep;
}

bool well_behaved(const AlaLens& lens) {
  return check_stability(lens).pass() && check_putget(lens).pass();
}

}  // namespace lenslab
