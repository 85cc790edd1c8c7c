#include "lenslab/pfun.hpp"

namespace lenslab {

const Functor& ParamFunctor::at(const std::string& p) const {
  auto it = on_obj.find(p);
  if (it == on_obj.end()) throw error(errc::unknown_object, "no functor at parameter '" + p + "'");
  return it->second;
}

const NatTrans& ParamFunctor::along(const std::string& e) const {
  auto it = on_arr.find(e);
  if (it == on_arr.end())
    throw error(errc::unknown_arrow, "no transformation along parameter delta '" + e + "'");
  return it->second;
}

std::vector<std::string> validate_pfunctor(const ParamFunctor& pf) {
  std::vector<std::string> issues;
  const FinCat& p = *pf.params;
  for (const auto& po : p.objects) {
    auto it = pf.on_obj.find(po);
    if (it == pf.on_obj.end()) {
      issues.push_back("no functor at parameter " + po);
      continue;
    }
    for (auto& s : validate_functor(it->second))
      issues.push_back("functor at " + po + ": " + s);
  }
  for (const auto& pe : p.arrows) {
    auto it = pf.on_arr.find(pe.id);
    if (it == pf.on_arr.end()) {
      issues.push_back("no transformation along " + pe.id);
      continue;
    }
    const NatTrans& n = it->second;
    if (pf.on_obj.count(pe.src) && !functor_equal(n.from, pf.on_obj.at(pe.src)))
      issues.push_back("transformation along " + pe.id + " has wrong domain functor");
    if (pf.on_obj.count(pe.dst) && !functor_equal(n.to, pf.on_obj.at(pe.dst)))
      issues.push_back("transformation along " + pe.id + " has wrong codomain functor");
    for (auto& s : validate_nat_trans(n))
      issues.push_back("transformation along " + pe.id + ": " + s);
  }
  if (!issues.empty()) return issues;

  // Functoriality in P.
  for (const auto& po : p.objects)
    if (!nat_trans_equal(pf.on_arr.at(p.identity(po)), identity_nat_trans(pf.on_obj.at(po))))
      issues.push_back("on_arr(id_" + po + ") is not the identity transformation");
  for (const auto& e : p.arrows)
    for (const auto& ep : p.arrows) {
      if (e.dst != ep.src) continue;
      const NatTrans lhs = pf.on_arr.at(p.table.at({e.id, ep.id}));
      const NatTrans rhs = vertical_compose(pf.on_arr.at(e.id), pf.on_arr.at(ep.id));
      if (!nat_trans_equal(lhs, rhs))
        issues.push_back("on_arr(" + e.id + ";" + ep.id + ") != on_arr(" + e.id + ");on_arr(" +
                         ep.id + ")");
    }
  return issues;
}

std::string pfun_get(const ParamFunctor& pf, const std::string& p, const std::string& s) {
  return pf.at(p).on_obj(s);
}

std::string pfun_diag(const ParamFunctor& pf, const std::string& e, const std::string& u) {
  const Arrow& pe = pf.params->arrow(e);
  const Arrow& su = pf.source->arrow(u);
  const NatTrans& n = pf.along(e);
  const FinCat& t = *pf.target;
  const std::string one = t.table.at({n.at(su.src), pf.at(pe.dst).on_arr(u)});
  const std::string other = t.table.at({pf.at(pe.src).on_arr(u), n.at(su.dst)});
  if (one != other)
    throw error(errc::naturality_mismatch, "diagonal of (" + e + "," + u + ") is ambiguous");
  return one;
}

ParamFunctor pfun_compose(const ParamFunctor& f, const ParamFunctor& g) {
  if (f.target->name != g.source->name || f.target->objects != g.source->objects)
    throw error(errc::boundary_mismatch, "p-functor composition boundary mismatch");
  ParamFunctor h;
  h.params = std::make_shared<FinCat>(product_category(*f.params, *g.params));
  h.source = f.source;
  h.target = g.target;
  for (const auto& p : f.params->objects)
    for (const auto& q : g.params->objects)
      h.on_obj.emplace(pair_id(p, q), compose_functors(f.on_obj.at(p), g.on_obj.at(q)));
  for (const auto& e : f.params->arrows)
    for (const auto& k : g.params->arrows)
      h.on_arr.emplace(pair_id(e.id, k.id),
                       godement_product(f.on_arr.at(e.id), g.on_arr.at(k.id)));
  return h;
}

ParamFunctor identity_pfunctor(std::shared_ptr<const FinCat> c) {
  ParamFunctor pf;
  pf.params = std::make_shared<FinCat>(terminal_category());
  pf.source = c;
  pf.target = c;
  pf.on_obj.emplace("*", identity_functor(c));
  pf.on_arr.emplace("id_*", identity_nat_trans(pf.on_obj.at("*")));
  return pf;
}

bool pfun_equiv_check(const ParamFunctor& f, const ParamFunctor& fh, const Functor& iota) {
  if (!is_isomorphism(iota)) throw error(errc::not_iso, "iota is not an isomorphism");
  for (const auto& p : f.params->objects)
    if (!functor_equal(f.on_obj.at(p), fh.on_obj.at(iota.on_obj(p)))) return false;
  for (const auto& e : f.params->arrows) {
    const NatTrans& a = f.on_arr.at(e.id);
    const NatTrans& b = fh.on_arr.at(iota.on_arr(e.id));
    if (a.components != b.components) return false;
  }
  return true;
}

}  // namespace lenslab
