#include "lenslab/compose.hpp"

#include <algorithm>

namespace lenslab {

AlaLens seq_compose(const AlaLens& k, const AlaLens& l) {
  if (k.get.target->name != l.get.source->name || k.get.target->objects != l.get.source->objects)
    throw error(errc::boundary_mismatch, "sequential composition boundary mismatch");
  ParamFunctor get = pfun_compose(k.get, l.get);
  AlaLens kk = k, ll = l;
  return make_lens(get, [kk, ll](const std::string& pq, const std::string& A,
                                 const std::string& w) {
    auto [p, q] = split_pair(pq);
    const std::string a_p = pfun_get(kk.get, p, A);
    // Downstream lens first, then feed its request upstream.
    PutResult down = ll.put(q, a_p, w);
    PutResult up = kk.put(p, A, down.u);
    const std::string q2 = ll.params().arrow(down.e).dst;
    const std::string amendment = compose_arrows(
        ll.target(), down.amendment, ll.get.at(q2).on_arr(up.amendment));
    return PutResult{pair_id(up.e, down.e), up.u, amendment};
  });
}

static Functor product_functor(const Functor& f1, const Functor& f2,
                               std::shared_ptr<const FinCat> src,
                               std::shared_ptr<const FinCat> tgt) {
  Functor f;
  f.source = src;
  f.target = tgt;
  for (const auto& o : src->objects) {
    auto [o1, o2] = split_pair(o);
    f.obj_map[o] = pair_id(f1.on_obj(o1), f2.on_obj(o2));
  }
  for (const auto& a : src->arrows) {
    auto [a1, a2] = split_pair(a.id);
    f.arr_map[a.id] = pair_id(f1.on_arr(a1), f2.on_arr(a2));
  }
  return f;
}

AlaLens par_compose(const AlaLens& l1, const AlaLens& l2) {
  ParamFunctor get;
  get.params = std::make_shared<FinCat>(product_category(l1.params(), l2.params()));
  get.source = std::make_shared<FinCat>(product_category(l1.source(), l2.source()));
  get.target = std::make_shared<FinCat>(product_category(l1.target(), l2.target()));
  for (const auto& p : get.params->objects) {
    auto [p1, p2] = split_pair(p);
    get.on_obj.emplace(p, product_functor(l1.get.at(p1), l2.get.at(p2), get.source, get.target));
  }
  for (const auto& e : get.params->arrows) {
    auto [e1, e2] = split_pair(e.id);
    const NatTrans& n1 = l1.get.along(e1);
    const NatTrans& n2 = l2.get.along(e2);
    NatTrans n;
    n.from = get.on_obj.at(e.src);
    n.to = get.on_obj.at(e.dst);
    for (const auto& s : get.source->objects) {
      auto [s1, s2] = split_pair(s);
      n.components[s] = pair_id(n1.at(s1), n2.at(s2));
    }
    get.on_arr.emplace(e.id, n);
  }
  AlaLens a = l1, b = l2;
  return make_lens(get, [a, b](const std::string& p, const std::string& S, const std::string& v) {
    auto [p1, p2] = split_pair(p);
    auto [s1, s2] = split_pair(S);
    auto [v1, v2] = split_pair(v);
    PutResult r1 = a.put(p1, s1, v1);
    PutResult r2 = b.put(p2, s2, v2);
    return PutResult{pair_id(r1.e, r2.e), pair_id(r1.u, r2.u),
                     pair_id(r1.amendment, r2.amendment)};
  });
}

AlaLens identity_lens(std::shared_ptr<const FinCat> c) {
  ParamFunctor get = identity_pfunctor(c);
  auto cat = c;
  return make_lens(get, [cat](const std::string&, const std::string&, const std::string& v) {
    return PutResult{"id_*", v, cat->identity(cat->arrow(v).dst)};
  });
}

AlaLens iso_lens(const Functor& iota) {
  Functor inv = invert_functor(iota);  // throws not_iso
  ParamFunctor get;
  get.params = std::make_shared<FinCat>(terminal_category());
  get.source = iota.source;
  get.target = iota.target;
  get.on_obj.emplace("*", iota);
  get.on_arr.emplace("id_*", identity_nat_trans(iota));
  auto tgt = iota.target;
  return make_lens(get, [inv, tgt](const std::string&, const std::string&, const std::string& v) {
    return PutResult{"id_*", inv.on_arr(v), tgt->identity(tgt->arrow(v).dst)};
  });
}

static Functor rewrite_functor(std::shared_ptr<const FinCat> src, std::shared_ptr<const FinCat> tgt,
                               const std::function<std::string(const std::string&)>& rw) {
  Functor f;
  f.source = src;
  f.target = tgt;
  for (const auto& o : src->objects) f.obj_map[o] = rw(o);
  for (const auto& a : src->arrows) f.arr_map[a.id] = rw(a.id);
  if (!is_isomorphism(f))
    throw error(errc::not_iso, "canonical rewrite is not an isomorphism between these categories");
  return f;
}

Functor reassociator(std::shared_ptr<const FinCat> pq_r, std::shared_ptr<const FinCat> p_qr) {
  return rewrite_functor(pq_r, p_qr, [](const std::string& id) {
    auto [ab, c] = split_pair(id);
    auto [a, b] = split_pair(ab);
    return pair_id(a, pair_id(b, c));
  });
}

Functor left_unitor(std::shared_ptr<const FinCat> one_p, std::shared_ptr<const FinCat> p) {
  return rewrite_functor(one_p, p, [](const std::string& id) { return split_pair(id).second; });
}

Functor right_unitor(std::shared_ptr<const FinCat> p_one, std::shared_ptr<const FinCat> p) {
  return rewrite_functor(p_one, p, [](const std::string& id) { return split_pair(id).first; });
}

Functor braiding_functor(std::shared_ptr<const FinCat> ab, std::shared_ptr<const FinCat> ba) {
  return rewrite_functor(ab, ba, [](const std::string& id) {
    auto [a, b] = split_pair(id);
    return pair_id(b, a);
  });
}

static EquivalenceResult equiv_with_iota(const AlaLens& l, const AlaLens& lh,
                                         const Functor& iota) {
  EquivalenceResult res;
  res.equivalent = true;
  auto fail = [&](const std::string& key, const std::string& want, const std::string& got) {
    res.equivalent = false;
    res.counterexamples.push_back({key, want, got});
  };
  if (!pfun_equiv_check(l.get, lh.get, iota)) {
    fail("get", "equal p-functors after iota", "mismatch");
    return res;
  }
  for (const auto& key : put_domain(l)) {
    PutResult r = l.put(key.p, key.S, key.v);
    PutResult rh = lh.put(iota.on_obj(key.p), key.S, key.v);
    const std::string k = "(" + key.p + "," + key.S + "," + key.v + ")";
    if (iota.on_arr(r.e) != rh.e) fail(k + ".upd", iota.on_arr(r.e), rh.e);
    if (r.u != rh.u) fail(k + ".req", r.u, rh.u);
    if (r.amendment != rh.amendment) fail(k + ".self", r.amendment, rh.amendment);
  }
  return res;
}

bool for_each_isomorphism(std::shared_ptr<const FinCat> a, std::shared_ptr<const FinCat> b,
                          const std::function<bool(const Functor&)>& cb,
                          std::size_t max_objects) {
  if (a->objects.size() != b->objects.size() || a->arrows.size() != b->arrows.size())
    return false;
  if (a->objects.size() > max_objects)
    throw error(errc::search_bound_exceeded,
                "parameter space too large for isomorphism search; supply iota explicitly");

  std::vector<std::string> perm = b->objects;
  std::sort(perm.begin(), perm.end());
  do {
    Functor f;
    f.source = a;
    f.target = b;
    for (std::size_t i = 0; i < a->objects.size(); ++i) f.obj_map[a->objects[i]] = perm[i];
    // Assign arrow images hom-set by hom-set with backtracking.
    std::set<std::string> used;
    std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
      if (i == a->arrows.size()) {
        if (!is_isomorphism(f)) return false;
        return cb(f);
      }
      const Arrow& arr = a->arrows[i];
      for (const auto& cand :
           b->hom(f.obj_map.at(arr.src), f.obj_map.at(arr.dst))) {
        if (used.count(cand)) continue;
        if (a->is_identity(arr.id) != b->is_identity(cand)) continue;
        f.arr_map[arr.id] = cand;
        used.insert(cand);
        if (assign(i + 1)) return true;
        used.erase(cand);
        f.arr_map.erase(arr.id);
      }
      return false;
    };
    if (assign(0)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

EquivalenceResult check_equivalence(const AlaLens& l, const AlaLens& lh,
                                    const std::optional<Functor>& iota,
                                    const EquivalenceOptions& opts) {
  if (l.source().objects != lh.source().objects || l.target().objects != lh.target().objects)
    throw error(errc::boundary_mismatch, "lenses do not share model spaces");
  if (iota) {
    if (!is_isomorphism(*iota)) throw error(errc::not_iso, "supplied iota is not an isomorphism");
    return equiv_with_iota(l, lh, *iota);
  }
  EquivalenceResult best;
  bool found = for_each_isomorphism(
      l.get.params, lh.get.params,
      [&](const Functor& cand) {
        EquivalenceResult r = equiv_with_iota(l, lh, cand);
        if (r.equivalent) {
          best = r;
          return true;
        }
        if (best.counterexamples.empty()) best = r;
        return false;
      },
      opts.iso_search_max_objects);
  if (!found && best.counterexamples.empty())
    best.counterexamples.push_back({"iota", "an isomorphism of parameter spaces", "none found"});
  return best;
}

LawReport check_associativity(const AlaLens& k, const AlaLens& l, const AlaLens& m) {
  LawReport rep{"Associativity", {}};
  AlaLens left = seq_compose(seq_compose(k, l), m);
  AlaLens right = seq_compose(k, seq_compose(l, m));
  Functor iota = reassociator(left.get.params, right.get.params);
  EquivalenceResult r = check_equivalence(left, right, iota);
  rep.counterexamples = r.counterexamples;
  return rep;
}

LawReport check_policy_functoriality(const Policy& policy, const ParamFunctor& g1,
                                     const ParamFunctor& g2) {
  LawReport rep{"PolicyFunctoriality", {}};
  ParamFunctor composed_get = pfun_compose(g1, g2);
  AlaLens long_lens = policy(composed_get);
  AlaLens composed_lens = seq_compose(policy(g1), policy(g2));
  Functor iota = identity_functor(long_lens.get.params);
  iota.target = composed_lens.get.params;
  EquivalenceResult r = check_equivalence(long_lens, composed_lens, iota);
  rep.counterexamples = r.counterexamples;
  return rep;
}

}  // namespace lenslab
