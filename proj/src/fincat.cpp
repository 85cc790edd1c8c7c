#include "lenslab/fincat.hpp"

#include <algorithm>

namespace lenslab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::missing_identity: return "MissingIdentity";
    case errc::missing_composite: return "MissingComposite";
    case errc::unit_law_violation: return "UnitLawViolation";
    case errc::associativity_violation: return "AssociativityViolation";
    case errc::dangling_reference: return "DanglingReference";
    case errc::not_composable: return "NotComposable";
    case errc::unknown_object: return "UnknownObject";
    case errc::unknown_arrow: return "UnknownArrow";
    case errc::naturality_mismatch: return "NaturalityMismatch";
    case errc::interchange_mismatch: return "InterchangeMismatch";
    case errc::boundary_mismatch: return "BoundaryMismatch";
    case errc::not_iso: return "NotIso";
    case errc::putget0_violation: return "PutgetZeroViolation";
    case errc::put_domain_incomplete: return "PutDomainIncomplete";
    case errc::domain_error: return "DomainError";
    case errc::dim_mismatch: return "DimMismatch";
    case errc::non_finite_gradient: return "NonFiniteGradient";
    case errc::schema_mismatch: return "SchemaMismatch";
    case errc::policy_inapplicable: return "PolicyInapplicable";
    case errc::no_comparison_delta: return "NoComparisonDelta";
    case errc::search_bound_exceeded: return "SearchBoundExceeded";
    case errc::policy_undefined: return "PolicyUndefined";
    case errc::size_limit_exceeded: return "SizeLimitExceeded";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

bool FinCat::has_object(const std::string& o) const {
  return std::find(objects.begin(), objects.end(), o) != objects.end();
}

bool FinCat::has_arrow(const std::string& a) const {
  return std::any_of(arrows.begin(), arrows.end(), [&](const Arrow& x) { return x.id == a; });
}

const Arrow& FinCat::arrow(const std::string& id) const {
  for (const auto& a : arrows)
    if (a.id == id) return a;
  throw error(errc::unknown_arrow, "no arrow '" + id + "' in category " + name);
}

const std::string& FinCat::identity(const std::string& obj) const {
  auto it = identities.find(obj);
  if (it == identities.end())
    throw error(errc::missing_identity, "object '" + obj + "' in category " + name);
  return it->second;
}

bool FinCat::is_identity(const std::string& arrow_id) const {
  const Arrow& a = arrow(arrow_id);
  auto it = identities.find(a.src);
  return it != identities.end() && it->second == arrow_id;
}

std::vector<std::string> FinCat::arrows_from(const std::string& obj) const {
  std::vector<std::string> out;
  for (const auto& a : arrows)
    if (a.src == obj) out.push_back(a.id);
  return out;
}

std::vector<std::string> FinCat::hom(const std::string& from, const std::string& to) const {
  std::vector<std::string> out;
  for (const auto& a : arrows)
    if (a.src == from && a.dst == to) out.push_back(a.id);
  return out;
}

std::string compose_arrows(const FinCat& c, const std::string& a1, const std::string& a2) {
  const Arrow& f = c.arrow(a1);
  const Arrow& g = c.arrow(a2);
  if (f.dst != g.src)
    throw error(errc::not_composable,
                "'" + a1 + "' (-> " + f.dst + ") then '" + a2 + "' (" + g.src + " ->)");
  auto it = c.table.find({a1, a2});
  if (it == c.table.end())
    throw error(errc::missing_composite, "(" + a1 + ";" + a2 + ") in category " + c.name);
  return it->second;
}

FinCat validate_category(FinCat raw, const SizeLimits& limits) {
  const FinCat& c = raw;
  if (c.objects.size() > limits.max_objects || c.arrows.size() > limits.max_arrows)
    throw error(errc::size_limit_exceeded,
                "category " + c.name + " exceeds the exhaustive-check bound");

  std::set<std::string> oset(c.objects.begin(), c.objects.end());
  if (oset.size() != c.objects.size())
    throw error(errc::dangling_reference, "duplicate object names in " + c.name);
  std::set<std::string> aset;
  for (const auto& a : c.arrows) {
    if (!aset.insert(a.id).second)
      throw error(errc::dangling_reference, "duplicate arrow id '" + a.id + "'");
    if (!oset.count(a.src))
      throw error(errc::dangling_reference, "arrow '" + a.id + "' has unknown source " + a.src);
    if (!oset.count(a.dst))
      throw error(errc::dangling_reference, "arrow '" + a.id + "' has unknown target " + a.dst);
  }

  for (const auto& o : c.objects) {
    auto it = c.identities.find(o);
    if (it == c.identities.end())
      throw error(errc::missing_identity, "object '" + o + "' in " + c.name);
    if (!aset.count(it->second))
      throw error(errc::dangling_reference, "identity of '" + o + "' names unknown arrow");
    const Arrow& ida = c.arrow(it->second);
    if (ida.src != o || ida.dst != o)
      throw error(errc::missing_identity,
                  "identity of '" + o + "' is not an endo-arrow on it");
  }
  for (const auto& [o, a] : c.identities)
    if (!oset.count(o))
      throw error(errc::dangling_reference, "identity entry for unknown object '" + o + "'");

  // Table totality and well-typedness.
  for (const auto& f : c.arrows)
    for (const auto& g : c.arrows) {
      auto it = c.table.find({f.id, g.id});
      if (f.dst == g.src) {
        if (it == c.table.end())
          throw error(errc::missing_composite, "(" + f.id + ";" + g.id + ") in " + c.name);
        if (!aset.count(it->second))
          throw error(errc::dangling_reference,
                      "composite (" + f.id + ";" + g.id + ") names unknown arrow");
        const Arrow& h = c.arrow(it->second);
        if (h.src != f.src || h.dst != g.dst)
          throw error(errc::missing_composite,
                      "composite (" + f.id + ";" + g.id + ") has wrong endpoints");
      } else if (it != c.table.end()) {
        throw error(errc::not_composable,
                    "table entry (" + f.id + ";" + g.id + ") for a non-composable pair");
      }
    }

  // Unit laws.
  for (const auto& f : c.arrows) {
    if (c.table.at({c.identity(f.src), f.id}) != f.id)
      throw error(errc::unit_law_violation, "id;" + f.id + " != " + f.id);
    if (c.table.at({f.id, c.identity(f.dst)}) != f.id)
      throw error(errc::unit_law_violation, f.id + ";id != " + f.id);
  }

  // Associativity over all composable triples.
  for (const auto& f : c.arrows)
    for (const auto& g : c.arrows) {
      if (f.dst != g.src) continue;
      const std::string fg = c.table.at({f.id, g.id});
      for (const auto& h : c.arrows) {
        if (g.dst != h.src) continue;
        const std::string gh = c.table.at({g.id, h.id});
        if (c.table.at({fg, h.id}) != c.table.at({f.id, gh}))
          throw error(errc::associativity_violation,
                      "(" + f.id + ";" + g.id + ");" + h.id + " != " + f.id + ";(" + g.id + ";" +
                          h.id + ")");
      }
    }

  return raw;
}

std::string pair_id(const std::string& a, const std::string& b) { return "(" + a + "|" + b + ")"; }

std::pair<std::string, std::string> split_pair(const std::string& id) {
  if (id.size() < 3 || id.front() != '(' || id.back() != ')')
    throw error(errc::parse_error, "not a canonical pair id: " + id);
  int depth = 0;
  for (std::size_t i = 1; i + 1 < id.size(); ++i) {
    char ch = id[i];
    if (ch == '(') ++depth;
    else if (ch == ')') --depth;
    else if (ch == '|' && depth == 0)
      return {id.substr(1, i - 1), id.substr(i + 1, id.size() - i - 2)};
  }
  throw error(errc::parse_error, "not a canonical pair id: " + id);
}

FinCat product_category(const FinCat& c1, const FinCat& c2) {
  FinCat p;
  p.name = pair_id(c1.name.empty() ? "?" : c1.name, c2.name.empty() ? "?" : c2.name);
  for (const auto& o1 : c1.objects)
    for (const auto& o2 : c2.objects) p.objects.push_back(pair_id(o1, o2));
  for (const auto& a1 : c1.arrows)
    for (const auto& a2 : c2.arrows)
      p.arrows.push_back({pair_id(a1.id, a2.id), pair_id(a1.src, a2.src), pair_id(a1.dst, a2.dst)});
  for (const auto& o1 : c1.objects)
    for (const auto& o2 : c2.objects)
      p.identities[pair_id(o1, o2)] = pair_id(c1.identity(o1), c2.identity(o2));
  for (const auto& f1 : c1.arrows)
    for (const auto& f2 : c2.arrows)
      for (const auto& g1 : c1.arrows) {
        if (f1.dst != g1.src) continue;
        for (const auto& g2 : c2.arrows) {
          if (f2.dst != g2.src) continue;
          p.table[{pair_id(f1.id, f2.id), pair_id(g1.id, g2.id)}] =
              pair_id(c1.table.at({f1.id, g1.id}), c2.table.at({f2.id, g2.id}));
        }
      }
  return p;
}

FinCat terminal_category() {
  FinCat t;
  t.name = "1";
  t.objects = {"*"};
  t.arrows = {{"id_*", "*", "*"}};
  t.identities["*"] = "id_*";
  t.table[{"id_*", "id_*"}] = "id_*";
  return t;
}

FinCat codiscrete_category(const std::vector<std::string>& objs, const std::string& name) {
  FinCat c;
  c.name = name;
  c.objects = objs;
  auto aid = [](const std::string& x, const std::string& y) { return "<" + x + ">" + y; };
  for (const auto& x : objs)
    for (const auto& y : objs) c.arrows.push_back({aid(x, y), x, y});
  for (const auto& x : objs) c.identities[x] = aid(x, x);
  for (const auto& x : objs)
    for (const auto& y : objs)
      for (const auto& z : objs) c.table[{aid(x, y), aid(y, z)}] = aid(x, z);
  return c;
}

const std::string& Functor::on_obj(const std::string& o) const {
  auto it = obj_map.find(o);
  if (it == obj_map.end()) throw error(errc::unknown_object, "functor has no entry for '" + o + "'");
  return it->second;
}

const std::string& Functor::on_arr(const std::string& a) const {
  auto it = arr_map.find(a);
  if (it == arr_map.end()) throw error(errc::unknown_arrow, "functor has no entry for '" + a + "'");
  return it->second;
}

Functor identity_functor(std::shared_ptr<const FinCat> c) {
  Functor f;
  f.source = c;
  f.target = c;
  for (const auto& o : c->objects) f.obj_map[o] = o;
  for (const auto& a : c->arrows) f.arr_map[a.id] = a.id;
  return f;
}

Functor compose_functors(const Functor& f, const Functor& g) {
  if (f.target.get() != g.source.get() && f.target->name != g.source->name)
    throw error(errc::boundary_mismatch, "functor composition boundary mismatch");
  Functor h;
  h.source = f.source;
  h.target = g.target;
  for (const auto& [o, fo] : f.obj_map) h.obj_map[o] = g.on_obj(fo);
  for (const auto& [a, fa] : f.arr_map) h.arr_map[a] = g.on_arr(fa);
  return h;
}

bool functor_equal(const Functor& f, const Functor& g) {
  return f.obj_map == g.obj_map && f.arr_map == g.arr_map;
}

std::vector<std::string> validate_functor(const Functor& f) {
  std::vector<std::string> issues;
  const FinCat& s = *f.source;
  const FinCat& t = *f.target;
  for (const auto& o : s.objects) {
    auto it = f.obj_map.find(o);
    if (it == f.obj_map.end()) {
      issues.push_back("no image for object " + o);
      continue;
    }
    if (!t.has_object(it->second))
      issues.push_back("object " + o + " maps to unknown " + it->second);
  }
  for (const auto& a : s.arrows) {
    auto it = f.arr_map.find(a.id);
    if (it == f.arr_map.end()) {
      issues.push_back("no image for arrow " + a.id);
      continue;
    }
    if (!t.has_arrow(it->second)) {
      issues.push_back("arrow " + a.id + " maps to unknown " + it->second);
      continue;
    }
    const Arrow& fa = t.arrow(it->second);
    if (f.obj_map.count(a.src) && fa.src != f.obj_map.at(a.src))
      issues.push_back("source not preserved at " + a.id);
    if (f.obj_map.count(a.dst) && fa.dst != f.obj_map.at(a.dst))
      issues.push_back("target not preserved at " + a.id);
  }
  if (issues.empty()) {
    for (const auto& o : s.objects)
      if (f.arr_map.at(s.identity(o)) != t.identity(f.obj_map.at(o)))
        issues.push_back("identity not preserved at " + o);
    for (const auto& a : s.arrows)
      for (const auto& b : s.arrows) {
        if (a.dst != b.src) continue;
        const std::string lhs = f.arr_map.at(s.table.at({a.id, b.id}));
        const std::string rhs = t.table.at({f.arr_map.at(a.id), f.arr_map.at(b.id)});
        if (lhs != rhs)
          issues.push_back("composition not preserved at (" + a.id + ";" + b.id + ")");
      }
  }
  return issues;
}

bool is_isomorphism(const Functor& f) {
  if (!validate_functor(f).empty()) return false;
  std::set<std::string> oimg, aimg;
  for (const auto& [o, fo] : f.obj_map)
    if (!oimg.insert(fo).second) return false;
  for (const auto& [a, fa] : f.arr_map)
    if (!aimg.insert(fa).second) return false;
  return oimg.size() == f.target->objects.size() && aimg.size() == f.target->arrows.size() &&
         f.obj_map.size() == f.source->objects.size() &&
         f.arr_map.size() == f.source->arrows.size();
}

Functor invert_functor(const Functor& f) {
  if (!is_isomorphism(f)) throw error(errc::not_iso, "functor is not an isomorphism");
  Functor g;
  g.source = f.target;
  g.target = f.source;
  for (const auto& [o, fo] : f.obj_map) g.obj_map[fo] = o;
  for (const auto& [a, fa] : f.arr_map) g.arr_map[fa] = a;
  return g;
}

const std::string& NatTrans::at(const std::string& o) const {
  auto it = components.find(o);
  if (it == components.end())
    throw error(errc::unknown_object, "transformation has no component at '" + o + "'");
  return it->second;
}

NatTrans identity_nat_trans(const Functor& f) {
  NatTrans n;
  n.from = f;
  n.to = f;
  for (const auto& o : f.source->objects) n.components[o] = f.target->identity(f.on_obj(o));
  return n;
}

bool nat_trans_equal(const NatTrans& a, const NatTrans& b) {
  return a.components == b.components && functor_equal(a.from, b.from) &&
         functor_equal(a.to, b.to);
}

std::vector<std::string> validate_nat_trans(const NatTrans& n) {
  std::vector<std::string> issues;
  const FinCat& s = *n.from.source;
  const FinCat& t = *n.from.target;
  for (const auto& o : s.objects) {
    auto it = n.components.find(o);
    if (it == n.components.end()) {
      issues.push_back("no component at " + o);
      continue;
    }
    const Arrow& c = t.arrow(it->second);
    if (c.src != n.from.on_obj(o)) issues.push_back("component at " + o + " has wrong source");
    if (c.dst != n.to.on_obj(o)) issues.push_back("component at " + o + " has wrong target");
  }
  if (issues.empty())
    for (const auto& u : s.arrows) {
      const std::string lhs = t.table.at({n.components.at(u.src), n.to.on_arr(u.id)});
      const std::string rhs = t.table.at({n.from.on_arr(u.id), n.components.at(u.dst)});
      if (lhs != rhs) issues.push_back("naturality fails at " + u.id);
    }
  return issues;
}

NatTrans godement_product(const NatTrans& alpha, const NatTrans& beta) {
  const Functor& g = beta.from;        // G : B -> C
  const Functor& gp = beta.to;         // G' : B -> C
  const Functor& fp = alpha.to;        // F' : A -> B
  const Functor& f = alpha.from;       // F : A -> B
  const FinCat& c = *g.target;
  NatTrans out;
  out.from = compose_functors(f, g);
  out.to = compose_functors(fp, gp);
  for (const auto& o : f.source->objects) {
    const std::string one = c.table.at({g.on_arr(alpha.at(o)), beta.at(fp.on_obj(o))});
    const std::string other = c.table.at({beta.at(f.on_obj(o)), gp.on_arr(alpha.at(o))});
    if (one != other)
      throw error(errc::interchange_mismatch,
                  "at object " + o + ": " + one + " != " + other);
    out.components[o] = one;
  }
  return out;
}

NatTrans vertical_compose(const NatTrans& alpha, const NatTrans& beta) {
  if (!functor_equal(alpha.to, beta.from))
    throw error(errc::not_composable, "vertical composition boundary mismatch");
  NatTrans out;
  out.from = alpha.from;
  out.to = beta.to;
  const FinCat& t = *alpha.from.target;
  for (const auto& [o, a] : alpha.components)
    out.components[o] = t.table.at({a, beta.at(o)});
  return out;
}

}  // namespace lenslab
