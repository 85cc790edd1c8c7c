#ifndef LENSLAB_FINCAT_HPP
#define LENSLAB_FINCAT_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lenslab/error.hpp"

namespace lenslab {

struct Arrow {
  std::string id;
  std::string src;
  std::string dst;
};

// A finite category: objects, arrows, identity assignment and a composition
// table that is total exactly on composable pairs. The table is stored in
// diagrammatic order: table[{f,g}] = f;g.
class FinCat {
public:
  std::string name;
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::map<std::string, std::string> identities;                     // object -> arrow id
  std::map<std::pair<std::string, std::string>, std::string> table;  // (f,g) -> f;g

  bool has_object(const std::string& o) const;
  bool has_arrow(const std::string& a) const;
  const Arrow& arrow(const std::string& id) const;
  const std::string& identity(const std::string& obj) const;
  bool is_identity(const std::string& arrow_id) const;

  // Arrows whose source is obj.
  std::vector<std::string> arrows_from(const std::string& obj) const;
  // Arrows obj -> obj2.
  std::vector<std::string> hom(const std::string& from, const std::string& to) const;
};

struct SizeLimits {
  std::size_t max_objects = 64;
  std::size_t max_arrows = 4096;
};

// Checks all category invariants (identities, totality of the table on
// composable pairs, unit laws, associativity) and returns the validated
// value. Throws lenslab::error on any violation.
FinCat validate_category(FinCat raw, const SizeLimits& limits = {});

// Table lookup in diagrammatic order a1;a2. Throws not_composable when
// target(a1) != source(a2).
std::string compose_arrows(const FinCat& c, const std::string& a1, const std::string& a2);

// Canonical pairing used for product categories; reassociators and unitors
// are pure rewrites of these names.
std::string pair_id(const std::string& a, const std::string& b);
std::pair<std::string, std::string> split_pair(const std::string& id);

// Cartesian product with canonical pair identifiers.
FinCat product_category(const FinCat& c1, const FinCat& c2);

// The one-object one-arrow category.
FinCat terminal_category();

// Codiscrete category over the given object names: exactly one arrow between
// every ordered pair of objects (identities included).
FinCat codiscrete_category(const std::vector<std::string>& objs, const std::string& name = "");

struct Functor {
  std::shared_ptr<const FinCat> source;
  std::shared_ptr<const FinCat> target;
  std::map<std::string, std::string> obj_map;
  std::map<std::string, std::string> arr_map;

  const std::string& on_obj(const std::string& o) const;
  const std::string& on_arr(const std::string& a) const;
};

Functor identity_functor(std::shared_ptr<const FinCat> c);
Functor compose_functors(const Functor& f, const Functor& g);
bool functor_equal(const Functor& f, const Functor& g);

// Empty vector iff f preserves sources, targets, identities and composition.
std::vector<std::string> validate_functor(const Functor& f);

bool is_isomorphism(const Functor& f);
Functor invert_functor(const Functor& f);  // throws not_iso

struct NatTrans {
  Functor from;
  Functor to;
  std::map<std::string, std::string> components;  // source object -> target-category arrow

  const std::string& at(const std::string& o) const;
};

NatTrans identity_nat_trans(const Functor& f);
bool nat_trans_equal(const NatTrans& a, const NatTrans& b);

// Empty vector iff components are well-typed and natural.
std::vector<std::string> validate_nat_trans(const NatTrans& n);

// Horizontal composition. Asserts the interchange equality of the two
// composites and throws interchange_mismatch when they differ.
NatTrans godement_product(const NatTrans& alpha, const NatTrans& beta);

// Componentwise vertical composition alpha;beta. Throws not_composable when
// alpha.to != beta.from.
NatTrans vertical_compose(const NatTrans& alpha, const NatTrans& beta);

}  // namespace lenslab

#endif
