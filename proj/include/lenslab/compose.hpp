#ifndef LENSLAB_COMPOSE_HPP
#define LENSLAB_COMPOSE_HPP

#include "lenslab/lens.hpp"

namespace lenslab {

// Sequential composition: run the downstream lens first, feed its request to
// the upstream lens, and append the downstream image of the upstream
// amendment.
AlaLens seq_compose(const AlaLens& k, const AlaLens& l);

// Componentwise composition over product spaces.
AlaLens par_compose(const AlaLens& l1, const AlaLens& l2);

AlaLens identity_lens(std::shared_ptr<const FinCat> c);

// Lens induced by an isomorphism of model spaces: the request is the inverse
// image of v, parameter and amendment are identities.
AlaLens iso_lens(const Functor& iota);

// Canonical structural isomorphisms realized as pair-name rewrites.
Functor reassociator(std::shared_ptr<const FinCat> pq_r, std::shared_ptr<const FinCat> p_qr);
Functor left_unitor(std::shared_ptr<const FinCat> one_p, std::shared_ptr<const FinCat> p);
Functor right_unitor(std::shared_ptr<const FinCat> p_one, std::shared_ptr<const FinCat> p);
Functor braiding_functor(std::shared_ptr<const FinCat> ab, std::shared_ptr<const FinCat> ba);

struct EquivalenceOptions {
  std::size_t iso_search_max_objects = 6;
};

struct EquivalenceResult {
  bool equivalent = false;
  std::vector<Counterexample> counterexamples;  // for the supplied/first iota
};

// Lens equivalence per the skeletal convention: strict equality after
// transporting along a parameter-space isomorphism. With no iota supplied,
// searches all isomorphisms (bounded).
EquivalenceResult check_equivalence(const AlaLens& l, const AlaLens& lh,
                                    const std::optional<Functor>& iota = std::nullopt,
                                    const EquivalenceOptions& opts = {});

// Builds both bracketings of k;l;m and compares them along the canonical
// reassociator.
LawReport check_associativity(const AlaLens& k, const AlaLens& l, const AlaLens& m);

// A policy assigns a lens to a p-functor, keeping the get. May throw
// policy_undefined.
using Policy = std::function<AlaLens(const ParamFunctor&)>;

// Instance-level functoriality of a policy: policy(g1;g2) must be equivalent
// (via the identity of the shared parameter space) to policy(g1);policy(g2).
LawReport check_policy_functoriality(const Policy& policy, const ParamFunctor& g1,
                                     const ParamFunctor& g2);

// Enumerates isomorphism functors a -> b, invoking cb for each; stops early
// if cb returns true. Returns whether any cb returned true.
bool for_each_isomorphism(std::shared_ptr<const FinCat> a, std::shared_ptr<const FinCat> b,
                          const std::function<bool(const Functor&)>& cb,
                          std::size_t max_objects = 6);

}  // namespace lenslab

#endif
