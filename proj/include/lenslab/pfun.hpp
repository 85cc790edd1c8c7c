#ifndef LENSLAB_PFUN_HPP
#define LENSLAB_PFUN_HPP

#include "lenslab/fincat.hpp"

namespace lenslab {

// A parameterized functor P -> [S,T]: one functor per parameter object and
// one natural transformation per parameter delta.
struct ParamFunctor {
  std::shared_ptr<const FinCat> params;
  std::shared_ptr<const FinCat> source;
  std::shared_ptr<const FinCat> target;
  std::map<std::string, Functor> on_obj;
  std::map<std::string, NatTrans> on_arr;

  const Functor& at(const std::string& p) const;
  const NatTrans& along(const std::string& e) const;
};

// Functoriality in P plus per-entry functor/naturality checks; empty iff valid.
std::vector<std::string> validate_pfunctor(const ParamFunctor& pf);

// S_p for an object s: on_obj(p).obj_map(s).
std::string pfun_get(const ParamFunctor& pf, const std::string& p, const std::string& s);

// The diagonal u_e = on_arr(e)[s] ; get_{p'}(u). Asserts the naturality
// square, throwing naturality_mismatch when the two bracketings differ.
std::string pfun_diag(const ParamFunctor& pf, const std::string& e, const std::string& u);

// Sequential composition over P x Q; on_arr is the Godement product.
ParamFunctor pfun_compose(const ParamFunctor& f, const ParamFunctor& g);

// Identity p-functor over the terminal parameter category.
ParamFunctor identity_pfunctor(std::shared_ptr<const FinCat> c);

// Strict equality after transport along the parameter isomorphism iota.
bool pfun_equiv_check(const ParamFunctor& f, const ParamFunctor& fh, const Functor& iota);

}  // namespace lenslab

#endif
