#ifndef LENSLAB_LENS_HPP
#define LENSLAB_LENS_HPP

#include <functional>
#include <optional>

#include "lenslab/pfun.hpp"

namespace lenslab {

// put(p, S, v) = (parameter delta e from p, request u from S, amendment from
// target(v)).
struct PutResult {
  std::string e;
  std::string u;
  std::string amendment;

  bool operator==(const PutResult&) const = default;
};

struct PutKey {
  std::string p, S, v;
  auto operator<=>(const PutKey&) const = default;
};

using PutFn = std::function<PutResult(const std::string& p, const std::string& S,
                                      const std::string& v)>;

// An ala-lens: a p-functor get plus a put family. put results are memoized
// and checked for arities and Putget0 at every invocation.
class AlaLens {
public:
  ParamFunctor get;

  AlaLens() = default;
  AlaLens(ParamFunctor g, PutFn put);

  PutResult put(const std::string& p, const std::string& S, const std::string& v) const;

  const FinCat& params() const { return *get.params; }
  const FinCat& source() const { return *get.source; }
  const FinCat& target() const { return *get.target; }

private:
  PutFn put_fn_;
  std::shared_ptr<std::map<PutKey, PutResult>> memo_;
};

struct PutRow {
  std::string p, S, v;
  PutResult result;
};

// Table-backed lens; verifies domain completeness and Putget0 exhaustively at
// construction.
AlaLens make_table_lens(ParamFunctor get, const std::vector<PutRow>& rows);

// Programmatic lens; Putget0 is verified lazily on every invocation.
AlaLens make_lens(ParamFunctor get, PutFn put);

struct Counterexample {
  std::string key;       // (p,S,v)
  std::string expected;
  std::string actual;
};

struct LawReport {
  std::string law;
  std::vector<Counterexample> counterexamples;
  bool pass() const { return counterexamples.empty(); }
  std::string render() const;
};

// Enumerates the admissible put domain of a lens over finite fixtures:
// all (p, S, v) with v an arrow out of S_p.
std::vector<PutKey> put_domain(const AlaLens& lens);

LawReport check_stability(const AlaLens& lens);
LawReport check_putget(const AlaLens& lens);
LawReport check_hippocratic(const AlaLens& lens);
// Diagnostic only; a failure does not affect well-behavedness.
LawReport check_putput(const AlaLens& lens);

// Stability and Putget (the SPg reading).
bool well_behaved(const AlaLens& lens);

}  // namespace lenslab

#endif
