#ifndef LENSLAB_MODELSPACE_HPP
#define LENSLAB_MODELSPACE_HPP

#include <optional>
#include <set>

#include "lenslab/compose.hpp"

namespace lenslab {

// A department value: either a concrete name or a labelled null constrained
// to a nonempty set of admissible names.
struct DeptValue {
  bool known = true;
  std::string name;                    // when known
  std::set<std::string> constraint;    // when unknown

  static DeptValue of(std::string n) { return {true, std::move(n), {}}; }
  static DeptValue unknown(std::set<std::string> c);
  bool operator==(const DeptValue&) const = default;
  auto operator<=>(const DeptValue&) const = default;
  std::string render() const;
};

enum class Schema { A, B, C };  // A: name,expr,dep  B: name,dep  C: name

struct RelRow {
  std::string name;
  std::optional<int> expr;  // schema A only; null means unknown
  std::optional<DeptValue> dep;

  bool operator==(const RelRow&) const = default;
  auto operator<=>(const RelRow&) const = default;
};

struct RelModel {
  Schema schema = Schema::A;
  std::map<std::string, RelRow> rows;  // oid -> row

  bool operator==(const RelModel&) const = default;
  auto operator<=>(const RelModel&) const = default;
  std::string canonical_id() const;
};

// A delta between models over the same schema: a partial injection on oids.
// Attribute changes on kept rows are unconstrained.
struct ModelDelta {
  RelModel from;
  RelModel to;
  std::map<std::string, std::string> kept;  // from-oid -> to-oid, injective

  bool operator==(const ModelDelta&) const = default;
  std::string canonical_id() const;
};

ModelDelta identity_delta(const RelModel& m);
void validate_delta(const ModelDelta& d);
ModelDelta delta_compose(const ModelDelta& d1, const ModelDelta& d2);

// Threshold parameter: "any" or a concrete experience bound.
struct Threshold {
  bool any = true;
  int bound = 0;

  static Threshold any_exp() { return {true, 0}; }
  static Threshold at_least(int b) { return {false, b}; }
  bool operator==(const Threshold&) const = default;
  std::string render() const;
};

struct ViewDef {
  Schema source = Schema::A;
  Schema target = Schema::B;
  std::set<std::string> dept_filter;  // row passes iff dep certainly in this set
  bool thresholded = false;           // additionally expr > theta
  std::vector<Threshold> thresholds;  // parameter list when thresholded
  std::set<std::string> dept_universe;  // dep domain of the source schema

  static ViewDef it_view();           // A -> B, dep in {Testing, ML}
  static ViewDef ml_view();           // B -> C, dep in {ML}
  static ViewDef long_view();         // A -> C, dep in {ML}
  static ViewDef it_view_thresholded(std::vector<Threshold> thetas);
};

// A row is certainly in the view iff its dep is Known and in the filter, or
// Unknown with a constraint contained in the filter; ambiguous rows are
// excluded.
bool row_in_view(const ViewDef& vd, const Threshold& theta, const RelRow& row);

RelModel view_model(const ViewDef& vd, const Threshold& theta, const RelModel& m);
// Delta extension: restriction of kept to rows passing on both sides.
ModelDelta view_delta(const ViewDef& vd, const Threshold& theta_from, const Threshold& theta_to,
                      const ModelDelta& d);

enum class UpdatePolicy { quit, trans, param };
UpdatePolicy parse_policy(const std::string& name);
std::string policy_name(UpdatePolicy p);

struct PolicyPutResult {
  Threshold theta2;
  ModelDelta source_delta;  // src -> src'
  ModelDelta amendment;     // vdelta.to -> view(theta2, src')
};

PolicyPutResult policy_put(UpdatePolicy policy, const ViewDef& vd, const Threshold& theta,
                           const RelModel& src, const ModelDelta& vdelta);

// Shipped parameter list for the thresholded view.
std::vector<Threshold> default_thresholds();

// A view-update scenario over the fixture chain A -> B -> C. For quit/trans
// the update is a C-level delta anchored at the long view; for param it is a
// B-level delta anchored at the thresholded view at "any".
struct Scenario {
  RelModel source;  // schema A
  ModelDelta view_update;
  UpdatePolicy policy = UpdatePolicy::quit;
};

Scenario scenario_w();  // the Mary quit/transfer story
RelModel fixture_model_a();

struct PolicyComparison {
  ModelDelta u_long;
  ModelDelta u_composed;
  bool equal = false;
  std::optional<ModelDelta> comparison;  // refinement delta when unequal
};

// Long-lens put vs composed-lens put on the scenario; when they differ the
// comparison delta intersects labelled-null constraints and must satisfy
// delta_compose(u_long, comparison) == u_composed.
PolicyComparison compare_policies(const Scenario& s);

// Propagates the scenario's C-level update through the composed chain,
// returning the B-level and A-level deltas.
struct ChainPropagation {
  ModelDelta b_delta;
  ModelDelta a_delta;
};
ChainPropagation propagate_composed(UpdatePolicy policy, const RelModel& a,
                                    const ModelDelta& w);

// --- Bridge into the generic lens machinery -------------------------------

// A finite model universe generated from a scenario suite by closing the
// three model spaces under view images, policy puts and delta composition.
class ModelUniverse {
public:
  struct Space;
  std::shared_ptr<const FinCat> cat_a, cat_b, cat_c;
  std::shared_ptr<const FinCat> params_terminal;
  std::shared_ptr<const FinCat> params_theta;  // codiscrete over thresholds (param policy)

  const RelModel& model(const std::string& object_id) const;
  const ModelDelta& delta(const std::string& arrow_id) const;

  // Programmatic ala-lenses over the generated spaces.
  AlaLens lens1(UpdatePolicy policy) const;      // A -> B (IT view)
  AlaLens lens2(UpdatePolicy policy) const;      // B -> C (ML view)
  AlaLens long_lens(UpdatePolicy policy) const;  // A -> C over the terminal params
  AlaLens param_lens() const;                    // A -> B, thresholded IT view

  // Policy callable for check_policy_functoriality: dispatches on the get.
  Policy policy_of(UpdatePolicy policy) const;

  ParamFunctor get1() const;
  ParamFunctor get2() const;

  friend ModelUniverse build_universe(const std::vector<Scenario>& scenarios,
                                      const std::vector<Threshold>& thetas);

private:
  std::shared_ptr<Space> a_, b_, c_;
  std::vector<Threshold> thetas_;
  ParamFunctor make_get(const ViewDef& vd, std::shared_ptr<Space> src,
                        std::shared_ptr<Space> dst, bool thresholded) const;
  AlaLens make_policy_lens(UpdatePolicy policy, const ViewDef& vd, std::shared_ptr<Space> src,
                           std::shared_ptr<Space> dst, bool thresholded) const;
};

ModelUniverse build_universe(const std::vector<Scenario>& scenarios,
                             const std::vector<Threshold>& thetas = {});

// Deterministic generated scenarios for the comparison suite.
std::vector<Scenario> generate_scenarios(UpdatePolicy policy, std::size_t count);

}  // namespace lenslab

#endif
