#ifndef LENSLAB_ERROR_HPP
#define LENSLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lenslab {

// Structured error kinds surfaced by validators and lens operations.
enum class errc {
  missing_identity,
  missing_composite,
  unit_law_violation,
  associativity_violation,
  dangling_reference,
  not_composable,
  unknown_object,
  unknown_arrow,
  naturality_mismatch,
  interchange_mismatch,
  boundary_mismatch,
  not_iso,
  putget0_violation,
  put_domain_incomplete,
  domain_error,
  dim_mismatch,
  non_finite_gradient,
  schema_mismatch,
  policy_inapplicable,
  no_comparison_delta,
  search_bound_exceeded,
  policy_undefined,
  size_limit_exceeded,
  parse_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

private:
  errc code_;
};

}  // namespace lenslab

#endif
