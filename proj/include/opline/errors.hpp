#pragma once

#include <stdexcept>
#include <string>

namespace opline {

// Domain-error codes. Each maps to one violated precondition; the what()
// string carries the offending margin.
enum class errc {
  dimension_mismatch,
  nonfinite_entries,
  empty_subspace,
  not_orthogonal,
  not_skew,
  degenerate_form,
  not_lagrangian,
  not_unitary,
  not_unimodular,
  not_compatible,
  not_symmetric,
  inconsistent_blocks,
  ill_conditioned_chart,
  singular_denominator,
  zero_vector,
  nonpositive_parameter,
  nontrivial_n_infinity,
  bad_epsilon,
  chart_degenerate,
  bad_argument,
};

inline const char* to_string(errc c) {
  switch (c) {
    case errc::dimension_mismatch:    return "dimension-mismatch";
    case errc::nonfinite_entries:     return "nonfinite-entries";
    case errc::empty_subspace:        return "empty-subspace";
    case errc::not_orthogonal:        return "not-orthogonal";
    case errc::not_skew:              return "not-skew";
    case errc::degenerate_form:       return "degenerate-form";
    case errc::not_lagrangian:        return "not-lagrangian";
    case errc::not_unitary:           return "not-unitary";
    case errc::not_unimodular:        return "not-unimodular";
    case errc::not_compatible:        return "not-compatible";
    case errc::not_symmetric:         return "not-symmetric";
    case errc::inconsistent_blocks:   return "inconsistent-blocks";
    case errc::ill_conditioned_chart: return "ill-conditioned-chart";
    case errc::singular_denominator:  return "singular-denominator";
    case errc::zero_vector:           return "zero-vector";
    case errc::nonpositive_parameter: return "nonpositive-parameter";
    case errc::nontrivial_n_infinity: return "nontrivial-N-infinity";
    case errc::bad_epsilon:           return "bad-epsilon";
    case errc::chart_degenerate:      return "chart-degenerate";
    case errc::bad_argument:          return "bad-argument";
  }
  return "unknown";
}

class domain_error : public std::runtime_error {
 public:
  domain_error(errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& detail)
      : std::runtime_error("parse error: " + detail) {}
};

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& detail)
      : std::runtime_error("io error: " + detail) {}
};

[[noreturn]] inline void fail(errc code, const std::string& detail) {
  throw domain_error(code, detail);
}

}  // namespace opline
