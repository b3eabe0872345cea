/**
 * @file error.hpp
 * @brief Error type shared by every rwpoly operation.
 *
 * Each failure carries a stable machine-readable code so that the command
 * line runner can map it onto exit statuses and structured diagnostics.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwpoly {

enum class ErrorCode {
  parse_error,
  malformed_chain,
  chain_has_killing,
  undecidable_tail,
  precision_exhausted,
  methods_disagree,
  nonpositive_q,
  identity_mismatch,
  undecided_limit,
  zero_denominator,
  denominator_underflow,
  truncation_too_small,
  eigensolver_failure,
  breakdown,
  not_random_walk_measure,
  spec_inconsistent,
  division_sentinel,
  invalid_argument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::malformed_chain: return "malformed_chain";
    case ErrorCode::chain_has_killing: return "chain_has_killing";
    case ErrorCode::undecidable_tail: return "undecidable_tail";
    case ErrorCode::precision_exhausted: return "precision_exhausted";
    case ErrorCode::methods_disagree: return "methods_disagree";
    case ErrorCode::nonpositive_q: return "nonpositive_q";
    case ErrorCode::identity_mismatch: return "identity_mismatch";
    case ErrorCode::undecided_limit: return "undecided_limit";
    case ErrorCode::zero_denominator: return "zero_denominator";
    case ErrorCode::denominator_underflow: return "denominator_underflow";
    case ErrorCode::truncation_too_small: return "truncation_too_small";
    case ErrorCode::eigensolver_failure: return "eigensolver_failure";
    case ErrorCode::breakdown: return "breakdown";
    case ErrorCode::not_random_walk_measure: return "not_random_walk_measure";
    case ErrorCode::spec_inconsistent: return "spec_inconsistent";
    case ErrorCode::division_sentinel: return "division_sentinel";
    case ErrorCode::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rwpoly
