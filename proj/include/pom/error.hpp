#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pom {

// Every failure surfaces as a PomError carrying one of these codes. The CLI
// maps codes to exit classes; what() always starts with the code name.
enum class PomErrc {
  length_mismatch,
  domain_too_small,
  non_positive_sigma,
  non_finite,
  not_symmetric,
  not_psd,
  invalid_config,
  invalid_epsilon,
  domain_error,
  max_iterations_exceeded,
  grid_too_large,
  degenerate_ratio,
  sample_budget_overflow,
  simplex_violation,
  not_normalized,
  zero_truth,
  duplicate_index,
  index_out_of_range,
  k_out_of_range,
  unknown_family,
};

inline const char* errc_name(PomErrc c) {
  switch (c) {
    case PomErrc::length_mismatch: return "LengthMismatch";
    case PomErrc::domain_too_small: return "DomainTooSmall";
    case PomErrc::non_positive_sigma: return "NonPositiveSigma";
    case PomErrc::non_finite: return "NonFinite";
    case PomErrc::not_symmetric: return "NotSymmetric";
    case PomErrc::not_psd: return "NotPSD";
    case PomErrc::invalid_config: return "InvalidConfig";
    case PomErrc::invalid_epsilon: return "InvalidEpsilon";
    case PomErrc::domain_error: return "DomainError";
    case PomErrc::max_iterations_exceeded: return "MaxIterationsExceeded";
    case PomErrc::grid_too_large: return "GridTooLarge";
    case PomErrc::degenerate_ratio: return "DegenerateRatio";
    case PomErrc::sample_budget_overflow: return "SampleBudgetOverflow";
    case PomErrc::simplex_violation: return "SimplexViolation";
    case PomErrc::not_normalized: return "NotNormalized";
    case PomErrc::zero_truth: return "ZeroTruth";
    case PomErrc::duplicate_index: return "DuplicateIndex";
    case PomErrc::index_out_of_range: return "IndexOutOfRange";
    case PomErrc::k_out_of_range: return "KOutOfRange";
    case PomErrc::unknown_family: return "UnknownFamily";
  }
  return "UnknownError";
}

class PomError : public std::runtime_error {
 public:
  PomError(PomErrc code, const std::string& what_arg,
           std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(errc_name(code)) +
                           (index ? "(" + std::to_string(*index) + ")" : "") +
                           ": " + what_arg),
        code_(code),
        index_(index) {}

  PomErrc code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  PomErrc code_;
  std::optional<std::size_t> index_;
};

}  // namespace pom
