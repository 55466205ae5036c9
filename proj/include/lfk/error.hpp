#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfk {

// Every failure the library can report. Mathematical rejections (not_lspace_link,
// check violations) are ordinary results at the CLI level, not bugs.
enum class errc {
  invalid_argument,
  coset_mismatch,
  not_divisible,
  half_integer_exponent,
  zero_denominator,
  invalid_expansion,
  invalid_link,
  unsupported_form,
  incomplete_labels,
  invalid_labeling,
  dimension_unsupported,
  odd_grading,
  truncation_unstable,
  no_valid_extension,
  coset_violation,
  region_unstable,
  not_lspace_link,
  ambiguous_sign,
  unsupported_components,
  hypothesis_not_met,
  parse_error,
};

inline std::string_view errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::coset_mismatch: return "CosetMismatch";
    case errc::not_divisible: return "NotDivisible";
    case errc::half_integer_exponent: return "HalfIntegerExponent";
    case errc::zero_denominator: return "ZeroDenominator";
    case errc::invalid_expansion: return "InvalidExpansion";
    case errc::invalid_link: return "InvalidLink";
    case errc::unsupported_form: return "UnsupportedForm";
    case errc::incomplete_labels: return "IncompleteLabels";
    case errc::invalid_labeling: return "InvalidLabeling";
    case errc::dimension_unsupported: return "DimensionUnsupported";
    case errc::odd_grading: return "OddGrading";
    case errc::truncation_unstable: return "TruncationUnstable";
    case errc::no_valid_extension: return "NoValidExtension";
    case errc::coset_violation: return "CosetViolation";
    case errc::region_unstable: return "RegionUnstable";
    case errc::not_lspace_link: return "NotLSpaceLink";
    case errc::ambiguous_sign: return "AmbiguousSign";
    case errc::unsupported_components: return "UnsupportedComponents";
    case errc::hypothesis_not_met: return "HypothesisNotMet";
    case errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace lfk
