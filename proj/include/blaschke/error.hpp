#pragma once

#include <stdexcept>
#include <string>

namespace blaschke {

// Numeric values are mirrored by the BLASCHKE_E_* constants of the C API.
enum class ErrorCode : int {
  kDimensionMismatch = 10,
  kMetricDegenerate = 11,
  kClusterAmbiguity = 12,
  kDegenerateComplement = 13,
  kCausalType = 14,
  kMissingExactJet = 20,
  kChartBoundary = 21,
  kNonFinite = 22,
  kNonRegular = 30,
  kNotSpaceLike = 31,
  kLiftFailure = 40,
  kFrameDegenerate = 41,
  kAlignment = 50,
  kParameter = 60,
  kUnknownSurface = 61,
  kAmbientConstraint = 62,
  kGridFormat = 70,
  kGridSymmetry = 71,
  kGridConstraint = 72,
  kIo = 80,
  kConfig = 81,
  kRegularityAbort = 90,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace blaschke
