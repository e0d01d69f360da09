#include "blaschke/error.hpp"

namespace blaschke {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kMetricDegenerate: return "metric_degenerate";
    case ErrorCode::kClusterAmbiguity: return "cluster_ambiguity";
    case ErrorCode::kDegenerateComplement: return "degenerate_complement";
    case ErrorCode::kCausalType: return "causal_type";
    case ErrorCode::kMissingExactJet: return "missing_exact_jet";
    case ErrorCode::kChartBoundary: return "chart_boundary";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kNonRegular: return "non_regular";
    case ErrorCode::kNotSpaceLike: return "not_space_like";
    case ErrorCode::kLiftFailure: return "lift_failure";
    case ErrorCode::kFrameDegenerate: return "frame_degenerate";
    case ErrorCode::kAlignment: return "alignment";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kUnknownSurface: return "unknown_surface";
    case ErrorCode::kAmbientConstraint: return "ambient_constraint";
    case ErrorCode::kGridFormat: return "grid_format";
    case ErrorCode::kGridSymmetry: return "grid_symmetry";
    case ErrorCode::kGridConstraint: return "grid_constraint";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kRegularityAbort: return "regularity_abort";
  }
  return "unknown";
}

}  // namespace blaschke
