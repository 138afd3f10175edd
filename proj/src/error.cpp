#include "netros/error.hpp"

namespace netros {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::Parse: return "Parse";
  case ErrorCode::DanglingReference: return "DanglingReference";
  case ErrorCode::DuplicateId: return "DuplicateId";
  case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
  case ErrorCode::InvalidValue: return "InvalidValue";
  case ErrorCode::NoPath: return "NoPath";
  case ErrorCode::NotInSlice: return "NotInSlice";
  case ErrorCode::UnknownSlice: return "UnknownSlice";
  case ErrorCode::UnknownNode: return "UnknownNode";
  case ErrorCode::OrphanSubscription: return "OrphanSubscription";
  case ErrorCode::CyclicPipeline: return "CyclicPipeline";
  case ErrorCode::UnknownTaskInPipeline: return "UnknownTaskInPipeline";
  case ErrorCode::InvalidWorkload: return "InvalidWorkload";
  case ErrorCode::InconsistentClass: return "InconsistentClass";
  case ErrorCode::Infeasible: return "Infeasible";
  case ErrorCode::TooLarge: return "TooLarge";
  case ErrorCode::NoFeasible: return "NoFeasible";
  case ErrorCode::EmptySamples: return "EmptySamples";
  case ErrorCode::BothZero: return "BothZero";
  case ErrorCode::NoUtilizationSamples: return "NoUtilizationSamples";
  case ErrorCode::IoFailure: return "IoFailure";
  case ErrorCode::MissingPolicy: return "MissingPolicy";
  case ErrorCode::NoRoot: return "NoRoot";
  case ErrorCode::NonConvergence: return "NonConvergence";
  case ErrorCode::InvalidTargets: return "InvalidTargets";
  }
  return "Unknown";
}

} // namespace netros
