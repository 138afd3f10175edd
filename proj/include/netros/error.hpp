#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netros {

enum class ErrorCode {
  Parse,
  DanglingReference,
  DuplicateId,
  DisconnectedGraph,
  InvalidValue,
  NoPath,
  NotInSlice,
  UnknownSlice,
  UnknownNode,
  OrphanSubscription,
  CyclicPipeline,
  UnknownTaskInPipeline,
  InvalidWorkload,
  InconsistentClass,
  Infeasible,
  TooLarge,
  NoFeasible,
  EmptySamples,
  BothZero,
  NoUtilizationSamples,
  IoFailure,
  MissingPolicy,
  NoRoot,
  NonConvergence,
  InvalidTargets,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a stable code so callers (and
/// the CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// A non-fatal invariant breach reported by the validators.
struct Violation {
  ErrorCode code;
  std::string subject;
  std::string message;
};

} // namespace netros
