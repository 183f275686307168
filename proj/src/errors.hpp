#pragma once

#include <stdexcept>
#include <string>

namespace wst {

enum class ErrorCode {
  malformed_tree = 1,
  malformed_input,
  unknown_node,
  not_comparable,
  size_limit,
  infeasible_net,
  empty_measure,
  mismatched_partition,
  invariant_violation,
  usage,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::malformed_tree: return "MalformedTree";
    case ErrorCode::malformed_input: return "MalformedInput";
    case ErrorCode::unknown_node: return "UnknownNode";
    case ErrorCode::not_comparable: return "NotComparable";
    case ErrorCode::size_limit: return "SizeLimit";
    case ErrorCode::infeasible_net: return "InfeasibleNet";
    case ErrorCode::empty_measure: return "EmptyMeasure";
    case ErrorCode::mismatched_partition: return "MismatchedPartition";
    case ErrorCode::invariant_violation: return "InvariantViolation";
    case ErrorCode::usage: return "UsageError";
  }
  return "Error";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace wst
