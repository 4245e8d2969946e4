#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "reqc/ast.hpp"

namespace reqc {

struct StepConfig {
  std::int64_t step_ms = 10;
};

/// Length of `d` in simulation steps, or nullopt when it is not a whole
/// number of steps (or overflows).
std::optional<std::int64_t> try_to_steps(const Duration& d, const StepConfig& cfg);

/// As try_to_steps, throwing DurationError with a readable message instead.
std::int64_t to_steps(const Duration& d, const StepConfig& cfg);

class DurationError : public Error {
 public:
  using Error::Error;
};

/// A response pattern with all durations expressed in steps.
struct NormalizedResponse {
  std::int64_t t_p = 1;
  std::int64_t t_d = 0;
  std::int64_t t_q = 1;
  Expr trigger;
  Expr response;

  std::int64_t shift() const { return t_p + t_d + t_q; }
};

/// Throws DurationError on non-divisible durations or on zero trigger and
/// response durations.
NormalizedResponse normalize(const Response& r, const StepConfig& cfg);

}  // namespace reqc
