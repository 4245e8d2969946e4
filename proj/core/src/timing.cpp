#include "reqc/timing.hpp"

#include "reqc/render.hpp"

namespace reqc {

std::optional<std::int64_t> try_to_steps(const Duration& d, const StepConfig& cfg) {
  if (cfg.step_ms < 1) return std::nullopt;
  std::uint64_t factor_ms = 0;
  switch (d.unit) {
    case TimeUnit::Steps:
      if (d.magnitude > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
      return static_cast<std::int64_t>(d.magnitude);
    case TimeUnit::Milliseconds: factor_ms = 1; break;
    case TimeUnit::Seconds: factor_ms = 1000; break;
    case TimeUnit::Minutes: factor_ms = 60000; break;
    case TimeUnit::Hours: factor_ms = 3600000; break;
  }
  std::uint64_t ms = 0;
  if (__builtin_mul_overflow(d.magnitude, factor_ms, &ms)) return std::nullopt;
  auto step = static_cast<std::uint64_t>(cfg.step_ms);
  if (ms % step != 0) return std::nullopt;
  std::uint64_t steps = ms / step;
  if (steps > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
  return static_cast<std::int64_t>(steps);
}

std::int64_t to_steps(const Duration& d, const StepConfig& cfg) {
  if (auto s = try_to_steps(d, cfg)) return *s;
  throw DurationError("duration '" + render_duration(d) + "' is not a whole number of " +
                      std::to_string(cfg.step_ms) + " ms steps");
}

NormalizedResponse normalize(const Response& r, const StepConfig& cfg) {
  NormalizedResponse n;
  n.t_p = to_steps(r.trigger_duration, cfg);
  n.t_d = to_steps(r.delay, cfg);
  n.t_q = to_steps(r.response_duration, cfg);
  if (n.t_p < 1) throw DurationError("trigger duration must be at least one step");
  if (n.t_q < 1) throw DurationError("response duration must be at least one step");
  if (n.t_p > INT64_MAX / 4 || n.t_d > INT64_MAX / 4 || n.t_q > INT64_MAX / 4) {
    throw DurationError("duration is too large");
  }
  n.trigger = r.trigger;
  n.response = r.response;
  return n;
}

}  // namespace reqc
