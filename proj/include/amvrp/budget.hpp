#pragma once

#include <chrono>
#include <optional>

namespace amvrp {

/// Cooperative wall-clock budget. Searches poll expired() between steps.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(double seconds)
      : end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(seconds))) {}

  static Deadline none() { return {}; }
  bool limited() const { return end_.has_value(); }
  bool expired() const { return end_ && Clock::now() >= *end_; }

 private:
  std::optional<Clock::time_point> end_;
};

}  // namespace amvrp
