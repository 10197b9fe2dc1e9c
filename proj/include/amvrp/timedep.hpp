#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace amvrp {

/// Piecewise-constant travel times: K sections, each with its own square
/// matrix. The section is chosen by departure time only, so the data must be
/// non-passing (see enforce_non_passing).
class TravelTimeTensor {
 public:
  TravelTimeTensor() = default;

  /// Single-section tensor valid on [0, +inf).
  explicit TravelTimeTensor(std::vector<std::vector<double>> matrix);

  /// `boundaries` has K+1 strictly increasing entries; `sections` has K
  /// row-major n*n matrices.
  TravelTimeTensor(std::vector<double> boundaries, std::size_t n,
                   std::vector<std::vector<double>> sections);

  std::size_t size() const { return n_; }
  std::size_t section_count() const { return sections_.size(); }
  const std::vector<double>& boundaries() const { return boundaries_; }
  double horizon_begin() const { return boundaries_.front(); }
  double horizon_end() const { return boundaries_.back(); }

  /// Section containing `departure`; a departure on a boundary belongs to the
  /// later section. Out-of-horizon departures are clamped and `clamped` is set.
  std::size_t section_of(double departure, bool* clamped = nullptr) const;

  double at(std::size_t k, std::size_t i, std::size_t j) const { return sections_[k][i * n_ + j]; }
  double& at(std::size_t k, std::size_t i, std::size_t j) { return sections_[k][i * n_ + j]; }

  /// Hot-path lookup without argument checks.
  double time(std::size_t i, std::size_t j, double departure, bool* clamped = nullptr) const {
    if (sections_.size() == 1) {
      if (clamped && departure < boundaries_[0]) *clamped = true;
      return sections_[0][i * n_ + j];
    }
    return sections_[section_of(departure, clamped)][i * n_ + j];
  }

  const std::vector<double>& section(std::size_t k) const { return sections_[k]; }

  bool operator==(const TravelTimeTensor&) const = default;

 private:
  std::vector<double> boundaries_;
  std::size_t n_ = 0;
  std::vector<std::vector<double>> sections_;
  double uniform_step_ = 0.0;  // > 0 when boundaries are equally spaced
};

/// Travel time for i -> j departing at `departure`. Throws on i == j or
/// out-of-range ids.
double lookup(const TravelTimeTensor& tensor, int i, int j, double departure,
              bool* clamped = nullptr);

/// Raises later-section entries (never lowers any) until arrival time is
/// non-decreasing in departure time for every pair. Idempotent.
TravelTimeTensor enforce_non_passing(const TravelTimeTensor& tensor);

/// Counts (i, j, k) where crossing from section k to k+1 lets a later
/// departure arrive earlier.
std::size_t count_passing_violations(const TravelTimeTensor& tensor);

/// Normalised travel-time multipliers sampled over the day.
struct TimeProfile {
  std::vector<std::pair<double, double>> samples;  // (time of day [s], scaler)
  double base_time = 1.0;

  /// Step interpolation: scaler of the last sample at or before `t`.
  double scaler_at(double t) const;
};

using ClusterPair = std::pair<int, int>;

struct ProfileSet {
  std::map<ClusterPair, TimeProfile> between_clusters;
  // Optional per location-pair override, used inside a cluster.
  std::map<std::pair<int, int>, TimeProfile> per_pair;
};

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// t_ijk = static_time(i, j) * scaler(profile(cluster(i), cluster(j)), section k start).
/// `horizon` is [begin, end) and must be a multiple of `step`. The result is
/// passed through enforce_non_passing.
TravelTimeTensor build_from_profiles(const std::vector<std::vector<double>>& static_time,
                                     const std::vector<int>& cluster_of,
                                     const ProfileSet& profiles, double step,
                                     double horizon_begin = 0.0,
                                     double horizon_end = 86400.0);

}  // namespace amvrp
