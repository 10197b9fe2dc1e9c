#include "amvrp/timedep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amvrp {

TravelTimeTensor::TravelTimeTensor(std::vector<std::vector<double>> matrix)
    : boundaries_{0.0, std::numeric_limits<double>::infinity()}, n_(matrix.size()) {
  std::vector<double> flat;
  flat.reserve(n_ * n_);
  for (const auto& row : matrix) {
    if (row.size() != n_) throw std::invalid_argument("travel time matrix must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  sections_.push_back(std::move(flat));
}

TravelTimeTensor::TravelTimeTensor(std::vector<double> boundaries, std::size_t n,
                                   std::vector<std::vector<double>> sections)
    : boundaries_(std::move(boundaries)), n_(n), sections_(std::move(sections)) {
  if (sections_.empty() || boundaries_.size() != sections_.size() + 1)
    throw std::invalid_argument("travel tensor needs K >= 1 sections and K+1 boundaries");
  for (std::size_t k = 0; k + 1 < boundaries_.size(); ++k)
    if (!(boundaries_[k] < boundaries_[k + 1]))
      throw std::invalid_argument("travel tensor boundaries must be strictly increasing");
  for (const auto& s : sections_)
    if (s.size() != n_ * n_) throw std::invalid_argument("travel tensor section has wrong size");
  const std::size_t k = sections_.size();
  if (k > 1 && std::isfinite(boundaries_.back())) {
    const double step = (boundaries_.back() - boundaries_.front()) / static_cast<double>(k);
    bool uniform = true;
    for (std::size_t s = 0; s <= k && uniform; ++s)
      uniform = std::abs(boundaries_[s] - (boundaries_.front() + step * static_cast<double>(s))) <=
                1e-9 * std::max(1.0, std::abs(boundaries_[s]));
    if (uniform) uniform_step_ = step;
  }
}

std::size_t TravelTimeTensor::section_of(double departure, bool* clamped) const {
  const std::size_t k = sections_.size();
  if (departure < boundaries_.front()) {
    if (clamped) *clamped = true;
    return 0;
  }
  if (departure >= boundaries_.back()) {
    if (clamped) *clamped = true;
    return k - 1;
  }
  if (k == 1) return 0;
  if (uniform_step_ > 0.0) {
    auto s = static_cast<std::size_t>((departure - boundaries_.front()) / uniform_step_);
    s = std::min(s, k - 1);
    while (s + 1 < k && departure >= boundaries_[s + 1]) ++s;
    while (s > 0 && departure < boundaries_[s]) --s;
    return s;
  }
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), departure);
  return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

double lookup(const TravelTimeTensor& tensor, int i, int j, double departure, bool* clamped) {
  const auto n = static_cast<int>(tensor.size());
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("travel time lookup: bad id");
  if (i == j) throw std::invalid_argument("travel time lookup: origin equals destination");
  return tensor.time(static_cast<std::size_t>(i), static_cast<std::size_t>(j), departure, clamped);
}

// Departures approach the next boundary arbitrarily closely, so the latest
// arrival from section k is boundary(k+1) + t(k); the earliest arrival from
// section k+1 is boundary(k+1) + t(k+1). The minimal repair is therefore a
// running maximum over sections.
TravelTimeTensor enforce_non_passing(const TravelTimeTensor& tensor) {
  TravelTimeTensor out = tensor;
  const std::size_t n = out.size();
  for (std::size_t k = 0; k + 1 < out.section_count(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (out.at(k + 1, i, j) < out.at(k, i, j)) out.at(k + 1, i, j) = out.at(k, i, j);
  return out;
}

std::size_t count_passing_violations(const TravelTimeTensor& tensor) {
  std::size_t count = 0;
  const std::size_t n = tensor.size();
  for (std::size_t k = 0; k + 1 < tensor.section_count(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (tensor.at(k + 1, i, j) < tensor.at(k, i, j)) ++count;
  return count;
}

double TimeProfile::scaler_at(double t) const {
  if (samples.empty()) return 1.0;
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const auto& s) { return v < s.first; });
  if (it == samples.begin()) return samples.front().second;
  return std::prev(it)->second;
}

TravelTimeTensor build_from_profiles(const std::vector<std::vector<double>>& static_time,
                                     const std::vector<int>& cluster_of,
                                     const ProfileSet& profiles, double step,
                                     double horizon_begin, double horizon_end) {
  const std::size_t n = static_time.size();
  if (cluster_of.size() != n) throw ProfileError("cluster assignment size differs from matrix size");
  if (!(step > 0.0) || !(horizon_end > horizon_begin))
    throw ProfileError("sampling step and horizon must be positive");
  const double ratio = (horizon_end - horizon_begin) / step;
  const auto k_count = static_cast<std::size_t>(std::llround(ratio));
  if (k_count == 0 || std::abs(ratio - static_cast<double>(k_count)) > 1e-9 * ratio)
    throw ProfileError("sampling step must divide the horizon");

  std::vector<double> boundaries(k_count + 1);
  for (std::size_t k = 0; k <= k_count; ++k)
    boundaries[k] = horizon_begin + step * static_cast<double>(k);

  std::vector<std::vector<double>> sections(k_count, std::vector<double>(n * n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (static_time[i].size() != n) throw ProfileError("static time matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const TimeProfile* profile = nullptr;
      if (auto it = profiles.per_pair.find({static_cast<int>(i), static_cast<int>(j)});
          it != profiles.per_pair.end()) {
        profile = &it->second;
      } else if (auto jt = profiles.between_clusters.find({cluster_of[i], cluster_of[j]});
                 jt != profiles.between_clusters.end()) {
        profile = &jt->second;
      } else {
        throw ProfileError("missing time profile for cluster pair (" + std::to_string(cluster_of[i]) +
                           ", " + std::to_string(cluster_of[j]) + ")");
      }
      for (std::size_t k = 0; k < k_count; ++k)
        sections[k][i * n + j] = static_time[i][j] * profile->scaler_at(boundaries[k]);
    }
  }
  return enforce_non_passing(TravelTimeTensor(std::move(boundaries), n, std::move(sections)));
}

}  // namespace amvrp
