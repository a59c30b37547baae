#include "isingrep/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isingrep {

Distribution Distribution::point_mass(std::size_t bits, std::uint64_t key) {
  return from_weights(bits, std::vector<Entry>{{key, 1.0}});
}

Distribution Distribution::from_weights(std::size_t bits, std::vector<Entry> weights) {
  std::sort(weights.begin(), weights.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Distribution d(bits);
  double total = 0.0;
  for (const auto& [k, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("Distribution: weight must be finite and nonnegative");
    if (bits < 64 && (k >> bits) != 0) throw std::invalid_argument("Distribution: key wider than the state");
    if (w == 0.0) continue;
    if (!d.entries_.empty() && d.entries_.back().first == k)
      d.entries_.back().second += w;
    else
      d.entries_.emplace_back(k, w);
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("Distribution: total weight is zero");
  for (auto& e : d.entries_) e.second /= total;
  return d;
}

Distribution Distribution::from_weights(std::size_t bits, const std::unordered_map<std::uint64_t, double>& weights) {
  return from_weights(bits, std::vector<Entry>(weights.begin(), weights.end()));
}

double Distribution::probability(std::uint64_t key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, std::uint64_t k) { return e.first < k; });
  return (it != entries_.end() && it->first == key) ? it->second : 0.0;
}

void Distribution::validate(double tol) const {
  double total = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].second < 0.0) throw std::logic_error("Distribution: negative probability");
    if (i > 0 && entries_[i - 1].first >= entries_[i].first) throw std::logic_error("Distribution: keys not distinct");
    if (bits_ < 64 && (entries_[i].first >> bits_) != 0) throw std::logic_error("Distribution: key wider than the state");
    total += entries_[i].second;
  }
  if (std::abs(total - 1.0) > tol) throw std::logic_error("Distribution: probabilities do not sum to 1");
}

double tv_distance(const Distribution& a, const Distribution& b) {
  if (a.bits() != b.bits()) throw std::invalid_argument("tv_distance: distributions live on different hosts");
  auto x = a.entries(), y = b.entries();
  std::size_t i = 0, j = 0;
  double s = 0.0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      s += x[i++].second;
    } else if (i == x.size() || y[j].first < x[i].first) {
      s += y[j++].second;
    } else {
      s += std::abs(x[i++].second - y[j++].second);
    }
  }
  return std::min(1.0, 0.5 * s);
}

}  // namespace isingrep
