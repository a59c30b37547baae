#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace isingrep {

/// Exact, finitely supported probability table over bit-packed states
/// (edge configurations or spin configurations of at most 64 bits).
/// Entries are kept sorted by key with strictly positive mass.
class Distribution {
 public:
  using Entry = std::pair<std::uint64_t, double>;

  Distribution() = default;
  /// `bits` is the state width (edge count or vertex count of the host).
  explicit Distribution(std::size_t bits) : bits_(bits) {}

  static Distribution point_mass(std::size_t bits, std::uint64_t key);
  /// Normalizes nonnegative weights; zero weights are dropped.
  static Distribution from_weights(std::size_t bits, std::vector<Entry> weights);
  static Distribution from_weights(std::size_t bits, const std::unordered_map<std::uint64_t, double>& weights);

  std::size_t bits() const noexcept { return bits_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  std::span<const Entry> entries() const noexcept { return entries_; }

  double probability(std::uint64_t key) const;
  /// Mass of all states whose key satisfies pred.
  template <class Pred>
  double mass(Pred&& pred) const {
    double s = 0.0;
    for (const auto& [k, p] : entries_)
      if (pred(k)) s += p;
    return s;
  }

  /// Throws unless probabilities are nonnegative, keys distinct and fit in
  /// `bits`, and the total is 1 within tol.
  void validate(double tol = 1e-12) const;

 private:
  std::size_t bits_ = 0;
  std::vector<Entry> entries_;
};

/// Half the L1 distance. Throws on mismatched state widths.
double tv_distance(const Distribution& a, const Distribution& b);

}  // namespace isingrep
