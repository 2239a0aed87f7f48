#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gwlab {

/// Deletion-only ordered set over a fixed sorted array of abscissas.
///
/// Supports successor/predecessor of an arbitrary key among the elements not
/// yet erased. Two path-compressed "next alive" forests give amortised
/// near-constant time per query on top of one binary search.
class UnvisitedIndex {
 public:
  UnvisitedIndex() = default;

  explicit UnvisitedIndex(std::span<const double> sorted)
      : keys_(sorted), right_(sorted.size() + 1), left_(sorted.size() + 1), remaining_(sorted.size()) {
    for (std::uint32_t i = 0; i < right_.size(); ++i) {
      right_[i] = i;
      left_[i] = i;
    }
  }

  [[nodiscard]] std::size_t size() const { return keys_.size(); }
  [[nodiscard]] std::size_t remaining() const { return remaining_; }
  [[nodiscard]] bool empty() const { return remaining_ == 0; }
  [[nodiscard]] double key(std::size_t i) const { return keys_[i]; }

  [[nodiscard]] bool erased(std::size_t i) const { return right_[i] != i; }

  void erase(std::size_t i) {
    if (erased(i)) return;
    right_[i] = static_cast<std::uint32_t>(i + 1);
    left_[i + 1] = static_cast<std::uint32_t>(i);
    --remaining_;
  }

  /// Smallest alive index >= i.
  [[nodiscard]] std::optional<std::size_t> first_alive_from(std::size_t i) const {
    const std::uint32_t r = find(right_, static_cast<std::uint32_t>(i));
    if (r >= keys_.size()) return std::nullopt;
    return r;
  }

  /// Largest alive index < i.
  [[nodiscard]] std::optional<std::size_t> last_alive_before(std::size_t i) const {
    const std::uint32_t l = find(left_, static_cast<std::uint32_t>(i));
    if (l == 0) return std::nullopt;
    return l - 1;
  }

  /// Smallest alive index whose key is >= x.
  [[nodiscard]] std::optional<std::size_t> successor(double x) const {
    return first_alive_from(lower_bound(x));
  }

  /// Largest alive index whose key is < x.
  [[nodiscard]] std::optional<std::size_t> predecessor(double x) const {
    return last_alive_before(lower_bound(x));
  }

 private:
  [[nodiscard]] std::size_t lower_bound(double x) const {
    return static_cast<std::size_t>(std::lower_bound(keys_.begin(), keys_.end(), x) - keys_.begin());
  }

  // Path halving. `left_` is offset by one so that 0 is the "none" sentinel.
  static std::uint32_t find(std::vector<std::uint32_t>& parent, std::uint32_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }

  std::span<const double> keys_;
  mutable std::vector<std::uint32_t> right_;
  mutable std::vector<std::uint32_t> left_;
  std::size_t remaining_ = 0;
};

}  // namespace gwlab
