#pragma once

// Foundational containers and running statistics. Indices exposed by this
// header are 1-based to match the observation numbering X_1..X_n.

#include <cstddef>
#include <span>
#include <vector>

namespace snts {

/// Ordered, finite observations X_1..X_n.
class TimeSeries {
 public:
  TimeSeries() = default;
  /// Throws InvalidArgument if any value is NaN or infinite.
  explicit TimeSeries(std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  /// 1-based element access.
  [[nodiscard]] double at(std::size_t i) const;
  [[nodiscard]] double mean() const;

  [[nodiscard]] auto begin() const noexcept { return values_.begin(); }
  [[nodiscard]] auto end() const noexcept { return values_.end(); }

  /// Throws InfeasibleParameters when fewer than `minimum` observations.
  void require_length(std::size_t minimum, const char* what) const;

 private:
  std::vector<double> values_;
};

/// Inclusive 1-based index range {first, ..., last}.
struct IndexRange {
  std::size_t first = 1;
  std::size_t last = 0;

  [[nodiscard]] std::size_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
  [[nodiscard]] bool empty() const noexcept { return last < first; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Non-overlapping blocks I_j = {(j-1)k+1, ..., jk}, j = 1..l. Indices after
/// l*k are dropped from every block computation.
struct BlockPartition {
  std::size_t n = 0;
  std::size_t block_length = 0;
  std::size_t block_count = 0;

  [[nodiscard]] IndexRange block(std::size_t j) const;
  [[nodiscard]] std::vector<IndexRange> blocks() const;
  [[nodiscard]] std::size_t covered() const noexcept { return block_length * block_count; }
};

/// Throws InvalidArgument for k < 1 and InfeasibleParameters("insufficient
/// blocks") when floor(n/k) < 2.
[[nodiscard]] BlockPartition partition(std::size_t n, std::size_t block_length);

struct SegmentStats {
  std::size_t count = 0;
  double mean = 0.0;
  /// Centered sum of squares sum (x_i - mean)^2.
  double css = 0.0;
};

/// Welford accumulator; merge() uses the pooled-variance update.
class RunningStats {
 public:
  void push(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    css_ += delta * (x - mean_);
  }
  [[nodiscard]] SegmentStats stats() const noexcept { return {count_, mean_, css_ < 0.0 ? 0.0 : css_}; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] double css() const noexcept { return css_ < 0.0 ? 0.0 : css_; }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double css_ = 0.0;
};

[[nodiscard]] SegmentStats segment_stats(std::span<const double> x, IndexRange range);
[[nodiscard]] SegmentStats segment_stats(const TimeSeries& x, IndexRange range);

/// Prefix statistics over 1..j and suffix statistics over j+1..n for every
/// split point j = 1..n. The suffix at j = n is empty (count 0, zeros).
class PrefixSuffixScan {
 public:
  explicit PrefixSuffixScan(std::span<const double> x);

  [[nodiscard]] std::size_t size() const noexcept { return prefix_mean_.size(); }
  [[nodiscard]] SegmentStats prefix(std::size_t j) const;
  [[nodiscard]] SegmentStats suffix(std::size_t j) const;
  [[nodiscard]] bool has_suffix(std::size_t j) const { return j < size(); }
  /// sum_{i<=j} X_i.
  [[nodiscard]] double prefix_sum(std::size_t j) const;
  [[nodiscard]] double total() const noexcept { return prefix_sums_.back(); }

 private:
  void check(std::size_t j) const;

  std::vector<double> prefix_mean_, prefix_css_;
  std::vector<double> suffix_mean_, suffix_css_;
  std::vector<double> prefix_sums_;  // prefix_sums_[j] = sum of first j values
};

[[nodiscard]] PrefixSuffixScan prefix_suffix_scan(const TimeSeries& x);

[[nodiscard]] double mean_of(std::span<const double> x);
/// Two-pass centered sum of squares.
[[nodiscard]] double css_of(std::span<const double> x);

}  // namespace snts
