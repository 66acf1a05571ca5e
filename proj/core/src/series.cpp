#include "snts/series.hpp"

#include <cmath>
#include <string>

#include "snts/error.hpp"

namespace snts {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidArgument("non-finite observation at index " + std::to_string(i + 1));
    }
  }
}

double TimeSeries::at(std::size_t i) const {
  if (i < 1 || i > values_.size()) {
    throw InvalidArgument("index " + std::to_string(i) + " outside 1.." + std::to_string(values_.size()));
  }
  return values_[i - 1];
}

double TimeSeries::mean() const { return mean_of(values_); }

void TimeSeries::require_length(std::size_t minimum, const char* what) const {
  if (values_.size() < minimum) {
    throw InfeasibleParameters(std::string(what) + " needs at least " + std::to_string(minimum) +
                               " observations, got " + std::to_string(values_.size()));
  }
}

IndexRange BlockPartition::block(std::size_t j) const {
  if (j < 1 || j > block_count) {
    throw InvalidArgument("block " + std::to_string(j) + " outside 1.." + std::to_string(block_count));
  }
  return {(j - 1) * block_length + 1, j * block_length};
}

std::vector<IndexRange> BlockPartition::blocks() const {
  std::vector<IndexRange> out;
  out.reserve(block_count);
  for (std::size_t j = 1; j <= block_count; ++j) out.push_back(block(j));
  return out;
}

BlockPartition partition(std::size_t n, std::size_t block_length) {
  if (block_length < 1) throw InvalidArgument("block length must be at least 1");
  const std::size_t count = n / block_length;
  if (count < 2) {
    throw InfeasibleParameters("insufficient blocks: n=" + std::to_string(n) +
                               ", k_n=" + std::to_string(block_length) + " gives " +
                               std::to_string(count) + " block(s), need at least 2");
  }
  return {n, block_length, count};
}

SegmentStats segment_stats(std::span<const double> x, IndexRange range) {
  if (range.empty() || range.first < 1 || range.last > x.size()) {
    throw InvalidArgument("segment [" + std::to_string(range.first) + ", " + std::to_string(range.last) +
                          "] is empty or outside 1.." + std::to_string(x.size()));
  }
  RunningStats acc;
  for (std::size_t i = range.first; i <= range.last; ++i) acc.push(x[i - 1]);
  return acc.stats();
}

SegmentStats segment_stats(const TimeSeries& x, IndexRange range) { return segment_stats(x.values(), range); }

PrefixSuffixScan::PrefixSuffixScan(std::span<const double> x)
    : prefix_mean_(x.size()),
      prefix_css_(x.size()),
      suffix_mean_(x.size(), 0.0),
      suffix_css_(x.size(), 0.0),
      prefix_sums_(x.size() + 1, 0.0) {
  const std::size_t n = x.size();
  if (n < 2) throw InfeasibleParameters("prefix/suffix scan needs at least 2 observations");
  RunningStats fwd;
  for (std::size_t i = 0; i < n; ++i) {
    fwd.push(x[i]);
    prefix_mean_[i] = fwd.mean();
    prefix_css_[i] = fwd.css();
    prefix_sums_[i + 1] = prefix_sums_[i] + x[i];
  }
  // suffix for split j covers j+1..n, i.e. zero-based [j, n)
  RunningStats bwd;
  for (std::size_t j = n - 1; j >= 1; --j) {
    bwd.push(x[j]);
    suffix_mean_[j - 1] = bwd.mean();
    suffix_css_[j - 1] = bwd.css();
  }
}

void PrefixSuffixScan::check(std::size_t j) const {
  if (j < 1 || j > size()) throw InvalidArgument("split index " + std::to_string(j) + " out of range");
}

SegmentStats PrefixSuffixScan::prefix(std::size_t j) const {
  check(j);
  return {j, prefix_mean_[j - 1], prefix_css_[j - 1]};
}

SegmentStats PrefixSuffixScan::suffix(std::size_t j) const {
  check(j);
  return {size() - j, suffix_mean_[j - 1], suffix_css_[j - 1]};
}

double PrefixSuffixScan::prefix_sum(std::size_t j) const {
  if (j > size()) throw InvalidArgument("prefix length " + std::to_string(j) + " out of range");
  return prefix_sums_[j];
}

PrefixSuffixScan prefix_suffix_scan(const TimeSeries& x) { return PrefixSuffixScan(x.values()); }

double mean_of(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mean of empty sequence");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double css_of(std::span<const double> x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s;
}

}  // namespace snts
