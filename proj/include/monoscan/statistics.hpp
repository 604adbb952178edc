#ifndef MONOSCAN_STATISTICS_HPP_
#define MONOSCAN_STATISTICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "monoscan/geometry.hpp"

namespace monoscan {

// Coarse-grid interval [i/n, j/n].
struct Interval {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalStat {
  std::size_t i = 0;
  std::size_t j = 0;
  double stat = 0.0;
};

struct ScanResult {
  std::size_t n = 0;
  double max_stat = 0.0;
  Interval best_interval;
  // Set when interval statistics were retained: every interval with
  // stat >= *retain_floor is listed in interval_stats, ordered by (i, j).
  std::optional<double> retain_floor;
  std::vector<IntervalStat> interval_stats;
};

// Observations of the regression model after pairing neighbours.
struct PairedSample {
  std::vector<double> ybar;
  double sigma_hat_sq = 0.0;
  double sigma0_hat_sq = 0.0;
};

// Piecewise-linear path through (j/N, (1/N) * sum_{i<=j} values_i), j = 0..N.
GridFunction cumulative_sum_diagram(std::span<const double> values);

// Scans every interval [i/n, j/n], 0 <= i < j <= n, of a path whose grid
// refines {i/n} (K = n * r knots steps). For each interval the gap between
// the path and its least concave majorant on the interval is normalized by
// sqrt(n / (noise_sq * (j - i) / n)).
ScanResult scan(const GridFunction& g, std::size_t n, double noise_sq,
                std::optional<double> retain_floor = std::nullopt);

// Pairs (y1, y2), (y3, y4), ... into their means and estimates the noise
// variance from the pair differences.
PairedSample pair_and_estimate(std::span<const double> y);

// Scan of the paired means with the estimated variance sigma0_hat_sq.
ScanResult scan_regression(const PairedSample& sample,
                           std::optional<double> retain_floor = std::nullopt);

// Retained intervals with stat > threshold, largest statistic first.
std::vector<IntervalStat> violating_intervals(const ScanResult& result, double threshold);

}  // namespace monoscan

#endif  // MONOSCAN_STATISTICS_HPP_
