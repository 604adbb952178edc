#include "monoscan/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monoscan/errors.hpp"

namespace monoscan {

GridFunction cumulative_sum_diagram(std::span<const double> values) {
  if (values.empty()) throw DomainError("cumulative_sum_diagram: empty input");
  const double n = static_cast<double>(values.size());
  std::vector<double> knots(values.size() + 1, 0.0);
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) {
      throw DomainError("cumulative_sum_diagram: non-finite value");
    }
    sum += values[j];
    knots[j + 1] = sum / n;
  }
  return GridFunction(0.0, 1.0 / n, std::move(knots));
}

ScanResult scan(const GridFunction& g, std::size_t n, double noise_sq,
                std::optional<double> retain_floor) {
  const std::size_t cells = g.cells();
  if (n == 0 || cells % n != 0) {
    throw PreconditionError("scan: grid with " + std::to_string(cells) +
                            " cells does not refine n = " + std::to_string(n));
  }
  if (!(noise_sq > 0.0) || !std::isfinite(noise_sq)) {
    throw DomainError("scan: noise variance must be positive");
  }
  const std::size_t r = cells / n;
  const auto values = g.values();

  // Hull knots of each coarse cell; pushing only these when the majorant is
  // grown across the cell gives the same result.
  std::vector<std::vector<std::size_t>> cell_hulls;
  if (r > 2) {
    cell_hulls.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      cell_hulls[c] = lcm_knots(values.subspan(c * r, r + 1));
      for (auto& k : cell_hulls[c]) k += c * r;
    }
  }

  ScanResult result;
  result.n = n;
  result.retain_floor = retain_floor;
  result.best_interval = {0, 1};
  bool first = true;
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    IncrementalMajorant majorant(values, i * r);
    for (std::size_t j = i + 1; j <= n; ++j) {
      if (cell_hulls.empty()) {
        majorant.extend(j * r);
      } else {
        majorant.extend(j * r, cell_hulls[j - 1]);
      }
      const double stat = majorant.max_deviation() * dn /
                          std::sqrt(noise_sq * static_cast<double>(j - i));
      if (first || stat > result.max_stat) {
        result.max_stat = stat;
        result.best_interval = {i, j};
        first = false;
      }
      if (retain_floor && stat >= *retain_floor) {
        result.interval_stats.push_back({i, j, stat});
      }
    }
  }
  return result;
}

PairedSample pair_and_estimate(std::span<const double> y) {
  if (y.size() < 4 || y.size() % 2 != 0) {
    throw DomainError("pair_and_estimate: need an even number (>= 4) of observations");
  }
  PairedSample out;
  out.ybar.reserve(y.size() / 2);
  double ss = 0.0;
  for (std::size_t k = 0; k + 1 < y.size(); k += 2) {
    if (!std::isfinite(y[k]) || !std::isfinite(y[k + 1])) {
      throw DomainError("pair_and_estimate: non-finite observation");
    }
    out.ybar.push_back((y[k] + y[k + 1]) / 2.0);
    const double d = y[k + 1] - y[k];
    ss += d * d;
  }
  out.sigma_hat_sq = ss / static_cast<double>(y.size());
  out.sigma0_hat_sq = out.sigma_hat_sq / 2.0;
  return out;
}

ScanResult scan_regression(const PairedSample& sample, std::optional<double> retain_floor) {
  if (!(sample.sigma0_hat_sq > 0.0)) {
    throw DegenerateSampleError("scan_regression: zero variance estimate (constant pairs)");
  }
  const GridFunction diagram = cumulative_sum_diagram(sample.ybar);
  return scan(diagram, sample.ybar.size(), sample.sigma0_hat_sq, retain_floor);
}

std::vector<IntervalStat> violating_intervals(const ScanResult& result, double threshold) {
  if (!result.retain_floor) {
    throw PreconditionError("violating_intervals: scan did not retain interval statistics");
  }
  if (*result.retain_floor > threshold) {
    throw PreconditionError("violating_intervals: retain floor exceeds the threshold");
  }
  std::vector<IntervalStat> out;
  for (const IntervalStat& s : result.interval_stats) {
    if (s.stat > threshold) out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const IntervalStat& a, const IntervalStat& b) { return a.stat > b.stat; });
  return out;
}

}  // namespace monoscan
