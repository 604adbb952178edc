#ifndef MONOSCAN_CALIBRATION_HPP_
#define MONOSCAN_CALIBRATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monoscan/random.hpp"

namespace monoscan {

enum class Model { white, regression };

std::string_view to_string(Model model);
Model parse_model(std::string_view name);

struct QuantileEntry {
  double alpha = 0.0;
  double quantile = 0.0;
};

// Monte Carlo critical values of the scan statistic under the least
// favourable null, with everything needed to regenerate them.
struct QuantileTable {
  Model model = Model::white;
  std::size_t n = 0;
  std::size_t r = 1;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::string generator_id{kGeneratorId};
  std::vector<QuantileEntry> entries;  // ascending alpha

  // Quantile stored for this level, if any. Levels match to 1e-12.
  std::optional<double> find(double alpha) const;
};

// Null statistic in the white noise model: scan of the path
// n^{-1/2} * m^{-1/2} * (xi_1 + ... + xi_k) on the grid k / m, m = n * r,
// with unit noise variance.
double null_white_statistic(std::size_t n, std::size_t r, RandomStream& stream);

// Null statistic in the regression model: n standard normal observations,
// paired and scanned with the estimated variance.
double null_regression_statistic(std::size_t n, RandomStream& stream);

// One draw of sup_t (W^(t) - W(t)) over [0, 1], W discretized on m steps.
double null_z_statistic(std::size_t m, RandomStream& stream);

// 1-based rank ceil((1 - alpha) * count) of the upper order statistic used as
// the (1 - alpha)-quantile.
std::size_t quantile_rank(double alpha, std::size_t count);

// Quantiles of an ascending sample at each level.
std::vector<QuantileEntry> empirical_quantiles(std::span<const double> sorted,
                                               std::span<const double> alphas);

// Runs `replications` null replications (replication k draws from
// RandomStream::child(seed, k)) and tabulates the quantiles. `r` must be 1
// for the regression model.
QuantileTable calibrate(Model model, std::size_t n, std::size_t r, std::size_t replications,
                        std::span<const double> alphas, std::uint64_t seed);

// 2 * sqrt(2 * log(2 |C_n| / alpha)) with |C_n| = n (n + 1) / 2. Upper bound
// for the Monte Carlo threshold.
double analytic_threshold(double alpha, std::size_t n);

// min(1, 2 exp(-x^2 / 8)), an upper bound on P(Z > x).
double z_tail_bound(double x);

std::string to_json(const QuantileTable& table);
QuantileTable quantile_table_from_json(std::string_view text);

}  // namespace monoscan

#endif  // MONOSCAN_CALIBRATION_HPP_
