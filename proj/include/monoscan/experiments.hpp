#ifndef MONOSCAN_EXPERIMENTS_HPP_
#define MONOSCAN_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "monoscan/calibration.hpp"
#include "monoscan/geometry.hpp"
#include "monoscan/random.hpp"

namespace monoscan {

enum class SignalKind { f1, f2, f3, f4, f5, f6, f7, gijbels, constant, linear, custom };

std::string_view to_string(SignalKind kind);
SignalKind parse_signal_kind(std::string_view name);

using Signal = std::function<double(double)>;

// A regression function on [0, 1] together with the noise level it is
// observed under.
struct AlternativeSpec {
  SignalKind kind = SignalKind::constant;
  double a = 0.0;      // bump height, gijbels only
  double sigma = 1.0;  // noise standard deviation; f2 = 1.5 * sigma * x
  double scale = 1.0;  // multiplies the signal
  Signal custom;       // kind == custom only

  void validate() const;
};

struct PowerReport {
  AlternativeSpec spec;
  Model model = Model::regression;
  std::size_t n = 0;
  double alpha = 0.0;
  double threshold_used = 0.0;
  std::size_t replications = 0;
  std::size_t rejections = 0;
  double power = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
};

// The catalogue:
//   f1(x) = -15 (x - 0.5)^3 1{x <= 0.5} - 0.3 (x - 0.5) + exp(-250 (x - 0.25)^2)
//   f2(x) = 1.5 sigma x
//   f3(x) = 0.2 exp(-50 (x - 0.5)^2)
//   f4(x) = -0.1 cos(6 pi x)
//   f5(x) = -0.2 x + f3(x)
//   f6(x) = -0.2 x + f4(x)
//   f7(x) = -(1 + x) + 0.45 exp(-50 (x - 0.5)^2), i.e. gijbels with a = 0.45
//   gijbels(x) = -(1 + x) + a exp(-50 (x - 0.5)^2)
// constant is 0 and linear is x. All are multiplied by `scale`.
double signal(const AlternativeSpec& spec, double x);
Signal as_function(const AlternativeSpec& spec);

// Discretized white noise observation F_n(k/m), m = n r: midpoint-rule
// integral of the signal plus (sigma / sqrt(n)) m^{-1/2} sum_{i<=k} xi_i.
// `innovations` holds the m standard normal draws.
GridFunction simulate_white_path(const AlternativeSpec& spec, std::size_t n, std::size_t r,
                                 std::span<const double> innovations);
GridFunction simulate_white_path(const AlternativeSpec& spec, std::size_t n, std::size_t r,
                                 RandomStream& stream);

// Y_i = signal(i / n) + sigma * xi_i, i = 1..n.
std::vector<double> simulate_regression_sample(const AlternativeSpec& spec, std::size_t n,
                                               std::span<const double> innovations);
std::vector<double> simulate_regression_sample(const AlternativeSpec& spec, std::size_t n,
                                               RandomStream& stream);

// Scan statistic of one simulated data set (r is ignored for regression).
double simulated_statistic(const AlternativeSpec& spec, Model model, std::size_t n,
                           std::size_t r, RandomStream& stream);

// Rejection rate of the level-alpha test over `replications` data sets drawn
// from child streams of `seed`.
PowerReport power_study(const AlternativeSpec& spec, Model model, std::size_t n,
                        std::size_t r, double alpha, const QuantileTable& table,
                        std::size_t replications, std::uint64_t seed);

// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials);

// Mean of f over [x, y] by the composite midpoint rule with `grid` panels.
double average(const Signal& f, double x, double y, std::size_t grid);

// sup over t in [x, y] of (t - x) / sqrt(y - x) * (mean_{[x,y]} f - mean_{[x,t]} f),
// evaluated at t = x + k (y - x) / t_grid.
double detectability(const Signal& f, double x, double y, std::size_t t_grid = 512,
                     std::size_t average_grid = 1024);

// 2 sqrt(2) (sqrt(log(n (n + 1) / alpha)) + sqrt(log(2 / beta))).
double guarantee_threshold(double alpha, double beta, std::size_t n);

// Largest central-difference derivative on the interior points k / grid.
double delta2(const Signal& f, std::size_t grid);

// max_t (f(t) - min_{s <= t} f(s)) on the points k / grid.
double envelope_gap(const Signal& f, std::size_t grid);

}  // namespace monoscan

#endif  // MONOSCAN_EXPERIMENTS_HPP_
