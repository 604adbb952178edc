#include "monoscan/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "monoscan/errors.hpp"
#include "monoscan/parallel.hpp"
#include "monoscan/statistics.hpp"

namespace monoscan {
namespace {

constexpr std::array<std::pair<SignalKind, std::string_view>, 11> kKindNames{{
    {SignalKind::f1, "f1"},
    {SignalKind::f2, "f2"},
    {SignalKind::f3, "f3"},
    {SignalKind::f4, "f4"},
    {SignalKind::f5, "f5"},
    {SignalKind::f6, "f6"},
    {SignalKind::f7, "f7"},
    {SignalKind::gijbels, "gijbels"},
    {SignalKind::constant, "constant"},
    {SignalKind::linear, "linear"},
    {SignalKind::custom, "custom"},
}};

double bump(double x, double height) {
  const double d = x - 0.5;
  return height * std::exp(-50.0 * d * d);
}

double raw_signal(const AlternativeSpec& spec, double x) {
  switch (spec.kind) {
    case SignalKind::f1: {
      const double d = x - 0.5;
      const double e = x - 0.25;
      return (x <= 0.5 ? -15.0 * d * d * d : 0.0) - 0.3 * d + std::exp(-250.0 * e * e);
    }
    case SignalKind::f2:
      return 1.5 * spec.sigma * x;
    case SignalKind::f3:
      return bump(x, 0.2);
    case SignalKind::f4:
      return -0.1 * std::cos(6.0 * std::numbers::pi * x);
    case SignalKind::f5:
      return -0.2 * x + bump(x, 0.2);
    case SignalKind::f6:
      return -0.2 * x - 0.1 * std::cos(6.0 * std::numbers::pi * x);
    case SignalKind::f7:  // the bump family at a = 0.45
      return -(1.0 + x) + bump(x, 0.45);
    case SignalKind::gijbels:
      return -(1.0 + x) + bump(x, spec.a);
    case SignalKind::constant:
      return 0.0;
    case SignalKind::linear:
      return x;
    case SignalKind::custom:
      return spec.custom(x);
  }
  throw DomainError("signal: unknown kind");
}

std::vector<double> draw_normals(std::size_t count, RandomStream& stream) {
  std::vector<double> out(count);
  for (double& v : out) v = stream.normal();
  return out;
}

void check_interval(double x, double y) {
  if (!(x >= 0.0 && y <= 1.0 && x < y)) {
    throw DomainError("need 0 <= x < y <= 1");
  }
}

}  // namespace

std::string_view to_string(SignalKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  throw DomainError("unknown signal kind");
}

SignalKind parse_signal_kind(std::string_view name) {
  for (const auto& [k, text] : kKindNames) {
    if (text == name) return k;
  }
  throw DomainError("unknown signal kind '" + std::string(name) + "'");
}

void AlternativeSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (!std::isfinite(scale)) throw DomainError("scale must be finite");
  if (kind == SignalKind::gijbels && !(a >= 0.0)) {
    throw DomainError("gijbels bump height must be >= 0");
  }
  if (kind == SignalKind::custom && !custom) {
    throw DomainError("custom signal needs a function");
  }
}

double signal(const AlternativeSpec& spec, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("signal: x must lie in [0, 1]");
  if (spec.kind == SignalKind::custom && !spec.custom) {
    throw DomainError("custom signal needs a function");
  }
  return spec.scale * raw_signal(spec, x);
}

Signal as_function(const AlternativeSpec& spec) {
  return [spec](double x) { return signal(spec, x); };
}

GridFunction simulate_white_path(const AlternativeSpec& spec, std::size_t n, std::size_t r,
                                 std::span<const double> innovations) {
  spec.validate();
  if (n < 2 || r < 1) throw DomainError("simulate_white_path: need n >= 2, r >= 1");
  const std::size_t m = n * r;
  if (innovations.size() != m) {
    throw PreconditionError("simulate_white_path: expected n * r innovations");
  }
  const double dm = static_cast<double>(m);
  const double noise_scale = spec.sigma / std::sqrt(static_cast<double>(n) * dm);
  std::vector<double> values(m + 1, 0.0);
  double drift = 0.0;
  double noise = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    drift += signal(spec, (static_cast<double>(k) - 0.5) / dm);
    noise += innovations[k - 1];
    values[k] = drift / dm + noise_scale * noise;
  }
  return GridFunction(0.0, 1.0 / dm, std::move(values));
}

GridFunction simulate_white_path(const AlternativeSpec& spec, std::size_t n, std::size_t r,
                                 RandomStream& stream) {
  const auto xi = draw_normals(n * r, stream);
  return simulate_white_path(spec, n, r, xi);
}

std::vector<double> simulate_regression_sample(const AlternativeSpec& spec, std::size_t n,
                                               std::span<const double> innovations) {
  spec.validate();
  if (n < 4 || n % 2 != 0) {
    throw DomainError("simulate_regression_sample: n must be even and >= 4");
  }
  if (innovations.size() != n) {
    throw PreconditionError("simulate_regression_sample: expected n innovations");
  }
  std::vector<double> y(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i) {
    y[i - 1] = signal(spec, static_cast<double>(i) / dn) + spec.sigma * innovations[i - 1];
  }
  return y;
}

std::vector<double> simulate_regression_sample(const AlternativeSpec& spec, std::size_t n,
                                               RandomStream& stream) {
  const auto xi = draw_normals(n, stream);
  return simulate_regression_sample(spec, n, xi);
}

double simulated_statistic(const AlternativeSpec& spec, Model model, std::size_t n,
                           std::size_t r, RandomStream& stream) {
  if (model == Model::white) {
    const GridFunction path = simulate_white_path(spec, n, r, stream);
    return scan(path, n, spec.sigma * spec.sigma).max_stat;
  }
  const auto y = simulate_regression_sample(spec, n, stream);
  return scan_regression(pair_and_estimate(y)).max_stat;
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0 || successes > trials) throw DomainError("wilson_interval: bad counts");
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2n = z * z / nt;
  const double centre = (p + z2n / 2.0) / (1.0 + z2n);
  const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / nt + z2n / (4.0 * nt));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

PowerReport power_study(const AlternativeSpec& spec, Model model, std::size_t n,
                        std::size_t r, double alpha, const QuantileTable& table,
                        std::size_t replications, std::uint64_t seed) {
  spec.validate();
  if (replications < 100) throw DomainError("power_study: need at least 100 replications");
  if (model == Model::regression) r = 1;
  if (table.model != model || table.n != n || table.r != r) {
    throw PreconditionError("power_study: quantile table was calibrated for another design");
  }
  const auto threshold = table.find(alpha);
  if (!threshold) throw PreconditionError("power_study: level missing from quantile table");

  std::vector<char> reject(replications, 0);
  parallel_for(replications, [&](std::size_t k) {
    RandomStream stream = RandomStream::child(seed, k);
    reject[k] = simulated_statistic(spec, model, n, r, stream) > *threshold ? 1 : 0;
  });

  PowerReport report;
  report.spec = spec;
  report.model = model;
  report.n = n;
  report.alpha = alpha;
  report.threshold_used = *threshold;
  report.replications = replications;
  report.rejections = static_cast<std::size_t>(std::count(reject.begin(), reject.end(), 1));
  report.power = static_cast<double>(report.rejections) / static_cast<double>(replications);
  report.ci95 = wilson_interval(report.rejections, replications);
  return report;
}

double average(const Signal& f, double x, double y, std::size_t grid) {
  check_interval(x, y);
  if (grid < 1) throw DomainError("average: need at least one panel");
  const double h = (y - x) / static_cast<double>(grid);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid; ++k) {
    sum += f(x + (static_cast<double>(k) + 0.5) * h);
  }
  return sum / static_cast<double>(grid);
}

double detectability(const Signal& f, double x, double y, std::size_t t_grid,
                     std::size_t average_grid) {
  check_interval(x, y);
  if (t_grid < 1 || average_grid < 1) throw DomainError("detectability: empty grid");
  const double whole = average(f, x, y, average_grid);
  const double root = std::sqrt(y - x);
  double best = 0.0;  // t = x
  for (std::size_t k = 1; k <= t_grid; ++k) {
    const double t = k == t_grid ? y : x + static_cast<double>(k) * (y - x) / static_cast<double>(t_grid);
    const double term = (t - x) / root * (whole - average(f, x, t, average_grid));
    best = std::max(best, term);
  }
  return best;
}

double guarantee_threshold(double alpha, double beta, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    throw DomainError("guarantee_threshold: alpha and beta must lie in (0, 1)");
  }
  if (n < 1) throw DomainError("guarantee_threshold: need n >= 1");
  const double dn = static_cast<double>(n);
  return 2.0 * std::numbers::sqrt2 *
         (std::sqrt(std::log(dn * (dn + 1.0) / alpha)) + std::sqrt(std::log(2.0 / beta)));
}

double delta2(const Signal& f, std::size_t grid) {
  if (grid < 2) throw DomainError("delta2: need grid >= 2");
  const double dg = static_cast<double>(grid);
  const double h = 1.0 / dg;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < grid; ++k) {
    const double ahead = f(static_cast<double>(k + 1) / dg);
    const double behind = f(static_cast<double>(k - 1) / dg);
    best = std::max(best, (ahead - behind) / (2.0 * h));
  }
  return best;
}

double envelope_gap(const Signal& f, std::size_t grid) {
  if (grid < 2) throw DomainError("envelope_gap: need grid >= 2");
  double running_min = f(0.0);
  double best = 0.0;
  for (std::size_t k = 1; k <= grid; ++k) {
    const double t = k == grid ? 1.0 : static_cast<double>(k) / static_cast<double>(grid);
    const double v = f(t);
    running_min = std::min(running_min, v);
    best = std::max(best, v - running_min);
  }
  return best;
}

}  // namespace monoscan
