#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "monoscan/errors.hpp"
#include "monoscan/geometry.hpp"
#include "oracles.hpp"

using namespace monoscan;

namespace {

constexpr double kTol = 1e-9;

GridFunction unit_grid(std::vector<double> values) {
  const double step = 1.0 / static_cast<double>(values.size() - 1);
  return GridFunction(0.0, step, std::move(values));
}

GridFunction add_linear(const GridFunction& g, double c0, double c1) {
  std::vector<double> v(g.values().begin(), g.values().end());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += c0 + c1 * g.abscissa(k);
  return GridFunction(g.left(), g.step(), std::move(v));
}

void expect_chain_near(const ConcaveChain& a, const ConcaveChain& b, double tol = kTol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_NEAR(a.vertices()[k].x, b.vertices()[k].x, tol);
    EXPECT_NEAR(a.vertices()[k].v, b.vertices()[k].v, tol);
  }
}

}  // namespace

TEST(GridFunction, RejectsInvalidInput) {
  EXPECT_THROW(GridFunction(0.0, 1.0, {1.0}), DomainError);
  EXPECT_THROW(GridFunction(0.0, 0.0, {1.0, 2.0}), DomainError);
  EXPECT_THROW(GridFunction(0.0, 0.5, {1.0, NAN}), DomainError);
}

TEST(Lcm, ConcaveInputIsItsOwnMajorant) {
  const auto chain = lcm(unit_grid({0.0, 1.0, 0.0}));
  EXPECT_EQ(chain, ConcaveChain({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}}));
}

TEST(Lcm, DipIsBridged) {
  const auto chain = lcm(unit_grid({0.0, -1.0, 0.0}));
  EXPECT_EQ(chain, ConcaveChain({{0.0, 0.0}, {1.0, 0.0}}));
}

TEST(Lcm, CollinearKnotsAreCollapsed) {
  const auto chain = lcm(unit_grid({0.0, 1.0, 2.0, 3.0}));
  EXPECT_EQ(chain.size(), 2u);
}

TEST(Lcm, TwoKnotsGiveTheFunctionItself) {
  const auto g = unit_grid({3.0, -1.0});
  const auto chain = lcm(g);
  EXPECT_EQ(chain, ConcaveChain({{0.0, 3.0}, {1.0, -1.0}}));
  EXPECT_EQ(max_deviation(chain, g).dev, 0.0);
}

TEST(ConcaveChain, ValidatesInvariants) {
  EXPECT_THROW(ConcaveChain({}), DomainError);
  EXPECT_THROW(ConcaveChain({{0.0, 0.0}, {0.0, 1.0}}), DomainError);
  EXPECT_THROW(ConcaveChain({{0.0, 0.0}, {0.5, -1.0}, {1.0, 0.0}}), DomainError);
  EXPECT_THROW(ConcaveChain({{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}}), DomainError);
  EXPECT_NO_THROW(ConcaveChain({{0.25, 7.0}}));
}

TEST(ConcatLcm, MergesAcrossTheJunction) {
  const ConcaveChain left({{0.0, 0.0}, {0.5, 0.0}});
  const ConcaveChain right({{0.5, 0.0}, {1.0, 1.0}});
  EXPECT_EQ(concat_lcm(left, right), ConcaveChain({{0.0, 0.0}, {1.0, 1.0}}));
}

TEST(ConcatLcm, ConcaveConcatenationKeepsOrCollapsesJunction) {
  const ConcaveChain up({{0.0, 0.0}, {0.5, 1.0}});
  const ConcaveChain down({{0.5, 1.0}, {1.0, 0.0}});
  EXPECT_EQ(concat_lcm(up, down), ConcaveChain({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}}));

  const ConcaveChain a({{0.0, 0.0}, {0.5, 1.0}});
  const ConcaveChain b({{0.5, 1.0}, {1.0, 2.0}});
  EXPECT_EQ(concat_lcm(a, b), ConcaveChain({{0.0, 0.0}, {1.0, 2.0}}));
}

TEST(ConcatLcm, RejectsMismatchedJunction) {
  const ConcaveChain left({{0.0, 0.0}, {0.5, 0.0}});
  EXPECT_THROW(concat_lcm(left, ConcaveChain({{0.6, 0.0}, {1.0, 1.0}})), PreconditionError);
  EXPECT_THROW(concat_lcm(left, ConcaveChain({{0.5, 0.1}, {1.0, 1.0}})), PreconditionError);
}

TEST(Eval, InterpolatesBetweenVertices) {
  const ConcaveChain chain({{0.0, 0.0}, {1.0, 2.0}});
  EXPECT_DOUBLE_EQ(eval(chain, 0.25), 0.5);
  EXPECT_EQ(eval(chain, 1.0), 2.0);
  const ConcaveChain peak({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}});
  EXPECT_EQ(eval(peak, 0.5), 1.0);
  EXPECT_THROW(eval(chain, -0.01), DomainError);
  EXPECT_THROW(eval(chain, 1.01), DomainError);
  EXPECT_EQ(eval(chain, 1.0 + 1e-15), 2.0);  // rounding at the endpoint
}

TEST(MaxDeviation, Examples) {
  const auto concave = unit_grid({0.0, 0.7, 1.0, 0.9});
  const auto d0 = max_deviation(lcm(concave), concave);
  EXPECT_EQ(d0.dev, 0.0);
  EXPECT_EQ(d0.argmax, 0u);

  const auto dip = unit_grid({0.0, -1.0, 0.0});
  const auto d1 = max_deviation(lcm(dip), dip);
  EXPECT_DOUBLE_EQ(d1.dev, 1.0);
  EXPECT_EQ(d1.argmax, 1u);

  const auto shifted = add_linear(dip, 0.3, -2.5);
  EXPECT_NEAR(max_deviation(lcm(shifted), shifted).dev, 1.0, kTol);
}

TEST(MaxDeviation, SmallestArgmaxOnTies) {
  const auto g = unit_grid({0.0, -1.0, 0.0, -1.0, 0.0});
  const auto d = max_deviation(lcm(g), g);
  EXPECT_DOUBLE_EQ(d.dev, 1.0);
  EXPECT_EQ(d.argmax, 1u);
}

TEST(MaxDeviation, RejectsDomainMismatch) {
  const auto g = unit_grid({0.0, -1.0, 0.0});
  const ConcaveChain shorter({{0.0, 0.0}, {0.5, 0.0}});
  EXPECT_THROW(max_deviation(shorter, g), PreconditionError);
}

TEST(LcmProperties, MatchesGiftWrappingOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t knots = 2 + rng() % 63;
    const auto values = oracle::random_values(rng, knots);
    const auto ours = lcm_knots(values);
    ASSERT_EQ(ours, oracle::upper_hull(values)) << "trial " << trial;

    const auto g = unit_grid(values);
    const auto chain = lcm(g);
    for (std::size_t k = 0; k < knots; ++k) {
      EXPECT_GE(eval(chain, g.abscissa(k)), values[k] - kTol);
    }
    for (std::size_t s = 1; s + 1 < chain.size(); ++s) {
      EXPECT_GT(chain.slope(s - 1), chain.slope(s));
    }
    EXPECT_NEAR(max_deviation(chain, g).dev, oracle::gap_under_hull(values, ours), kTol);
  }
}

TEST(LcmProperties, Idempotent) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = unit_grid(oracle::random_values(rng, 2 + rng() % 40));
    const auto chain = lcm(g);
    const auto knots = lcm_knots(g.values());
    std::vector<double> on_grid(g.knot_count());
    for (std::size_t k = 0; k < on_grid.size(); ++k) on_grid[k] = eval(chain, g.abscissa(k));
    const auto again = lcm(GridFunction(g.left(), g.step(), on_grid));
    // Only the vertices survive; interpolated knots are collinear. Rounding in
    // the interpolation can leave numerically collinear knots, so compare
    // values rather than vertex lists.
    for (std::size_t k = 0; k < on_grid.size(); ++k) {
      EXPECT_NEAR(eval(again, g.abscissa(k)), on_grid[k], kTol);
    }
    for (std::size_t k : knots) EXPECT_NEAR(eval(again, g.abscissa(k)), g.values()[k], kTol);
  }
}

TEST(LcmProperties, ConcatenationOverEverySplit) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 400; ++trial) {
    const auto g = unit_grid(oracle::random_values(rng, 3 + rng() % 40));
    const auto whole = lcm(g);
    for (std::size_t b = 1; b + 1 < g.knot_count(); ++b) {
      const auto merged = concat_lcm(lcm(g.restrict(0, b)), lcm(g.restrict(b, g.cells())));
      expect_chain_near(merged, whole);
    }
  }
}

TEST(LcmProperties, FoldingAnyPartition) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 400; ++trial) {
    const auto g = unit_grid(oracle::random_values(rng, 4 + rng() % 60));
    std::vector<std::size_t> cuts{0};
    while (cuts.back() < g.cells()) {
      cuts.push_back(std::min(g.cells(), cuts.back() + 1 + rng() % 6));
    }
    if (cuts.size() < 3) continue;
    ConcaveChain acc = lcm(g.restrict(cuts[0], cuts[1]));
    for (std::size_t p = 2; p < cuts.size(); ++p) {
      acc = concat_lcm(acc, lcm(g.restrict(cuts[p - 1], cuts[p])));
    }
    expect_chain_near(acc, lcm(g));
  }
}

TEST(LcmProperties, LinearAndScaleEquivariance) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> positive(0.1, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = unit_grid(oracle::random_values(rng, 2 + rng() % 63));
    const auto base = lcm(g);
    const double dev = max_deviation(base, g).dev;

    const double c0 = coef(rng), c1 = coef(rng);
    const auto shifted = add_linear(g, c0, c1);
    for (std::size_t k = 0; k < g.knot_count(); ++k) {
      const double x = g.abscissa(k);
      EXPECT_NEAR(eval(lcm(shifted), x), eval(base, x) + c0 + c1 * x, kTol);
    }
    EXPECT_NEAR(max_deviation(lcm(shifted), shifted).dev, dev, kTol);

    const double c = positive(rng);
    std::vector<double> scaled(g.values().begin(), g.values().end());
    for (double& v : scaled) v *= c;
    const GridFunction gs(g.left(), g.step(), scaled);
    const auto chain_s = lcm(gs);
    for (std::size_t k = 0; k < g.knot_count(); ++k) {
      EXPECT_NEAR(eval(chain_s, g.abscissa(k)), c * eval(base, g.abscissa(k)), kTol * c);
    }
    EXPECT_NEAR(max_deviation(chain_s, gs).dev, c * dev, kTol * c);
  }
}

TEST(IncrementalMajorant, TracksPrefixHullsAndGaps) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 300; ++trial) {
    const auto values = oracle::random_values(rng, 2 + rng() % 80);
    const std::size_t first = rng() % (values.size() - 1);
    IncrementalMajorant grow(values, first);
    std::size_t last = first;
    while (last + 1 < values.size()) {
      const std::size_t next = std::min(values.size() - 1, last + 1 + rng() % 5);
      if (trial % 2 == 0) {
        grow.extend(next);
      } else {
        auto block = lcm_knots(std::span<const double>(values).subspan(last, next - last + 1));
        for (auto& k : block) k += last;
        grow.extend(next, block);
      }
      last = next;
      const auto part = std::span<const double>(values).subspan(first, last - first + 1);
      auto expected = oracle::upper_hull(part);
      for (auto& k : expected) k += first;
      ASSERT_EQ(std::vector<std::size_t>(grow.hull().begin(), grow.hull().end()), expected);
      EXPECT_NEAR(grow.max_deviation(), oracle::gap_under_hull(part, oracle::upper_hull(part)),
                  kTol);
    }
  }
}

TEST(IncrementalMajorant, RejectsBadExtensions) {
  const std::vector<double> values{0.0, 1.0, 0.5, 2.0};
  IncrementalMajorant grow(values, 0);
  EXPECT_THROW(grow.extend(0), DomainError);
  EXPECT_THROW(grow.extend(4), DomainError);
  const std::vector<std::size_t> wrong{1, 2};
  EXPECT_THROW(grow.extend(2, wrong), PreconditionError);
}
