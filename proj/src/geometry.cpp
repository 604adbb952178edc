#include "monoscan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monoscan/errors.hpp"

namespace monoscan {
namespace {

// True when the middle point b does not lie strictly above the chord a-c,
// i.e. slope(a, b) <= slope(b, c).
inline bool not_above(double xa, double va, double xb, double vb, double xc,
                      double vc) {
  return (vb - va) * (xc - xb) <= (vc - vb) * (xb - xa);
}

// As not_above, but a middle point within rounding of the chord also counts.
// Vertex abscissae are rounded grid points, so exact collinearity is lost.
inline bool not_above_rounded(const Vertex& a, const Vertex& b, const Vertex& c) {
  const double lhs = (b.v - a.v) * (c.x - b.x);
  const double rhs = (c.v - b.v) * (b.x - a.x);
  return lhs - rhs <= 1e-12 * (std::abs(lhs) + std::abs(rhs));
}

inline bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

GridFunction::GridFunction(double left, double step, std::vector<double> values)
    : left_(left), step_(step), values_(std::move(values)) {
  if (values_.size() < 2) {
    throw DomainError("GridFunction needs at least 2 knots");
  }
  if (!(step_ > 0.0) || !std::isfinite(step_) || !std::isfinite(left_)) {
    throw DomainError("GridFunction step must be positive and finite");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("GridFunction values must be finite");
  }
}

GridFunction GridFunction::restrict(std::size_t first, std::size_t last) const {
  if (first >= last || last >= values_.size()) {
    throw DomainError("restrict: need first < last <= K");
  }
  return GridFunction(abscissa(first), step_,
                      std::vector<double>(values_.begin() + first,
                                          values_.begin() + last + 1));
}

ConcaveChain::ConcaveChain(std::vector<Vertex> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw DomainError("ConcaveChain needs a vertex");
  for (const Vertex& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.v)) {
      throw DomainError("ConcaveChain vertices must be finite");
    }
  }
  for (std::size_t k = 1; k < vertices_.size(); ++k) {
    if (!(vertices_[k].x > vertices_[k - 1].x)) {
      throw DomainError("ConcaveChain abscissas must increase strictly");
    }
  }
  for (std::size_t k = 2; k < vertices_.size(); ++k) {
    const Vertex& a = vertices_[k - 2];
    const Vertex& b = vertices_[k - 1];
    const Vertex& c = vertices_[k];
    if (not_above(a.x, a.v, b.x, b.v, c.x, c.v)) {
      throw DomainError("ConcaveChain slopes must decrease strictly");
    }
  }
}

double ConcaveChain::slope(std::size_t segment) const {
  const Vertex& a = vertices_.at(segment);
  const Vertex& b = vertices_.at(segment + 1);
  return (b.v - a.v) / (b.x - a.x);
}

std::vector<std::size_t> lcm_knots(std::span<const double> values) {
  std::vector<std::size_t> hull;
  hull.reserve(16);
  for (std::size_t c = 0; c < values.size(); ++c) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      if (!not_above(static_cast<double>(a), values[a], static_cast<double>(b),
                     values[b], static_cast<double>(c), values[c])) {
        break;
      }
      hull.pop_back();
    }
    hull.push_back(c);
  }
  return hull;
}

ConcaveChain lcm(const GridFunction& g) {
  const auto knots = lcm_knots(g.values());
  std::vector<Vertex> vertices;
  vertices.reserve(knots.size());
  for (std::size_t k : knots) vertices.push_back({g.abscissa(k), g.values()[k]});
  return ConcaveChain(std::move(vertices), ConcaveChain::Unchecked{});
}

ConcaveChain concat_lcm(const ConcaveChain& left, const ConcaveChain& right) {
  const Vertex& joint = left.back();
  const Vertex& start = right.front();
  if (!close(joint.x, start.x) || !close(joint.v, start.v)) {
    throw PreconditionError("concat_lcm: chains do not meet at a common vertex");
  }
  std::vector<Vertex> stack(left.vertices().begin(), left.vertices().end());
  const auto tail = right.vertices().subspan(1);
  for (const Vertex& c : tail) {
    while (stack.size() >= 2) {
      const Vertex& a = stack[stack.size() - 2];
      const Vertex& b = stack.back();
      if (!not_above_rounded(a, b, c)) break;
      stack.pop_back();
    }
    stack.push_back(c);
  }
  return ConcaveChain(std::move(stack), ConcaveChain::Unchecked{});
}

double eval(const ConcaveChain& chain, double x) {
  const auto vs = chain.vertices();
  // Endpoints that differ only by rounding of the grid abscissae are accepted.
  if (close(x, vs.front().x)) x = vs.front().x;
  if (close(x, vs.back().x)) x = vs.back().x;
  if (!(x >= vs.front().x && x <= vs.back().x)) {
    throw DomainError("eval: x = " + std::to_string(x) + " outside the chain domain");
  }
  auto it = std::lower_bound(vs.begin(), vs.end(), x,
                             [](const Vertex& p, double t) { return p.x < t; });
  if (it->x == x) return it->v;
  const Vertex& b = *it;
  const Vertex& a = *(it - 1);
  return a.v + (b.v - a.v) * ((x - a.x) / (b.x - a.x));
}

Deviation max_deviation(const ConcaveChain& chain, const GridFunction& g) {
  const auto vs = chain.vertices();
  if (!close(vs.front().x, g.left()) || !close(vs.back().x, g.right())) {
    throw PreconditionError("max_deviation: chain and grid function domains differ");
  }
  const auto values = g.values();
  Deviation out;
  std::size_t seg = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    double x = std::clamp(g.abscissa(k), vs.front().x, vs.back().x);
    while (seg + 1 < vs.size() - 1 && x > vs[seg + 1].x) ++seg;
    double hull_value;
    if (vs.size() == 1) {
      hull_value = vs.front().v;
    } else {
      const Vertex& a = vs[seg];
      const Vertex& b = vs[seg + 1];
      hull_value = (x == a.x)   ? a.v
                   : (x == b.x) ? b.v
                                : a.v + (b.v - a.v) * ((x - a.x) / (b.x - a.x));
    }
    const double gap = hull_value - values[k];
    if (gap > out.dev) {
      out.dev = gap;
      out.argmax = k;
    }
  }
  return out;
}

IncrementalMajorant::IncrementalMajorant(std::span<const double> values,
                                         std::size_t first)
    : values_(values), first_(first), last_(first) {
  if (first >= values.size()) throw DomainError("IncrementalMajorant: bad anchor");
  hull_.push_back(first);
}

void IncrementalMajorant::push(std::size_t c) {
  const double vc = values_[c];
  while (hull_.size() >= 2) {
    const std::size_t a = hull_[hull_.size() - 2];
    const std::size_t b = hull_.back();
    if (!not_above(static_cast<double>(a), values_[a], static_cast<double>(b),
                   values_[b], static_cast<double>(c), vc)) {
      break;
    }
    hull_.pop_back();
  }
  lowest_touched_ = std::min(lowest_touched_, hull_.size());
  hull_.push_back(c);
}

void IncrementalMajorant::extend(std::size_t last_knot,
                                 std::span<const std::size_t> block_hull) {
  if (last_knot <= last_ || last_knot >= values_.size()) {
    throw DomainError("IncrementalMajorant::extend: knot out of range");
  }
  lowest_touched_ = hull_.size();
  if (block_hull.empty()) {
    for (std::size_t k = last_ + 1; k <= last_knot; ++k) push(k);
  } else {
    if (block_hull.front() != last_ || block_hull.back() != last_knot) {
      throw PreconditionError("IncrementalMajorant::extend: block hull does not fit");
    }
    for (std::size_t k : block_hull.subspan(1)) push(k);
  }
  last_ = last_knot;
  rescan_from(lowest_touched_ - 1);
}

void IncrementalMajorant::rescan_from(std::size_t segment) {
  const std::size_t segments = hull_.size() - 1;
  segment_max_.resize(segments);
  prefix_max_.resize(segments);
  for (std::size_t s = segment; s < segments; ++s) {
    const std::size_t a = hull_[s];
    const std::size_t b = hull_[s + 1];
    const double va = values_[a];
    const double slope = (values_[b] - va) / static_cast<double>(b - a);
    double best = 0.0;
    for (std::size_t k = a + 1; k < b; ++k) {
      const double gap = va + slope * static_cast<double>(k - a) - values_[k];
      best = std::max(best, gap);
    }
    segment_max_[s] = best;
    prefix_max_[s] = s == 0 ? best : std::max(prefix_max_[s - 1], best);
  }
}

}  // namespace monoscan
