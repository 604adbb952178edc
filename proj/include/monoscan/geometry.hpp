#ifndef MONOSCAN_GEOMETRY_HPP_
#define MONOSCAN_GEOMETRY_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace monoscan {

// Continuous piecewise-linear function given by its values on the uniform
// grid left + k * step, k = 0..K.
class GridFunction {
 public:
  GridFunction(double left, double step, std::vector<double> values);

  double left() const { return left_; }
  double step() const { return step_; }
  double right() const { return abscissa(values_.size() - 1); }
  double abscissa(std::size_t k) const {
    return left_ + static_cast<double>(k) * step_;
  }
  std::span<const double> values() const { return values_; }
  std::size_t knot_count() const { return values_.size(); }
  // Number of grid cells, K.
  std::size_t cells() const { return values_.size() - 1; }

  // Restriction to the knots first..last (inclusive).
  GridFunction restrict(std::size_t first, std::size_t last) const;

 private:
  double left_;
  double step_;
  std::vector<double> values_;
};

struct Vertex {
  double x;
  double v;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Concave piecewise-linear function stored as its minimal vertex list:
// abscissas strictly increasing, slopes strictly decreasing.
class ConcaveChain {
 public:
  explicit ConcaveChain(std::vector<Vertex> vertices);

  std::span<const Vertex> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vertex& front() const { return vertices_.front(); }
  const Vertex& back() const { return vertices_.back(); }
  double slope(std::size_t segment) const;

  friend bool operator==(const ConcaveChain&, const ConcaveChain&) = default;

 private:
  struct Unchecked {};
  ConcaveChain(std::vector<Vertex> vertices, Unchecked) : vertices_(std::move(vertices)) {}
  friend ConcaveChain lcm(const GridFunction& g);
  friend ConcaveChain concat_lcm(const ConcaveChain& left, const ConcaveChain& right);

  std::vector<Vertex> vertices_;
};

// Knot indices of the upper concave hull of (k, values[k]). Collinear
// points are dropped, so consecutive slopes are strictly decreasing.
std::vector<std::size_t> lcm_knots(std::span<const double> values);

// Least concave majorant of g on its whole domain.
ConcaveChain lcm(const GridFunction& g);

// Least concave majorant of the concatenation of two chains that meet at a
// common vertex (last of left == first of right).
ConcaveChain concat_lcm(const ConcaveChain& left, const ConcaveChain& right);

double eval(const ConcaveChain& chain, double x);

struct Deviation {
  double dev = 0.0;
  std::size_t argmax = 0;  // knot index of g
};

// max over the knots of g of chain(x_k) - g_k. This is the supremum over the
// continuous domain since both functions are linear between knots of g.
Deviation max_deviation(const ConcaveChain& chain, const GridFunction& g);

// Least concave majorant of values[first..last] grown to the right one block
// at a time, with the maximal gap between majorant and data kept up to date.
//
// Each hull segment caches the largest gap over the knots it spans; after an
// extension only the segments from the first popped vertex onwards are
// rescanned.
class IncrementalMajorant {
 public:
  IncrementalMajorant(std::span<const double> values, std::size_t first);

  // Appends the knots last()+1..last_knot. `block_hull` may list the hull
  // knots of values[last()..last_knot] (as returned by lcm_knots, offset to
  // absolute indices); only those are pushed, which gives the same majorant.
  // When empty, every knot is pushed.
  void extend(std::size_t last_knot, std::span<const std::size_t> block_hull = {});

  std::size_t first() const { return first_; }
  std::size_t last() const { return last_; }
  std::span<const std::size_t> hull() const { return hull_; }
  double max_deviation() const { return prefix_max_.empty() ? 0.0 : prefix_max_.back(); }

 private:
  void push(std::size_t knot);
  void rescan_from(std::size_t segment);

  std::span<const double> values_;
  std::size_t first_;
  std::size_t last_;
  std::vector<std::size_t> hull_;
  std::vector<double> segment_max_;
  std::vector<double> prefix_max_;
  std::size_t lowest_touched_ = 0;
};

}  // namespace monoscan

#endif  // MONOSCAN_GEOMETRY_HPP_
