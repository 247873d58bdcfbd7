// Convex piecewise-linear cost curves.
#pragma once

#include <algorithm>
#include <vector>

#include "dncuc/common.hpp"

namespace dncuc {

// Convex nondecreasing piecewise-linear function given by breakpoints
// (x_0, y_0), ..., (x_K, y_K) with x_0 = 0, y_0 = 0. Used for generator
// fuel cost: value(p) is the production cost at output p.
class PiecewiseLinear {
public:
  PiecewiseLinear() = default;

  PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
      throw validation_error("piecewise-linear curve needs >= 2 breakpoints");
    if (xs_.front() != 0.0 || ys_.front() != 0.0)
      throw validation_error("fuel curve must start at (0, 0)");
    for (size_t s = 1; s < xs_.size(); ++s) {
      if (xs_[s] <= xs_[s - 1])
        throw validation_error("fuel curve breakpoints must be strictly increasing");
      if (ys_[s] < ys_[s - 1])
        throw validation_error("fuel curve must be nondecreasing");
    }
    const double slope_tol = 1e-9;
    for (size_t s = 2; s < xs_.size(); ++s) {
      if (slope(s - 1) < slope(s - 2) - slope_tol)
        throw validation_error("fuel curve must be convex (nondecreasing slopes)");
    }
  }

  size_t segments() const { return xs_.size() - 1; }
  double x(size_t i) const { return xs_[i]; }
  double y(size_t i) const { return ys_[i]; }
  double xmax() const { return xs_.back(); }

  // Slope of segment s, covering [x_s, x_{s+1}].
  double slope(size_t s) const { return (ys_[s + 1] - ys_[s]) / (xs_[s + 1] - xs_[s]); }

  // Intercept of segment s extended to the full axis: value(p) = max_s (slope_s p + intercept_s).
  double intercept(size_t s) const { return ys_[s] - slope(s) * xs_[s]; }

  double value(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= xs_.back())
      return ys_.back() + slope(segments() - 1) * (p - xs_.back());
    auto it = std::upper_bound(xs_.begin(), xs_.end(), p);
    size_t s = static_cast<size_t>(it - xs_.begin()) - 1;
    return ys_[s] + slope(s) * (p - xs_[s]);
  }

  bool operator==(const PiecewiseLinear& o) const { return xs_ == o.xs_ && ys_ == o.ys_; }

private:
  std::vector<double> xs_, ys_;
};

}  // namespace dncuc
