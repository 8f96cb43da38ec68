#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ntn {

/// Closed time interval [t_start_s, t_end_s].
struct Interval {
  double t_start_s = 0.0;
  double t_end_s = 0.0;

  double duration_s() const { return t_end_s - t_start_s; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Default boundary refinement: brackets shrink below this width (s), so the
/// reported boundary is within half of it of the true crossing.
inline constexpr double kBoundaryTolerance_s = 1e-4;

/// Bisects the bracket between a time where `pred` holds and one where it does
/// not; returns the midpoint of the final bracket.
template <class Pred>
double bisect_boundary(Pred&& pred, double t_true, double t_false, double tol = kBoundaryTolerance_s) {
  while (std::abs(t_false - t_true) > tol) {
    const double mid = 0.5 * (t_true + t_false);
    if (pred(mid)) {
      t_true = mid;
    } else {
      t_false = mid;
    }
  }
  return 0.5 * (t_true + t_false);
}

/// Maximizer of a unimodal function on [lo, hi].
template <class F>
double golden_section_max(F&& f, double lo, double hi, double tol = 1e-6) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

/// Sample grid t0, t0 + step, ..., ending exactly at t1.
inline std::vector<double> sample_grid(double t0, double t1, double step) {
  std::vector<double> times;
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / step - 1e-9));
  times.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) times.push_back(t0 + static_cast<double>(k) * step);
  times.push_back(t1);
  return times;
}

/// Maximal sub-intervals of [t0, t1] on which `pred` holds. Coarse sampling at
/// `step`, then each transition is bisected. Features shorter than `step` can
/// be missed.
template <class Pred>
std::vector<Interval> find_intervals(Pred&& pred, double t0, double t1, double step,
                                     double tol = kBoundaryTolerance_s) {
  std::vector<Interval> out;
  const std::vector<double> grid = sample_grid(t0, t1, step);
  bool inside = pred(grid.front());
  double start = t0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const bool now = pred(grid[k]);
    if (now == inside) continue;
    if (now) {
      start = bisect_boundary(pred, grid[k], grid[k - 1], tol);
    } else {
      out.push_back({start, bisect_boundary(pred, grid[k - 1], grid[k], tol)});
    }
    inside = now;
  }
  if (inside) out.push_back({start, t1});
  return out;
}

}  // namespace ntn
