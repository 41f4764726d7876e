#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace fuzzylex {

/// A possibility degree supplied by a user, always in [0, 1].
class Rating {
 public:
  /// Throws ErrorCode::domain_error when `value` is NaN or outside [0, 1].
  explicit Rating(double value);

  double value() const noexcept { return value_; }

  friend bool operator==(Rating, Rating) = default;

 private:
  double value_;
};

/// Trapezoidal membership function [gamma, alpha, beta, delta] over the
/// degree axis [0, 1], together with the number of observations folded into
/// each side. [alpha, beta] is the nucleus, [gamma, delta] the support.
///
/// Values are immutable; `adjust` returns a new trapezoid.
class Trapezoid {
 public:
  using Count = std::uint64_t;

  /// Validates 0 <= gamma <= alpha <= beta <= delta <= 1 and both counts >= 1.
  /// Throws ErrorCode::domain_error otherwise.
  static Trapezoid from_parts(double gamma, double alpha, double beta, double delta,
                              Count left_count = 1, Count right_count = 1);

  double gamma() const noexcept { return gamma_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double delta() const noexcept { return delta_; }
  Count left_count() const noexcept { return left_count_; }
  Count right_count() const noexcept { return right_count_; }

  friend bool operator==(const Trapezoid&, const Trapezoid&) = default;

 private:
  Trapezoid(double gamma, double alpha, double beta, double delta, Count left, Count right)
      : gamma_(gamma), alpha_(alpha), beta_(beta), delta_(delta),
        left_count_(left), right_count_(right) {}

  double gamma_;
  double alpha_;
  double beta_;
  double delta_;
  Count left_count_;
  Count right_count_;
};

/// Departure function for a single rating: the nucleus collapses onto the
/// rating and the support is [max(0, 2t - 1), min(1, 2t)].
Trapezoid construct(Rating theta);

/// Centre of the nucleus, (alpha + beta) / 2.
double midpoint(const Trapezoid& t) noexcept;

enum class Side { left, right };

/// Side that `adjust` would move for `theta`. Ratings at or below the
/// nucleus midpoint go left.
Side adjustment_side(const Trapezoid& t, Rating theta) noexcept;

/// Folds one more rating into the running averages of one side.
///
/// Left: alpha and gamma become (n * old + theta) / (n + 1) with n the left
/// count, which is then incremented. Right: the same for beta and delta with
/// the right count. The side is chosen from the midpoint before the update.
Trapezoid adjust(const Trapezoid& t, Rating theta);

/// Membership degree of `x`. Throws ErrorCode::domain_error for x outside [0, 1].
double evaluate(const Trapezoid& t, double x);

struct CurvePoint {
  double x;
  double mu;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// `n` evenly spaced samples over [0, 1] merged with the four vertices
/// (gamma, 0), (alpha, 1), (beta, 1), (delta, 0), ordered by x so that a
/// polyline through them draws the trapezoid, vertical edges included.
/// Exact duplicate points are dropped. Throws ErrorCode::domain_error for n < 2.
std::vector<CurvePoint> sample(const Trapezoid& t, int n);

}  // namespace fuzzylex
