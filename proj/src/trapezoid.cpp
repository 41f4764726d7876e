#include "fuzzylex/trapezoid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "fuzzylex/error.hpp"

namespace fuzzylex {

namespace {

bool is_degree(double v) noexcept { return !std::isnan(v) && v >= 0.0 && v <= 1.0; }

std::string describe(double gamma, double alpha, double beta, double delta) {
  std::ostringstream out;
  out.precision(17);
  out << '[' << gamma << ", " << alpha << ", " << beta << ", " << delta << ']';
  return out.str();
}

// Running average of `count` previous observations and one new one.
double fold(Trapezoid::Count count, double current, double theta) noexcept {
  const auto n = static_cast<double>(count);
  return std::fma(n, current, theta) / (n + 1.0);
}

}  // namespace

Rating::Rating(double value) : value_(value) {
  if (!is_degree(value)) {
    std::ostringstream out;
    out << "possibility degree must lie in [0, 1], got " << value;
    throw_error(ErrorCode::domain_error, out.str());
  }
}

Trapezoid Trapezoid::from_parts(double gamma, double alpha, double beta, double delta,
                                Count left_count, Count right_count) {
  if (!(is_degree(gamma) && is_degree(alpha) && is_degree(beta) && is_degree(delta))) {
    throw_error(ErrorCode::domain_error,
                "trapezoid stones must lie in [0, 1]: " + describe(gamma, alpha, beta, delta));
  }
  if (!(gamma <= alpha && alpha <= beta && beta <= delta)) {
    throw_error(ErrorCode::domain_error,
                "trapezoid stones must satisfy gamma <= alpha <= beta <= delta: " +
                    describe(gamma, alpha, beta, delta));
  }
  if (left_count < 1 || right_count < 1) {
    throw_error(ErrorCode::domain_error, "trapezoid observation counts must be at least 1");
  }
  return Trapezoid(gamma, alpha, beta, delta, left_count, right_count);
}

Trapezoid construct(Rating theta) {
  const double t = theta.value();
  // Both branches give gamma = 0, delta = 1 at t = 0.5.
  const double gamma = std::max(0.0, 2.0 * t - 1.0);
  const double delta = std::min(1.0, 2.0 * t);
  return Trapezoid::from_parts(gamma, t, t, delta);
}

double midpoint(const Trapezoid& t) noexcept { return (t.alpha() + t.beta()) / 2.0; }

Side adjustment_side(const Trapezoid& t, Rating theta) noexcept {
  return theta.value() <= midpoint(t) ? Side::left : Side::right;
}

Trapezoid adjust(const Trapezoid& t, Rating theta) {
  const double v = theta.value();
  // The clamps only absorb last-ulp rounding; mathematically the averages
  // already stay inside the neighbouring stones.
  if (adjustment_side(t, theta) == Side::left) {
    const double alpha = std::min(fold(t.left_count(), t.alpha(), v), t.beta());
    const double gamma = std::min(fold(t.left_count(), t.gamma(), v), alpha);
    return Trapezoid::from_parts(gamma, alpha, t.beta(), t.delta(), t.left_count() + 1,
                                 t.right_count());
  }
  const double beta = std::max(fold(t.right_count(), t.beta(), v), t.alpha());
  const double delta = std::max(fold(t.right_count(), t.delta(), v), beta);
  return Trapezoid::from_parts(t.gamma(), t.alpha(), beta, delta, t.left_count(),
                               t.right_count() + 1);
}

double evaluate(const Trapezoid& t, double x) {
  if (!is_degree(x)) {
    std::ostringstream out;
    out << "membership argument must lie in [0, 1], got " << x;
    throw_error(ErrorCode::domain_error, out.str());
  }
  if (x < t.gamma() || x > t.delta()) return 0.0;
  if (x >= t.alpha() && x <= t.beta()) return 1.0;
  if (x < t.alpha()) return (x - t.gamma()) / (t.alpha() - t.gamma());
  return (t.delta() - x) / (t.delta() - t.beta());
}

std::vector<CurvePoint> sample(const Trapezoid& t, int n) {
  if (n < 2) throw_error(ErrorCode::domain_error, "sample count must be at least 2");

  // Rank orders points sharing an abscissa so vertical edges are drawn
  // bottom-to-top on the left and top-to-bottom on the right.
  std::vector<std::tuple<double, int, double>> ranked;
  ranked.reserve(static_cast<std::size_t>(n) + 4);
  for (int i = 0; i < n; ++i) {
    const double x = i == n - 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    ranked.emplace_back(x, 2, evaluate(t, x));
  }
  ranked.emplace_back(t.gamma(), 0, 0.0);
  ranked.emplace_back(t.alpha(), 1, 1.0);
  ranked.emplace_back(t.beta(), 3, 1.0);
  ranked.emplace_back(t.delta(), 4, 0.0);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });

  std::vector<CurvePoint> points;
  points.reserve(ranked.size());
  for (const auto& [x, rank, mu] : ranked) {
    const CurvePoint p{x, mu};
    if (points.empty() || !(points.back() == p)) points.push_back(p);
  }
  return points;
}

}  // namespace fuzzylex
