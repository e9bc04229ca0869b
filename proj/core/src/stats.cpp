#include "amphi/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "amphi/errors.hpp"

namespace amphi {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TestResult undefined() { return {kNaN, kNaN, false}; }

void need_three(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() < 3 || ys.size() < 3) throw InvalidArgument("two-sample test needs n >= 3 per sample");
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) return kNaN;
  double s = 0.0;
  for (const double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (const double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

TestResult chi2_proportions(int a_solved, int a_total, int b_solved, int b_total) {
  if (a_total <= 0 || b_total <= 0) throw InvalidArgument("chi2: totals must be positive");
  if (a_solved < 0 || a_solved > a_total || b_solved < 0 || b_solved > b_total) {
    throw InvalidArgument("chi2: solved counts must lie in [0, total]");
  }
  const double obs[2][2] = {{double(a_solved), double(a_total - a_solved)},
                            {double(b_solved), double(b_total - b_solved)}};
  const double rows[2] = {double(a_total), double(b_total)};
  const double cols[2] = {obs[0][0] + obs[1][0], obs[0][1] + obs[1][1]};
  const double n = rows[0] + rows[1];
  if (cols[0] == 0.0 || cols[1] == 0.0) return undefined();

  double stat = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double e = rows[i] * cols[j] / n;
      stat += (obs[i][j] - e) * (obs[i][j] - e) / e;
    }
  }
  const boost::math::chi_squared dist(1.0);
  return {stat, boost::math::cdf(boost::math::complement(dist, stat)), true};
}

TestResult f_test(std::span<const double> xs, std::span<const double> ys) {
  need_three(xs, ys);
  const double vx = sample_variance(xs);
  const double vy = sample_variance(ys);
  if (!(vx > 0.0) || !(vy > 0.0)) return undefined();
  const double f = vx / vy;
  const boost::math::fisher_f dist(static_cast<double>(xs.size() - 1),
                                   static_cast<double>(ys.size() - 1));
  const double lower = boost::math::cdf(dist, f);
  const double upper = boost::math::cdf(boost::math::complement(dist, f));
  return {f, std::min(1.0, 2.0 * std::min(lower, upper)), true};
}

TestResult t_test(std::span<const double> xs, std::span<const double> ys, bool equal_var) {
  need_three(xs, ys);
  const auto nx = static_cast<double>(xs.size());
  const auto ny = static_cast<double>(ys.size());
  const double vx = sample_variance(xs);
  const double vy = sample_variance(ys);
  const double diff = mean(xs) - mean(ys);

  double se2 = 0.0;
  double dof = 0.0;
  if (equal_var) {
    const double pooled = ((nx - 1.0) * vx + (ny - 1.0) * vy) / (nx + ny - 2.0);
    se2 = pooled * (1.0 / nx + 1.0 / ny);
    dof = nx + ny - 2.0;
  } else {
    const double ax = vx / nx;
    const double ay = vy / ny;
    se2 = ax + ay;
    if (se2 > 0.0) dof = se2 * se2 / (ax * ax / (nx - 1.0) + ay * ay / (ny - 1.0));
  }
  if (!(se2 > 0.0)) {
    // Both samples constant: identical means give t = 0, anything else is undefined.
    if (diff == 0.0) return {0.0, 1.0, true};
    return undefined();
  }
  const double t = diff / std::sqrt(se2);
  const boost::math::students_t dist(dof);
  return {t, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), true};
}

Regression linregress(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("linregress: size mismatch");
  if (xs.size() < 3) throw InvalidArgument("linregress: needs at least three points");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0)) return {kNaN, kNaN, kNaN, false};
  Regression out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r = syy > 0.0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
  return out;
}

}  // namespace amphi
