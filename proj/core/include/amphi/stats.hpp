#pragma once

#include <span>

namespace amphi {

/// A test statistic and its p-value. `valid` is false when the test is
/// undefined for the data (zero margin, zero variance); both fields are NaN then.
struct TestResult {
  double statistic = 0.0;
  double p = 1.0;
  bool valid = true;
};

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
  bool valid = true;
};

double mean(std::span<const double> xs);
/// Unbiased sample variance (n - 1 denominator); 0 for fewer than two values.
double sample_variance(std::span<const double> xs);
/// Standard error of the mean; 0 for fewer than two values.
double standard_error(std::span<const double> xs);

/// Pearson chi-square on the 2x2 solved/unsolved table, one degree of freedom,
/// no continuity correction. Throws InvalidArgument unless 0 <= solved <= total
/// and total > 0.
TestResult chi2_proportions(int a_solved, int a_total, int b_solved, int b_total);

/// Variance ratio var(xs)/var(ys), two-sided p from the F distribution.
/// Throws InvalidArgument if either sample has fewer than three values.
TestResult f_test(std::span<const double> xs, std::span<const double> ys);

/// Two-sample t test on the means, two-sided. Pooled variance when `equal_var`,
/// Welch-Satterthwaite otherwise. Same preconditions as f_test.
TestResult t_test(std::span<const double> xs, std::span<const double> ys, bool equal_var);

/// Ordinary least squares ys ~ slope * xs + intercept with Pearson r.
/// Throws InvalidArgument on size mismatch or fewer than three points.
Regression linregress(std::span<const double> xs, std::span<const double> ys);

}  // namespace amphi
