#include "amphi/trajectory.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "amphi/errors.hpp"

namespace amphi {
namespace {

constexpr int kOrder = 8;
constexpr int kQuadPoints = 20;

struct GaussLegendre {
  std::array<double, kQuadPoints> x{};  // on [0, 1]
  std::array<double, kQuadPoints> w{};

  GaussLegendre() {
    const int n = kQuadPoints;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = 0.5 * (1.0 - z);
      w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre& quadrature() {
  static const GaussLegendre gl;
  return gl;
}

using Vec16 = Eigen::Matrix<double, 16, 1>;

// Row vectors in time-normalised coefficients alpha_i = a_i T^i.
Eigen::Matrix<double, 1, kOrder> value_row(double tau) {
  Eigen::Matrix<double, 1, kOrder> r;
  double p = 1.0;
  for (int i = 0; i < kOrder; ++i, p *= tau) r(i) = p;
  return r;
}
Eigen::Matrix<double, 1, kOrder> deriv_row(double tau) {
  Eigen::Matrix<double, 1, kOrder> r = Eigen::Matrix<double, 1, kOrder>::Zero();
  double p = 1.0;
  for (int i = 1; i < kOrder; ++i, p *= tau) r(i) = i * p;
  return r;
}
Eigen::Matrix<double, 1, kOrder> second_row(double tau) {
  Eigen::Matrix<double, 1, kOrder> r = Eigen::Matrix<double, 1, kOrder>::Zero();
  double p = 1.0;
  for (int i = 2; i < kOrder; ++i, p *= tau) r(i) = i * (i - 1) * p;
  return r;
}

// Arc-length objective over the free coordinates of one or two intervals.
struct Objective {
  std::vector<double> durations;  // T per interval
  int n_vars = 0;

  // value, gradient and Hessian w.r.t. the stacked normalised coefficients
  double eval(const Eigen::VectorXd& c, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) const {
    const auto& gl = quadrature();
    double total = 0.0;
    if (grad) grad->setZero(n_vars);
    if (hess) hess->setZero(n_vars, n_vars);
    for (std::size_t seg = 0; seg < durations.size(); ++seg) {
      const double T = durations[seg];
      const int off = static_cast<int>(seg) * kOrder;
      for (int q = 0; q < kQuadPoints; ++q) {
        const Eigen::Matrix<double, 1, kOrder> g = deriv_row(gl.x[q]) / T;
        const double xdot = g.dot(c.segment<kOrder>(off));
        const double s = std::sqrt(1.0 + xdot * xdot);
        const double wq = gl.w[q] * T;
        total += wq * s;
        if (grad) grad->segment<kOrder>(off) += wq * (xdot / s) * g.transpose();
        if (hess) {
          hess->block<kOrder, kOrder>(off, off) += wq / (s * s * s) * (g.transpose() * g);
        }
      }
    }
    return total;
  }
};

Poly7 denormalise(const Eigen::VectorXd& c, int off, double T) {
  Poly7 out{};
  double scale = 1.0;
  for (int i = 0; i < kOrder; ++i, scale *= T) out[i] = c(off + i) / scale;
  return out;
}

}  // namespace

AxisSample eval_poly(const Poly7& c, double tau) {
  AxisSample s;
  for (int i = kOrder - 1; i >= 0; --i) s.p = s.p * tau + c[i];
  for (int i = kOrder - 1; i >= 1; --i) s.v = s.v * tau + i * c[i];
  for (int i = kOrder - 1; i >= 2; --i) s.a = s.a * tau + i * (i - 1) * c[i];
  return s;
}

double axis_arc_length(const Poly7& c, double T) {
  if (T <= 0.0) return 0.0;
  const auto& gl = quadrature();
  double total = 0.0;
  for (int q = 0; q < kQuadPoints; ++q) {
    const double v = eval_poly(c, gl.x[q] * T).v;
    total += gl.w[q] * T * std::sqrt(1.0 + v * v);
  }
  return total;
}

AxisSolution solve_axis(double x0, double v0, double a0, double x1, double v1, double x2, double T1,
                        double T2, const SplineOptions& options) {
  if (!(T1 > 0.0) || T2 < 0.0) throw InvalidArgument("solve_axis: bad interval durations");
  const bool two = T2 > 0.0;
  const int n = two ? 2 * kOrder : kOrder;

  // Constraint rows in normalised coefficients, scaled so that derivative rows
  // are O(1) in the normalised variables.
  std::vector<std::pair<Eigen::RowVectorXd, double>> rows;
  auto row = [&](int off, const Eigen::Matrix<double, 1, kOrder>& r) {
    Eigen::RowVectorXd full = Eigen::RowVectorXd::Zero(n);
    full.segment<kOrder>(off) = r;
    return full;
  };
  rows.emplace_back(row(0, value_row(0.0)), x0);
  rows.emplace_back(row(0, deriv_row(0.0)), v0 * T1);
  rows.emplace_back(row(0, second_row(0.0)), a0 * T1 * T1);
  rows.emplace_back(row(0, value_row(1.0)), x1);
  rows.emplace_back(row(0, deriv_row(1.0)), v1 * T1);
  if (two) {
    rows.emplace_back(row(kOrder, value_row(0.0)), x1);
    rows.emplace_back(row(kOrder, deriv_row(0.0)), v1 * T2);
    // a''(T1)/T1^2 = b''(0)/T2^2, multiplied through by T1^2
    const double ratio = (T1 * T1) / (T2 * T2);
    rows.emplace_back(row(0, second_row(1.0)) - ratio * row(kOrder, second_row(0.0)), 0.0);
    rows.emplace_back(row(kOrder, value_row(1.0)), x2);
    rows.emplace_back(row(kOrder, deriv_row(1.0)), 0.0);
    rows.emplace_back(row(kOrder, second_row(1.0)), 0.0);
  } else {
    rows.emplace_back(row(0, second_row(1.0)), 0.0);
  }

  const int m = static_cast<int>(rows.size());
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    A.row(i) = rows[i].first;
    rhs(i) = rows[i].second;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd particular = svd.solve(rhs);
  const Eigen::MatrixXd null = svd.matrixV().rightCols(n - m);

  Objective obj;
  obj.durations = two ? std::vector<double>{T1, T2} : std::vector<double>{T1};
  obj.n_vars = n;

  AxisSolution sol;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n - m);
  Eigen::VectorXd grad, gz;
  Eigen::MatrixXd hess;
  double f = obj.eval(particular, &grad, &hess);
  sol.cost_min_norm = f;
  for (int it = 0; it < options.max_iterations; ++it) {
    gz = null.transpose() * grad;
    if (gz.norm() < options.gradient_tolerance) {
      sol.converged = true;
      break;
    }
    const Eigen::MatrixXd hz = null.transpose() * hess * null;
    const Eigen::VectorXd dir = -hz.ldlt().solve(gz);
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      const Eigen::VectorXd trial = z + step * dir;
      const double ft = obj.eval(particular + null * trial, nullptr, nullptr);
      if (ft <= f + 1e-4 * step * gz.dot(dir)) {
        z = trial;
        accepted = true;
        break;
      }
    }
    ++sol.iterations;
    if (!accepted) break;  // no descent left at machine precision
    f = obj.eval(particular + null * z, &grad, &hess);
  }
  if (!sol.converged) {
    gz = null.transpose() * grad;
    sol.converged = gz.norm() < options.gradient_tolerance;
  }

  Eigen::VectorXd best = particular + null * z;
  double best_cost = f;
  if (!sol.converged) {
    best = particular;
    best_cost = sol.cost_min_norm;
  }
  sol.a = denormalise(best, 0, T1);
  sol.a_min_norm = denormalise(particular, 0, T1);
  if (two) {
    sol.b = denormalise(best, kOrder, T2);
    sol.b_min_norm = denormalise(particular, kOrder, T2);
  } else {
    sol.b = Poly7{};
    sol.b[0] = x1;
    sol.b_min_norm = sol.b;
  }
  sol.cost = best_cost;
  return sol;
}

std::vector<double> arrival_times(std::span<const Vec3> nodes, double v_c, double t0) {
  if (!(v_c > 0.0)) throw InvalidArgument("arrival_times: v_c must be positive");
  std::vector<double> times;
  times.reserve(nodes.size());
  if (nodes.empty()) return times;
  times.push_back(t0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double d = (nodes[i] - nodes[i - 1]).norm();
    if (d == 0.0) throw InvalidArgument("arrival_times: consecutive nodes coincide");
    times.push_back(times.back() + d / v_c);
  }
  return times;
}

std::vector<Vec3> node_velocities(std::span<const Vec3> nodes, double v_c,
                                  const Vec3& start_velocity, bool prefilter) {
  if (nodes.size() < 2) throw InvalidArgument("node_velocities: need at least two nodes");
  std::vector<Vec3> out(nodes.size(), Vec3::Zero());
  out.front() = start_velocity;
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const Vec3 in = (nodes[i] - nodes[i - 1]).normalized();
    Vec3 vel = v_c * in;
    if (prefilter) {
      const Vec3 next = nodes[i + 1] - nodes[i];
      const Vec3 outgoing = next.norm() > 0.0 ? Vec3(next.normalized()) : Vec3::Zero();
      for (int a = 0; a < 3; ++a) {
        if (in[a] * outgoing[a] < 0.0) vel[a] = 0.0;
      }
    }
    out[i] = vel;
  }
  return out;
}

TrajectorySegment build_spline(const KinematicState& start, double t0, const Vec3& n1,
                               const Vec3& n2, double v_c, const SplineOptions& options) {
  if (!(v_c > 0.0)) throw InvalidArgument("build_spline: v_c must be positive");
  const double d01 = (n1 - start.x).norm();
  if (d01 == 0.0) throw InvalidArgument("build_spline: first node coincides with start");
  const bool single = (n2 - n1).norm() == 0.0;

  TrajectorySegment seg;
  seg.start = start;
  seg.n1 = n1;
  seg.n2 = n2;
  seg.t0 = t0;
  seg.t1 = t0 + d01 / v_c;
  seg.t2 = single ? seg.t1 : seg.t1 + (n2 - n1).norm() / v_c;
  if (!single) {
    const std::array<Vec3, 3> nodes{start.x, n1, n2};
    seg.node_velocity = node_velocities(nodes, v_c, start.v, options.prefilter)[1];
  }

  const double T1 = seg.t1 - seg.t0;
  const double T2 = seg.t2 - seg.t1;
  for (int a = 0; a < 3; ++a) {
    const AxisSolution s = solve_axis(start.x[a], start.v[a], start.a[a], n1[a],
                                      seg.node_velocity[a], n2[a], T1, T2, options);
    seg.coeffs_01[a] = s.a;
    seg.coeffs_12[a] = s.b;
    seg.optimized = seg.optimized && s.converged;
    seg.iterations = std::max(seg.iterations, s.iterations);
  }
  return seg;
}

KinematicState eval_spline(const TrajectorySegment& seg, double t) {
  constexpr double kSlack = 1e-9;
  if (t < seg.t0 - kSlack || t > seg.t2 + kSlack) {
    throw InvalidArgument("eval_spline: time outside segment");
  }
  KinematicState out;
  const bool first = t < seg.t1;
  const double tau = first ? t - seg.t0 : t - seg.t1;
  for (int a = 0; a < 3; ++a) {
    const AxisSample s = eval_poly(first ? seg.coeffs_01[a] : seg.coeffs_12[a], std::max(tau, 0.0));
    out.x[a] = s.p;
    out.v[a] = s.v;
    out.a[a] = s.a;
  }
  return out;
}

double constraint_residual(const TrajectorySegment& seg) {
  const double T1 = seg.t1 - seg.t0;
  const double T2 = seg.t2 - seg.t1;
  double worst = 0.0;
  auto track = [&](double r) { worst = std::max(worst, std::abs(r)); };
  for (int a = 0; a < 3; ++a) {
    const AxisSample s0 = eval_poly(seg.coeffs_01[a], 0.0);
    const AxisSample s1m = eval_poly(seg.coeffs_01[a], T1);
    const AxisSample s1p = eval_poly(seg.coeffs_12[a], 0.0);
    const AxisSample s2 = eval_poly(seg.coeffs_12[a], T2);
    track(s0.p - seg.start.x[a]);
    track(s0.v - seg.start.v[a]);
    track(s0.a - seg.start.a[a]);
    track(s1m.p - seg.n1[a]);
    track(s1p.p - seg.n1[a]);
    track(s1m.v - seg.node_velocity[a]);
    track(s1p.v - seg.node_velocity[a]);
    track(s1m.a - s1p.a);
    track(s2.p - seg.n2[a]);
    track(s2.v);
    track(s2.a);
  }
  return worst;
}

}  // namespace amphi
