// SPDX-License-Identifier: Apache-2.0
#include "zxprec/mvn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "zxprec/rng.hpp"

namespace zxprec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double phi_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// sqrt of the first twelve primes, fractional parts are the Kronecker lattice
// generators (Richtmyer rule).
constexpr double kPrimes[12] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

struct Transformed {
  // Cholesky factor after reordering, plus the shifted bounds.
  Eigen::MatrixXd chol;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

// Separation-of-variables preparation: pivot the variable with the smallest
// conditional probability mass to the front at each stage (the usual
// variance-reduction ordering), building the Cholesky factor on the fly.
// Expected values of the truncated inner variables stand in for the integrand
// arguments while ordering.
Transformed prepare(const MvnBox& box, const Eigen::VectorXd& mu,
                    const Eigen::MatrixXd& sigma) {
  const Eigen::Index m = mu.size();
  Transformed t;
  t.a = box.lower - mu;
  t.b = box.upper - mu;
  Eigen::MatrixXd cov = sigma;
  t.chol = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  for (Eigen::Index i = 0; i < m; ++i) {
    // pick the remaining variable with minimal stage probability
    Eigen::Index best = -1;
    double best_p = 2.0;
    double best_den = 0.0, best_lo = 0.0, best_hi = 0.0;
    for (Eigen::Index j = i; j < m; ++j) {
      double den2 = cov(j, j);
      for (Eigen::Index k = 0; k < i; ++k) den2 -= t.chol(j, k) * t.chol(j, k);
      if (den2 <= 1e-13 * std::abs(sigma(j, j)))
        throw std::invalid_argument("mvn_cdf: sigma is not positive definite");
      double den = std::sqrt(den2);
      double shift = 0.0;
      for (Eigen::Index k = 0; k < i; ++k) shift += t.chol(j, k) * y(k);
      double lo = (t.a(j) == -kInf) ? -kInf : (t.a(j) - shift) / den;
      double hi = (t.b(j) == kInf) ? kInf : (t.b(j) - shift) / den;
      double p = normal_cdf(hi) - normal_cdf(lo);
      if (p < best_p) {
        best_p = p;
        best = j;
        best_den = den;
        best_lo = lo;
        best_hi = hi;
      }
    }
    if (best != i) {
      std::swap(t.a(i), t.a(best));
      std::swap(t.b(i), t.b(best));
      cov.row(i).swap(cov.row(best));
      cov.col(i).swap(cov.col(best));
      t.chol.row(i).swap(t.chol.row(best));
    }
    t.chol(i, i) = best_den;
    for (Eigen::Index r = i + 1; r < m; ++r) {
      double v = cov(r, i);
      for (Eigen::Index k = 0; k < i; ++k) v -= t.chol(r, k) * t.chol(i, k);
      t.chol(r, i) = v / best_den;
    }
    // conditional expectation of the truncated stage variable
    if (best_p > 1e-300) {
      double num = 0.0;
      if (!std::isinf(best_lo)) num += phi_pdf(best_lo);
      if (!std::isinf(best_hi)) num -= phi_pdf(best_hi);
      y(i) = num / best_p;
    } else {
      double lo = std::isinf(best_lo) ? best_hi : best_lo;
      double hi = std::isinf(best_hi) ? best_lo : best_hi;
      y(i) = 0.5 * (lo + hi);
      if (std::isinf(y(i)) || std::isnan(y(i))) y(i) = 0.0;
    }
  }
  return t;
}

// One integrand evaluation at lattice point w (length m-1).
double sov_integrand(const Transformed& t, const double* w) {
  const Eigen::Index m = t.a.size();
  double d = (t.a(0) == -kInf) ? 0.0 : normal_cdf(t.a(0) / t.chol(0, 0));
  double e = (t.b(0) == kInf) ? 1.0 : normal_cdf(t.b(0) / t.chol(0, 0));
  double f = e - d;
  if (m == 1 || f <= 0.0) return std::max(f, 0.0);
  double y[16];
  for (Eigen::Index i = 1; i < m; ++i) {
    double z = d + w[i - 1] * (e - d);
    z = std::min(std::max(z, 1e-16), 1.0 - 1e-16);
    y[i - 1] = normal_quantile(z);
    double shift = 0.0;
    for (Eigen::Index k = 0; k < i; ++k) shift += t.chol(i, k) * y[k];
    double den = t.chol(i, i);
    d = (t.a(i) == -kInf) ? 0.0 : normal_cdf((t.a(i) - shift) / den);
    e = (t.b(i) == kInf) ? 1.0 : normal_cdf((t.b(i) - shift) / den);
    if (e <= d) return 0.0;
    f *= (e - d);
  }
  return f;
}

}  // namespace

double normal_cdf(double x) {
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_quantile(double p) {
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

MvnResult mvn_cdf(const MvnBox& box, const Eigen::VectorXd& mu,
                  const Eigen::MatrixXd& sigma, const MvnOptions& opts) {
  const Eigen::Index m = mu.size();
  if (box.lower.size() != m || box.upper.size() != m || sigma.rows() != m ||
      sigma.cols() != m)
    throw std::invalid_argument("mvn_cdf: dimension mismatch");
  if (m < 1 || m > 12) throw std::invalid_argument("mvn_cdf: dimension must be in 1..12");
  for (Eigen::Index i = 0; i < m; ++i)
    if (!(box.lower(i) < box.upper(i)))
      throw std::invalid_argument("mvn_cdf: need lower < upper in every coordinate");

  MvnResult res;

  // Coordinates spanning the whole line integrate out exactly; dropping them
  // shrinks the lattice dimension.
  {
    std::vector<Eigen::Index> keep;
    keep.reserve(m);
    for (Eigen::Index i = 0; i < m; ++i)
      if (!(box.lower(i) == -kInf && box.upper(i) == kInf)) keep.push_back(i);
    if (keep.empty()) {
      res.value = 1.0;
      res.error = 0.0;
      return res;
    }
    if (static_cast<Eigen::Index>(keep.size()) < m) {
      const Eigen::Index mm = static_cast<Eigen::Index>(keep.size());
      MvnBox rbox;
      rbox.lower.resize(mm);
      rbox.upper.resize(mm);
      Eigen::VectorXd rmu(mm);
      Eigen::MatrixXd rsig(mm, mm);
      for (Eigen::Index i = 0; i < mm; ++i) {
        rbox.lower(i) = box.lower(keep[i]);
        rbox.upper(i) = box.upper(keep[i]);
        rmu(i) = mu(keep[i]);
        for (Eigen::Index j = 0; j < mm; ++j) rsig(i, j) = sigma(keep[i], keep[j]);
      }
      return mvn_cdf(rbox, rmu, rsig, opts);
    }
  }

  // Exactly diagonal covariance: closed-form product of univariate masses.
  bool diagonal = true;
  for (Eigen::Index i = 0; i < m && diagonal; ++i)
    for (Eigen::Index j = 0; j < m && diagonal; ++j)
      if (i != j && sigma(i, j) != 0.0) diagonal = false;
  if (diagonal) {
    double p = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!(sigma(i, i) > 0.0))
        throw std::invalid_argument("mvn_cdf: sigma is not positive definite");
      double sd = std::sqrt(sigma(i, i));
      p *= normal_cdf((box.upper(i) - mu(i)) / sd) - normal_cdf((box.lower(i) - mu(i)) / sd);
    }
    res.value = std::max(p, 0.0);
    res.error = 1e-15 * m;
    res.points = 0;
    return res;
  }

  Transformed t = prepare(box, mu, sigma);

  if (m == 1) {
    res.value = std::max(
        0.0, normal_cdf(t.b(0) / t.chol(0, 0)) - normal_cdf(t.a(0) / t.chol(0, 0)));
    res.error = 1e-15;
    return res;
  }

  const int dim = static_cast<int>(m) - 1;
  double q[12];
  for (int j = 0; j < dim; ++j) {
    double s = std::sqrt(kPrimes[j]);
    q[j] = s - std::floor(s);
  }

  const int shifts = std::max(opts.n_shifts, 2);
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(shifts);
  std::vector<Eigen::VectorXd> delta(shifts);
  for (int r = 0; r < shifts; ++r) {
    CounterRng rng = CounterRng::stream(opts.seed, static_cast<std::uint64_t>(r), 0, 0xA0);
    delta[r] = Eigen::VectorXd(dim);
    for (int j = 0; j < dim; ++j) delta[r](j) = rng.uniform();
  }

  long n_done = 0;
  long n_target = std::max(opts.initial_points, 8);
  double w[12];
  for (;;) {
    for (int r = 0; r < shifts; ++r) {
      double acc = 0.0;
      for (long k = n_done + 1; k <= n_target; ++k) {
        for (int j = 0; j < dim; ++j) {
          double v = k * q[j] + delta[r](j);
          v -= std::floor(v);
          // tent (baker) transform periodizes the integrand for the lattice
          w[j] = std::abs(2.0 * v - 1.0);
        }
        acc += sov_integrand(t, w);
      }
      sums(r) += acc;
    }
    n_done = n_target;

    double mean = sums.sum() / (static_cast<double>(shifts) * n_done);
    double var = 0.0;
    for (int r = 0; r < shifts; ++r) {
      double vr = sums(r) / n_done - mean;
      var += vr * vr;
    }
    var /= shifts * (shifts - 1.0);
    double err = 3.0 * std::sqrt(var);
    res.value = std::min(std::max(mean, 0.0), 1.0);
    res.error = err;
    res.points = n_done;
    bool good = err <= opts.abs_tol || (opts.rel_tol > 0.0 && err <= opts.rel_tol * std::abs(mean));
    if (good || n_done >= opts.max_points) break;
    n_target = std::min<long>(2 * n_done, opts.max_points);
  }
  return res;
}

}  // namespace zxprec
