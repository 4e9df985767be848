#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rdslab/chain.hpp"
#include "rdslab/errors.hpp"
#include "rdslab/graph.hpp"

namespace rdslab {

/// Eigensystem of the degree-symmetrized walk operator. eigenvalues[0] is the
/// unit eigenvalue; the rest are ordered by magnitude, largest first.
/// Eigenvector columns are orthonormal; column 0 equals sqrt(stationary).
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd stationary;

  int states() const { return static_cast<int>(eigenvalues.size()); }
};

/// Projections of the centered, stationarity-weighted study variable onto the
/// eigenbasis. gamma0 (= sum of squared projections off the top eigenvector)
/// is the stationary-weighted population variance of the variable.
struct ProjectionCoefficients {
  Eigen::VectorXd alpha;  // aligned with SpectralDecomposition order; alpha[0] ~ 0
  double gamma0 = 0.0;
  double stationary_mean = 0.0;
};

/// Decompose a reversible row-stochastic chain. The symmetrized operator
/// diag(sqrt(pi)) * M * diag(1/sqrt(pi)) shares M's eigenvalues and has an
/// orthonormal eigenbasis; reversibility (detailed balance within `tol`) is a
/// hard precondition because it is what makes that operator symmetric.
inline SpectralDecomposition decompose(const Eigen::MatrixXd& transition,
                                       const Eigen::VectorXd& stationary, double tol = 1e-8) {
  const int n = static_cast<int>(transition.rows());
  if (transition.cols() != n || stationary.size() != n)
    throw data_error("decompose: dimension mismatch");
  for (int i = 0; i < n; ++i) {
    if (std::abs(transition.row(i).sum() - 1.0) > tol)
      throw data_error("decompose: transition row " + std::to_string(i) + " does not sum to 1");
    if (!(stationary[i] > 0.0))
      throw data_error("decompose: stationary mass must be positive everywhere");
  }
  if (std::abs(stationary.sum() - 1.0) > tol)
    throw data_error("decompose: stationary distribution does not sum to 1");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(stationary[i] * transition(i, j) - stationary[j] * transition(j, i)) > tol)
        throw numeric_error(
            "decompose: chain is not reversible (detailed balance violated); exact spectral "
            "variance is undefined for this chain");

  const Eigen::VectorXd sqrt_pi = stationary.array().sqrt();
  Eigen::MatrixXd sym(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym(i, j) = sqrt_pi[i] * transition(i, j) / sqrt_pi[j];
  sym = 0.5 * (sym + sym.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw numeric_error("decompose: eigensolver failed");

  // Order: unit eigenvalue first, then by |lambda| descending.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  int top = 0;
  for (int i = 1; i < n; ++i)
    if (solver.eigenvalues()[i] > solver.eigenvalues()[top]) top = i;
  std::swap(order[0], order[top]);
  std::sort(order.begin() + 1, order.end(), [&](int a, int b) {
    const double ma = std::abs(solver.eigenvalues()[a]);
    const double mb = std::abs(solver.eigenvalues()[b]);
    if (ma != mb) return ma > mb;
    if (solver.eigenvalues()[a] != solver.eigenvalues()[b])
      return solver.eigenvalues()[a] > solver.eigenvalues()[b];
    return a < b;
  });

  SpectralDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors.resize(n, n);
  dec.stationary = stationary;
  for (int k = 0; k < n; ++k) {
    dec.eigenvalues[k] = solver.eigenvalues()[order[k]];
    Eigen::VectorXd v = solver.eigenvectors().col(order[k]);
    // deterministic sign: largest-magnitude entry positive
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0) v = -v;
    dec.eigenvectors.col(k) = v;
  }
  // align the top eigenvector with sqrt(pi)
  if (dec.eigenvectors.col(0).dot(sqrt_pi) < 0) dec.eigenvectors.col(0) *= -1.0;
  return dec;
}

inline SpectralDecomposition decompose(const CategoryChain& chain, double tol = 1e-8) {
  chain.validate(tol);
  return decompose(chain.transition, chain.stationary, tol);
}

inline SpectralDecomposition decompose(const Graph& g, double tol = 1e-8) {
  return decompose(transition_matrix(g), stationary_distribution(g), tol);
}

/// Project a per-state variable into the eigenbasis.
inline ProjectionCoefficients project(const SpectralDecomposition& dec, const Eigen::VectorXd& y) {
  if (y.size() != dec.states()) throw data_error("project: variable length mismatch");
  ProjectionCoefficients proj;
  proj.stationary_mean = dec.stationary.dot(y);
  const Eigen::VectorXd w =
      dec.stationary.array().sqrt() * (y.array() - proj.stationary_mean);
  proj.alpha = dec.eigenvectors.transpose() * w;
  proj.gamma0 = proj.alpha.tail(proj.alpha.size() - 1).squaredNorm();
  return proj;
}

/// Distribution after `steps` walk steps from p0, via the eigen-expansion of
/// the transition operator.
inline Eigen::VectorXd step_distribution(const SpectralDecomposition& dec,
                                         const Eigen::VectorXd& p0, long steps) {
  if (p0.size() != dec.states()) throw data_error("step_distribution: p0 length mismatch");
  if (steps < 0) throw data_error("step_distribution: negative step count");
  const Eigen::ArrayXd sqrt_pi = dec.stationary.array().sqrt();
  // p_s = diag(sqrt_pi) V L^s V' diag(1/sqrt_pi) p0
  Eigen::VectorXd u = (p0.array() / sqrt_pi).matrix();
  Eigen::VectorXd coeff = dec.eigenvectors.transpose() * u;
  for (int k = 0; k < dec.states(); ++k) coeff[k] *= std::pow(dec.eigenvalues[k], steps);
  Eigen::VectorXd out = dec.eigenvectors * coeff;
  return (out.array() * sqrt_pi).matrix();
}

/// Covariance between two stationary walk positions `lag` steps apart:
/// gamma_t = sum_{k>=2} alpha_k^2 lambda_k^t.
inline double lag_covariance(const ProjectionCoefficients& proj, const SpectralDecomposition& dec,
                             long lag) {
  if (lag < 0) throw data_error("lag_covariance: negative lag");
  double g = 0.0;
  for (int k = 1; k < dec.states(); ++k)
    g += proj.alpha[k] * proj.alpha[k] * std::pow(dec.eigenvalues[k], lag);
  return g;
}

struct RwsVariance {
  double variance = 0.0;
  double sd = 0.0;
  double design_effect = 0.0;  // variance * S / gamma0 (= p(1-p) for binary Y)
};

namespace detail {

// sum_{t=1}^{S-1} (S - t) lambda^t, closed form with a direct-sum fallback
// near lambda = 1.
inline double weighted_geometric_sum(double lambda, long s) {
  if (s < 2) return 0.0;
  if (std::abs(1.0 - lambda) < 1e-8) {
    double acc = 0.0;
    double pow_l = 1.0;
    for (long t = 1; t < s; ++t) {
      pow_l *= lambda;
      acc += static_cast<double>(s - t) * pow_l;
    }
    return acc;
  }
  const double sd = static_cast<double>(s);
  const double one_minus = 1.0 - lambda;
  const double pow_s1 = std::pow(lambda, static_cast<double>(s - 1));
  const double a = lambda * (1.0 - pow_s1) / one_minus;                       // sum lambda^t
  const double b = lambda * (1.0 - sd * pow_s1 + (sd - 1.0) * pow_s1 * lambda)  // sum t lambda^t
                   / (one_minus * one_minus);
  return sd * a - b;
}

}  // namespace detail

/// Exact sampling variance of the mean of an S-step stationary walk:
/// Var = (1/S^2) sum_{i,j} gamma_{|i-j|} = (1/S)[gamma_0 + 2 sum_{t<S} (1 - t/S) gamma_t],
/// evaluated by per-eigenvalue geometric sums.
inline RwsVariance exact_rws_variance(const ProjectionCoefficients& proj,
                                      const SpectralDecomposition& dec, long sample_size) {
  if (sample_size < 2) throw data_error("exact_rws_variance: sample size must be >= 2");
  const double s = static_cast<double>(sample_size);
  double var = proj.gamma0 * s;  // diagonal terms: S * gamma0
  for (int k = 1; k < dec.states(); ++k)
    var += 2.0 * proj.alpha[k] * proj.alpha[k] *
           detail::weighted_geometric_sum(dec.eigenvalues[k], sample_size);
  var /= s * s;
  RwsVariance out;
  out.variance = var;
  out.sd = std::sqrt(std::max(var, 0.0));
  out.design_effect = proj.gamma0 > 0.0 ? var * s / proj.gamma0 : 0.0;
  return out;
}

/// Same quantity by direct summation over lags; kept as the slow cross-check
/// path for the closed form above.
inline RwsVariance exact_rws_variance_direct(const ProjectionCoefficients& proj,
                                             const SpectralDecomposition& dec, long sample_size) {
  if (sample_size < 2) throw data_error("exact_rws_variance: sample size must be >= 2");
  const double s = static_cast<double>(sample_size);
  double var = proj.gamma0;
  for (long t = 1; t < sample_size; ++t)
    var += 2.0 * (1.0 - static_cast<double>(t) / s) * lag_covariance(proj, dec, t);
  var /= s;
  RwsVariance out;
  out.variance = var;
  out.sd = std::sqrt(std::max(var, 0.0));
  out.design_effect = proj.gamma0 > 0.0 ? var * s / proj.gamma0 : 0.0;
  return out;
}

}  // namespace rdslab
