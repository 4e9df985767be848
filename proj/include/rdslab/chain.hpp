#pragma once

#include <Eigen/Dense>

#include "rdslab/errors.hpp"

namespace rdslab {

/// Markov chain over a small category space, with a value of the study
/// variable attached to every state.
struct CategoryChain {
  Eigen::MatrixXd transition;  // row-stochastic k x k
  Eigen::VectorXd y;           // per-state value of the study variable
  Eigen::VectorXd stationary;

  int states() const { return static_cast<int>(transition.rows()); }

  void validate(double tol = 1e-9) const {
    const int k = states();
    if (transition.cols() != k || y.size() != k || stationary.size() != k)
      throw data_error("CategoryChain: inconsistent dimensions");
    for (int i = 0; i < k; ++i) {
      if (std::abs(transition.row(i).sum() - 1.0) > tol)
        throw data_error("CategoryChain: row " + std::to_string(i) + " does not sum to 1");
      for (int j = 0; j < k; ++j)
        if (transition(i, j) < -tol) throw data_error("CategoryChain: negative entry");
    }
    if (std::abs(stationary.sum() - 1.0) > tol)
      throw data_error("CategoryChain: stationary does not sum to 1");
  }
};

}  // namespace rdslab
