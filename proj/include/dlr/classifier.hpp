#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dlr {

// Closed-form ridge readout W = (X^T X + lambda I)^-1 X^T Y over one-hot
// device labels. The only trained component of the pipeline.
struct RidgeModel {
    Eigen::MatrixXd W;          // N x C
    double lambda = 0.0;
    std::vector<int> classes;   // device ids, column order of W
};

// Solves the normal equations via LDLT, never an explicit inverse. Throws on
// a singular system (lambda = 0 with rank-deficient states) and on labels
// outside `classes`.
RidgeModel ridge_train(const Eigen::MatrixXd& states, const std::vector<int>& labels,
                       double lambda, const std::vector<int>& classes);

// Scores = state^T W; returns (classes[argmax], scores) with first-index
// tie-break.
std::pair<int, std::vector<double>> ridge_predict(std::span<const double> state,
                                                  const RidgeModel& model);

// Shannon entropy of softmax(scores), in nats.
double entropy(std::span<const double> scores);

// Scale-aware default regularization: 1e-3 * trace(X^T X) / N.
double default_lambda(const Eigen::MatrixXd& states);

} // namespace dlr
