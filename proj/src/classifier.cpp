#include "dlr/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "dlr/error.hpp"

namespace dlr {

RidgeModel ridge_train(const Eigen::MatrixXd& states, const std::vector<int>& labels,
                       double lambda, const std::vector<int>& classes) {
    const Eigen::Index b = states.rows();
    const Eigen::Index n = states.cols();
    const auto c = static_cast<Eigen::Index>(classes.size());
    require(c >= 2, "invalid-config", "need at least 2 classes");
    require(b >= c, "invalid-config", "need at least as many rows as classes");
    require(labels.size() == static_cast<std::size_t>(b), "shape-error",
            "one label per state row required");
    require(lambda >= 0.0, "invalid-config", "lambda must be nonnegative");

    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(b, c);
    for (Eigen::Index row = 0; row < b; ++row) {
        const auto it = std::find(classes.begin(), classes.end(),
                                  labels[static_cast<std::size_t>(row)]);
        require(it != classes.end(), "label-error", "label outside the class set");
        y(row, static_cast<Eigen::Index>(it - classes.begin())) = 1.0;
    }

    Eigen::MatrixXd gram = states.transpose() * states;
    gram.diagonal().array() += lambda;
    const Eigen::MatrixXd rhs = states.transpose() * y;

    RidgeModel model;
    const auto ldlt = gram.ldlt();
    if (lambda == 0.0 && n > 0) {
        // With no regularization a rank-deficient gram may still be
        // consistent; reject it explicitly.
        const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
        require(d.minCoeff() > 1e-12 * d.maxCoeff(), "singularity",
                "states are rank deficient and lambda is zero");
    }
    model.W = ldlt.solve(rhs);
    model.lambda = lambda;
    model.classes = classes;

    // The normal-equations residual doubles as the singularity check: an
    // ill-posed lambda = 0 solve cannot satisfy it.
    const double rhs_norm = rhs.norm();
    const double residual = (gram * model.W - rhs).norm();
    if (rhs_norm > 0.0)
        require(residual <= 1e-8 * rhs_norm, "singularity",
                "normal equations unsolved (singular system?)");
    require(model.W.allFinite(), "singularity", "non-finite weights");
    return model;
}

std::pair<int, std::vector<double>> ridge_predict(std::span<const double> state,
                                                  const RidgeModel& model) {
    require(static_cast<Eigen::Index>(state.size()) == model.W.rows(), "shape-error",
            "state dimension does not match the model");
    const Eigen::Map<const Eigen::VectorXd> x(state.data(),
                                              static_cast<Eigen::Index>(state.size()));
    const Eigen::VectorXd scores = model.W.transpose() * x;

    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i)
        if (scores(i) > scores(best)) best = i;

    return {model.classes[static_cast<std::size_t>(best)],
            std::vector<double>(scores.data(), scores.data() + scores.size())};
}

double entropy(std::span<const double> scores) {
    require(!scores.empty(), "invalid-input", "empty score vector");
    double max = scores[0];
    for (double s : scores) {
        require(std::isfinite(s), "numeric-error", "non-finite score");
        max = std::max(max, s);
    }
    double z = 0.0;
    for (double s : scores) z += std::exp(s - max);
    double h = 0.0;
    for (double s : scores) {
        const double p = std::exp(s - max) / z;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

double default_lambda(const Eigen::MatrixXd& states) {
    if (states.cols() == 0) return 0.0;
    return 1e-3 * states.squaredNorm() / static_cast<double>(states.cols());
}

} // namespace dlr
