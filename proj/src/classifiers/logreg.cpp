// Ridge-penalized logistic regression fitted by damped Newton iterations
// (IRLS) on the mean log-loss, so duplicating every row leaves the optimum
// unchanged.

#include <Eigen/Dense>

#include <cmath>

#include "internal.hpp"

namespace armauth::detail {
namespace {

// Mean negative log-likelihood plus ridge * |w|^2 (intercept unpenalized).
double objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta, double ridge) {
    const Eigen::VectorXd z = x * beta;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        // log(1 + exp(z)) - y z, computed stably.
        const double zi = z[i];
        const double softplus = zi > 0.0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi));
        loss += softplus - y[i] * zi;
    }
    loss /= static_cast<double>(z.size());
    return loss + ridge * beta.head(beta.size() - 1).squaredNorm();
}

}  // namespace

model::LogisticRegression train_logreg(const LogRegConfig& cfg, const TrainingSet& ts) {
    const auto n = static_cast<Eigen::Index>(ts.size());
    const auto d = static_cast<Eigen::Index>(ts.dims());
    Eigen::MatrixXd x(n, d + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = ts.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        x(i, d) = 1.0;
        y[i] = ts.labels[static_cast<std::size_t>(i)] == kGenuine ? 1.0 : 0.0;
    }

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d + 1);
    Eigen::VectorXd penalty = Eigen::VectorXd::Constant(d + 1, 2.0 * cfg.ridge);
    penalty[d] = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);

    model::LogisticRegression out;
    double current = objective(x, y, beta, cfg.ridge);
    std::size_t iter = 0;
    double grad_norm = 0.0;
    for (; iter < cfg.max_iters; ++iter) {
        const Eigen::VectorXd z = x * beta;
        Eigen::VectorXd p(n), w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            p[i] = logistic(z[i]);
            w[i] = p[i] * (1.0 - p[i]);
        }
        const Eigen::VectorXd grad = inv_n * (x.transpose() * (p - y)) + penalty.cwiseProduct(beta);
        grad_norm = grad.norm();
        if (grad_norm <= cfg.tolerance) break;

        Eigen::MatrixXd hess = inv_n * (x.transpose() * w.asDiagonal() * x);
        hess.diagonal() += penalty;
        // The intercept direction can be flat once the data is separated.
        hess.diagonal().array() += 1e-12;
        const Eigen::VectorXd step = hess.ldlt().solve(grad);

        double t = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
            const Eigen::VectorXd candidate = beta - t * step;
            const double value = objective(x, y, candidate, cfg.ridge);
            if (std::isfinite(value) && value <= current) {
                beta = candidate;
                current = value;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }

    out.weights.assign(beta.data(), beta.data() + d);
    out.intercept = beta[d];
    out.iterations = iter;
    out.gradient_norm = grad_norm;
    return out;
}

double score_logreg(const model::LogisticRegression& m, std::span<const double> row) {
    double z = m.intercept;
    for (std::size_t j = 0; j < row.size(); ++j) z += m.weights[j] * row[j];
    return logistic(z);
}

}  // namespace armauth::detail
