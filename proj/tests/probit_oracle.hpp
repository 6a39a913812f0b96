#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "miro/overlap.hpp"

namespace miro::testing {

struct GridPosterior {
    double mean_mu;
    double mean_beta;
};

// Posterior means of (mu, beta) for y_i ~ Bernoulli(Phi(mu + beta x_i)) under
// independent N(0, sigma2) priors, by midpoint quadrature on a square grid.
inline GridPosterior probit_grid_posterior(const Eigen::VectorXi& y, const Eigen::VectorXd& x, double sigma2,
                                           double lo, double hi, int points) {
    const double step = (hi - lo) / points;
    std::vector<double> log_post(static_cast<std::size_t>(points) * points);
    double best = -INFINITY;
    for (int a = 0; a < points; ++a) {
        const double mu = lo + (a + 0.5) * step;
        for (int b = 0; b < points; ++b) {
            const double beta = lo + (b + 0.5) * step;
            double lp = -0.5 * (mu * mu + beta * beta) / sigma2;
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double eta = mu + beta * x(i);
                // log Phi(t) through erfc keeps precision in the lower tail
                lp += std::log(0.5 * std::erfc(-(y(i) ? eta : -eta) / std::sqrt(2.0)));
            }
            log_post[static_cast<std::size_t>(a) * points + b] = lp;
            best = std::max(best, lp);
        }
    }
    double z = 0.0, m_mu = 0.0, m_beta = 0.0;
    for (int a = 0; a < points; ++a) {
        const double mu = lo + (a + 0.5) * step;
        for (int b = 0; b < points; ++b) {
            const double beta = lo + (b + 0.5) * step;
            const double w = std::exp(log_post[static_cast<std::size_t>(a) * points + b] - best);
            z += w;
            m_mu += w * mu;
            m_beta += w * beta;
        }
    }
    return {m_mu / z, m_beta / z};
}

}  // namespace miro::testing
