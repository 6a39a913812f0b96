#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "miro/model.hpp"

// Hand-rolled generators for the property tests.
namespace miro::testing {

using Gen = std::mt19937_64;

inline int uniform_int(Gen& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline double uniform(Gen& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

inline double gaussian(Gen& g) { return std::normal_distribution<double>(0.0, 1.0)(g); }

inline Eigen::MatrixXd gaussian_matrix(Gen& g, int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = gaussian(g);
    return m;
}

inline TwoModeDataset random_dataset(Gen& g, int n, int d, int num_actor, int num_event, double p = 0.5) {
    TwoModeDataset data;
    data.y.resize(n, d);
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) data.y(i, j) = coin(g) ? 1 : 0;
    data.x = gaussian_matrix(g, n, num_actor);
    data.w = gaussian_matrix(g, d, num_event);
    return data;
}

inline Eigen::VectorXd random_simplex(Gen& g, const ConfigurationLattice& lattice) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(lattice.num_configurations());
    for (HeirIndex h : lattice.allowed_indices()) a(h) = std::exponential_distribution<double>(1.0)(g) + 1e-3;
    return a / a.sum();
}

inline ParameterState random_state(Gen& g, const TwoModeDataset& data, const ConfigurationLattice& lattice) {
    const int k = lattice.num_clusters();
    ParameterState s = zero_state(k, data.num_actor_covariates(), data.num_event_covariates(), data.n(),
                                  lattice.num_configurations());
    s.mu = gaussian_matrix(g, k, 1).col(0);
    s.beta = gaussian_matrix(g, k, data.num_actor_covariates());
    s.gamma = gaussian_matrix(g, k, data.num_event_covariates());
    s.alpha = random_simplex(g, lattice);
    const auto& allowed = lattice.allowed_indices();
    for (auto& z : s.z) z = allowed[static_cast<std::size_t>(uniform_int(g, 0, static_cast<int>(allowed.size()) - 1))];
    return s;
}

inline std::vector<int> random_permutation(Gen& g, int k) {
    std::vector<int> p(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = i;
    std::shuffle(p.begin(), p.end(), g);
    return p;
}

}  // namespace miro::testing
