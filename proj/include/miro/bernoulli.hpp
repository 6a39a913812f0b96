#pragma once

#include <vector>

#include <Eigen/Dense>

#include "miro/random.hpp"
#include "miro/sampler.hpp"

namespace miro {

// Non-overlapping mixture of independent Bernoullis: the "mixtbern" baseline.
struct BernoulliState {
    Eigen::VectorXd alpha;  // K
    Eigen::MatrixXd probs;  // K x d
    std::vector<int> z;     // cluster of each unit, 0-based
};

struct BernoulliTrace {
    std::vector<int> iterations;
    std::vector<BernoulliState> states;
    std::vector<double> loglik;

    std::size_t size() const { return states.size(); }
};

// n x K matrix of log f(y_i | cluster k).
Eigen::MatrixXd bernoulli_cluster_loglik(const BernoulliState& state, const Eigen::MatrixXi& y);
double bernoulli_observed_loglik(const BernoulliState& state, const Eigen::MatrixXi& y);
Eigen::MatrixXd bernoulli_membership_probabilities(const BernoulliState& state, const Eigen::MatrixXi& y);

// Gibbs sampler with Beta(1,1) priors on every success probability and a
// Dir(1,...,1) prior on the weights. Only burn_in/iterations/thin/seed of the
// config are used.
BernoulliTrace fit_bernoulli_mixture(const Eigen::MatrixXi& y, int num_clusters, const ChainConfig& config);

// Co-occurrence pivot plus best permutation of the success-probability matrix.
BernoulliTrace relabel_bernoulli_trace(const BernoulliTrace& trace, std::size_t pivot);
std::size_t select_bernoulli_pivot(const BernoulliTrace& trace);

// Argmax of iteration-averaged membership probabilities, ties to the lowest label.
std::vector<int> bernoulli_map_allocation(const BernoulliTrace& trace, const Eigen::MatrixXi& y);

}  // namespace miro
