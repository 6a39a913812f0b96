#include "miro/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "miro/postprocess.hpp"

namespace miro {

namespace {

constexpr double kProbabilityFloor = 1e-300;

double sample_beta(double a, double b, Rng& rng) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
}

}  // namespace

Eigen::MatrixXd bernoulli_cluster_loglik(const BernoulliState& state, const Eigen::MatrixXi& y) {
    const Eigen::Index num_k = state.probs.rows();
    const Eigen::MatrixXd log_p = state.probs.array().max(kProbabilityFloor).log();
    const Eigen::MatrixXd log_q = (1.0 - state.probs.array()).max(kProbabilityFloor).log();
    const Eigen::MatrixXd yd = y.cast<double>();
    Eigen::MatrixXd out(y.rows(), num_k);
    // y log p + (1 - y) log q, summed over events
    out = yd * log_p.transpose() + (1.0 - yd.array()).matrix() * log_q.transpose();
    return out;
}

double bernoulli_observed_loglik(const BernoulliState& state, const Eigen::MatrixXi& y) {
    const Eigen::MatrixXd loglik = bernoulli_cluster_loglik(state, y);
    const Eigen::VectorXd log_alpha = state.alpha.array().log();
    double total = 0.0;
    for (Eigen::Index i = 0; i < loglik.rows(); ++i) total += log_sum_exp(log_alpha + loglik.row(i).transpose());
    return total;
}

Eigen::MatrixXd bernoulli_membership_probabilities(const BernoulliState& state, const Eigen::MatrixXi& y) {
    Eigen::MatrixXd logp = bernoulli_cluster_loglik(state, y);
    logp.rowwise() += state.alpha.array().log().matrix().transpose();
    for (Eigen::Index i = 0; i < logp.rows(); ++i) {
        const double norm = log_sum_exp(logp.row(i).transpose());
        logp.row(i) = (logp.row(i).array() - norm).exp();
    }
    return logp;
}

BernoulliTrace fit_bernoulli_mixture(const Eigen::MatrixXi& y, int num_clusters, const ChainConfig& config) {
    config.validate();
    if (num_clusters < 1) throw ConfigurationError("number of clusters must be positive");
    if ((y.array() != 0 && y.array() != 1).any()) throw ValidationError("responses must be binary");
    const int n = static_cast<int>(y.rows());
    const int d = static_cast<int>(y.cols());
    Rng rng(config.seed);

    BernoulliState state;
    state.alpha = Eigen::VectorXd::Constant(num_clusters, 1.0 / num_clusters);
    state.probs.resize(num_clusters, d);
    for (int k = 0; k < num_clusters; ++k) {
        for (int j = 0; j < d; ++j) state.probs(k, j) = sample_beta(1.0, 1.0, rng);
    }
    state.z.assign(static_cast<std::size_t>(n), 0);

    BernoulliTrace trace;
    for (int t = 1; t <= config.iterations; ++t) {
        const Eigen::MatrixXd loglik = bernoulli_cluster_loglik(state, y);
        const Eigen::VectorXd log_alpha = state.alpha.array().log();
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(num_clusters);
        Eigen::MatrixXd successes = Eigen::MatrixXd::Zero(num_clusters, d);
        for (int i = 0; i < n; ++i) {
            const int k = sample_log_categorical(log_alpha + loglik.row(i).transpose(), rng);
            if (k < 0) throw NumericError("Bernoulli mixture allocation failed");
            state.z[static_cast<std::size_t>(i)] = k;
            counts(k) += 1.0;
            successes.row(k) += y.row(i).cast<double>();
        }
        state.alpha = sample_dirichlet((counts.array() + 1.0).matrix(), rng);
        for (int k = 0; k < num_clusters; ++k) {
            for (int j = 0; j < d; ++j) {
                state.probs(k, j) = sample_beta(1.0 + successes(k, j), 1.0 + counts(k) - successes(k, j), rng);
            }
        }
        if (!config.retained(t)) continue;
        trace.iterations.push_back(t);
        trace.states.push_back(state);
        trace.loglik.push_back(bernoulli_observed_loglik(state, y));
    }
    return trace;
}

std::size_t select_bernoulli_pivot(const BernoulliTrace& trace) {
    std::vector<std::vector<int>> allocations;
    allocations.reserve(trace.size());
    for (const auto& s : trace.states) allocations.push_back(s.z);
    return select_pivot(allocations);
}

BernoulliTrace relabel_bernoulli_trace(const BernoulliTrace& trace, std::size_t pivot) {
    if (pivot >= trace.size()) throw ConfigurationError("pivot iteration out of range");
    const BernoulliState& reference = trace.states[pivot];
    const int num_k = static_cast<int>(reference.alpha.size());
    const auto perms = all_permutations(num_k);
    BernoulliTrace out = trace;
    for (auto& state : out.states) {
        const BernoulliState original = state;
        const std::vector<int>* best = nullptr;
        double best_distance = std::numeric_limits<double>::infinity();
        for (const auto& perm : perms) {
            double distance = 0.0;
            for (int k = 0; k < num_k; ++k) {
                distance += (original.probs.row(k) - reference.probs.row(perm[static_cast<std::size_t>(k)])).squaredNorm();
            }
            if (distance < best_distance) {
                best_distance = distance;
                best = &perm;
            }
        }
        for (int k = 0; k < num_k; ++k) {
            const int target = (*best)[static_cast<std::size_t>(k)];
            state.alpha(target) = original.alpha(k);
            state.probs.row(target) = original.probs.row(k);
        }
        for (auto& label : state.z) label = (*best)[static_cast<std::size_t>(label)];
    }
    return out;
}

std::vector<int> bernoulli_map_allocation(const BernoulliTrace& trace, const Eigen::MatrixXi& y) {
    if (trace.states.empty()) throw ConfigurationError("allocation needs a non-empty trace");
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(y.rows(), trace.states.front().alpha.size());
    for (const auto& state : trace.states) total += bernoulli_membership_probabilities(state, y);
    return argmax_rows(total / static_cast<double>(trace.size()));
}

}  // namespace miro
