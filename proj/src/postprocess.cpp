#include "miro/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "miro/design.hpp"

namespace miro {

Eigen::MatrixXd cooccurrence(const std::vector<int>& labels) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            c(i, j) = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
        }
    }
    return c;
}

std::size_t select_pivot(const std::vector<std::vector<int>>& allocations) {
    if (allocations.empty()) throw ConfigurationError("pivot selection needs a non-empty trace");
    const auto n = static_cast<Eigen::Index>(allocations.front().size());
    Eigen::MatrixXd average = Eigen::MatrixXd::Zero(n, n);
    for (const auto& z : allocations) average += cooccurrence(z);
    average /= static_cast<double>(allocations.size());

    std::size_t best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < allocations.size(); ++t) {
        const double distance = (cooccurrence(allocations[t]) - average).squaredNorm();
        if (distance < best_distance) {
            best_distance = distance;
            best = t;
        }
    }
    return best;
}

std::size_t select_pivot(const McmcTrace& trace) {
    std::vector<std::vector<int>> allocations;
    allocations.reserve(trace.size());
    for (const auto& s : trace.states) allocations.push_back(s.z);
    return select_pivot(allocations);
}

std::vector<std::vector<int>> all_permutations(int k) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

namespace {

// Squared distance between the coefficients of `state` relabeled by `perm` and those of `pivot`.
double aligned_distance(const ParameterState& state, const ParameterState& pivot, const std::vector<int>& perm) {
    double total = 0.0;
    for (int k = 0; k < state.num_clusters(); ++k) {
        const int target = perm[static_cast<std::size_t>(k)];
        const double dmu = state.mu(k) - pivot.mu(target);
        total += dmu * dmu;
        total += (state.beta.row(k) - pivot.beta.row(target)).squaredNorm();
        total += (state.gamma.row(k) - pivot.gamma.row(target)).squaredNorm();
    }
    return total;
}

}  // namespace

std::vector<int> best_alignment(const ParameterState& state, const ParameterState& pivot) {
    std::vector<int> best;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const auto& perm : all_permutations(state.num_clusters())) {
        const double distance = aligned_distance(state, pivot, perm);
        if (distance < best_distance) {
            best_distance = distance;
            best = perm;
        }
    }
    return best;
}

RelabeledTrace relabel_trace(const McmcTrace& trace, std::size_t pivot, const ConfigurationLattice& lattice) {
    if (pivot >= trace.size()) throw ConfigurationError("pivot iteration out of range");
    RelabeledTrace out;
    out.trace.iterations = trace.iterations;
    out.trace.loglik = trace.loglik;
    out.trace.states.reserve(trace.size());
    out.permutations.reserve(trace.size());
    const ParameterState& reference = trace.states[pivot];
    for (const auto& state : trace.states) {
        auto perm = best_alignment(state, reference);
        out.trace.states.push_back(permute_clusters(state, perm, lattice));
        out.permutations.push_back(std::move(perm));
    }
    return out;
}

Eigen::MatrixXd average_membership(const McmcTrace& trace, const TwoModeDataset& data,
                                   const ConfigurationLattice& lattice) {
    if (trace.empty()) throw ConfigurationError("allocation needs a non-empty trace");
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(data.n(), lattice.num_configurations());
    for (const auto& state : trace.states) total += membership_probabilities(state, data, lattice);
    return total / static_cast<double>(trace.size());
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& probabilities) {
    std::vector<int> out(static_cast<std::size_t>(probabilities.rows()));
    for (Eigen::Index i = 0; i < probabilities.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index h = 1; h < probabilities.cols(); ++h) {
            if (probabilities(i, h) > probabilities(i, best)) best = h;
        }
        out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return out;
}

std::vector<HeirIndex> map_allocation(const McmcTrace& trace, const TwoModeDataset& data,
                                      const ConfigurationLattice& lattice) {
    return argmax_rows(average_membership(trace, data, lattice));
}

namespace {

template <typename Getter>
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> moments(const McmcTrace& trace, Getter get) {
    const Eigen::MatrixXd first = get(trace.states.front());
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(first.rows(), first.cols());
    for (const auto& s : trace.states) mean += get(s);
    mean /= static_cast<double>(trace.size());
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(first.rows(), first.cols());
    for (const auto& s : trace.states) sq += (get(s) - mean).array().square().matrix();
    Eigen::MatrixXd sd = Eigen::MatrixXd::Zero(first.rows(), first.cols());
    if (trace.size() > 1) sd = (sq / static_cast<double>(trace.size() - 1)).array().sqrt().matrix();
    return {mean, sd};
}

}  // namespace

PosteriorSummary posterior_summary(const McmcTrace& trace) {
    if (trace.empty()) throw ConfigurationError("posterior summary needs a non-empty trace");
    PosteriorSummary out;
    auto [mu_mean, mu_sd] = moments(trace, [](const ParameterState& s) { return Eigen::MatrixXd(s.mu); });
    out.mu_mean = mu_mean.col(0);
    out.mu_sd = mu_sd.col(0);
    std::tie(out.beta_mean, out.beta_sd) = moments(trace, [](const ParameterState& s) { return s.beta; });
    std::tie(out.gamma_mean, out.gamma_sd) = moments(trace, [](const ParameterState& s) { return s.gamma; });
    auto [alpha_mean, alpha_sd] = moments(trace, [](const ParameterState& s) { return Eigen::MatrixXd(s.alpha); });
    out.alpha_mean = alpha_mean.col(0);
    out.alpha_sd = alpha_sd.col(0);
    return out;
}

double effective_sample_size(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 4) return static_cast<double>(n);
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    auto autocovariance = [&](std::size_t lag) {
        double total = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) total += (series[t] - mean) * (series[t + lag] - mean);
        return total / static_cast<double>(n);
    };
    const double variance = autocovariance(0);
    if (variance <= 0) return static_cast<double>(n);
    // Geyer's initial positive sequence over pairs of autocorrelations.
    double sum = 0.0;
    for (std::size_t lag = 1; lag + 1 < n; lag += 2) {
        const double pair = (autocovariance(lag) + autocovariance(lag + 1)) / variance;
        if (pair <= 0) break;
        sum += pair;
    }
    const double tau = 1.0 + 2.0 * sum;
    return static_cast<double>(n) / std::max(tau, 1e-12);
}

double batch_means_standard_error(const std::vector<double>& series, int num_batches) {
    const std::size_t batch_size = series.size() / static_cast<std::size_t>(num_batches);
    if (batch_size < 1) throw ConfigurationError("series too short for batch means");
    std::vector<double> means;
    for (int b = 0; b < num_batches; ++b) {
        const auto first = series.begin() + static_cast<std::ptrdiff_t>(b * batch_size);
        means.push_back(std::accumulate(first, first + static_cast<std::ptrdiff_t>(batch_size), 0.0) /
                        static_cast<double>(batch_size));
    }
    const double grand = std::accumulate(means.begin(), means.end(), 0.0) / num_batches;
    double ss = 0.0;
    for (double m : means) ss += (m - grand) * (m - grand);
    return std::sqrt(ss / (num_batches - 1) / num_batches);
}

}  // namespace miro
