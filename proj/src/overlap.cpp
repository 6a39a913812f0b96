#include "miro/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace miro {

namespace {

constexpr double kMinProbability = 1e-300;
constexpr double kMinComplement = 1e-16;

ConfigMask mask_of(const std::vector<int>& z_primary) {
    ConfigMask m = 0;
    for (std::size_t k = 0; k < z_primary.size(); ++k) {
        if (z_primary[k] != 0) m |= ConfigMask{1} << k;
    }
    return m;
}

void check_cell(int actor, int event, const TwoModeDataset& data) {
    if (actor < 0 || actor >= data.n() || event < 0 || event >= data.d()) {
        throw ConfigurationError("actor/event index out of range");
    }
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double linear_predictor(int cluster, int actor, int event, const ParameterState& params,
                        const TwoModeDataset& data) {
    check_cell(actor, event, data);
    if (cluster < 0 || cluster >= params.num_clusters()) throw ConfigurationError("cluster index out of range");
    double eta = params.mu(cluster);
    if (data.x.cols() > 0) eta += data.x.row(actor).dot(params.beta.row(cluster));
    if (data.w.cols() > 0) eta += data.w.row(event).dot(params.gamma.row(cluster));
    return eta;
}

Eigen::VectorXd cluster_predictors(int actor, int event, const ParameterState& params,
                                   const TwoModeDataset& data) {
    Eigen::VectorXd eta(params.num_clusters());
    for (int k = 0; k < params.num_clusters(); ++k) eta(k) = linear_predictor(k, actor, event, params, data);
    return eta;
}

double combine_predictors(const Eigen::VectorXd& eta, ConfigMask mask, OverlapKind kind) {
    if (mask == 0) throw ConfigurationError("the empty configuration has no parent predictors");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    int count = 0;
    for (int k = 0; k < eta.size(); ++k) {
        if (!((mask >> k) & 1u)) continue;
        lo = std::min(lo, eta(k));
        hi = std::max(hi, eta(k));
        sum += eta(k);
        ++count;
    }
    switch (kind) {
        case OverlapKind::minimum: return lo;
        case OverlapKind::maximum: return hi;
        case OverlapKind::mean: break;
    }
    return sum / count;
}

double overlap_predictor(const std::vector<int>& z_primary, int actor, int event,
                         const ParameterState& params, const TwoModeDataset& data, OverlapKind kind) {
    if (static_cast<int>(z_primary.size()) != params.num_clusters()) {
        throw ConfigurationError("primary allocation vector has wrong length");
    }
    return combine_predictors(cluster_predictors(actor, event, params, data), mask_of(z_primary), kind);
}

MeanOverlapCoefficients mean_overlap_coefficients(const std::vector<int>& z_primary,
                                                  const ParameterState& params) {
    if (static_cast<int>(z_primary.size()) != params.num_clusters()) {
        throw ConfigurationError("primary allocation vector has wrong length");
    }
    Eigen::VectorXd z(params.num_clusters());
    for (int k = 0; k < params.num_clusters(); ++k) z(k) = z_primary[static_cast<std::size_t>(k)] != 0 ? 1.0 : 0.0;
    const double norm = z.sum();
    if (norm == 0) throw ConfigurationError("the empty configuration has no parent coefficients");
    return {z.dot(params.mu) / norm, params.beta.transpose() * z / norm, params.gamma.transpose() * z / norm};
}

double empty_configuration_predictor(OverlapKind kind, const ParameterState& params, const TwoModeDataset& data,
                                     std::optional<OverlapKind> statistic) {
    if (data.n() == 0 || data.d() == 0) throw ValidationError("empty dataset");
    OverlapKind stat = OverlapKind::mean;
    if (statistic) {
        stat = *statistic;
    } else if (kind == OverlapKind::maximum) {
        stat = OverlapKind::minimum;
    } else if (kind == OverlapKind::minimum) {
        stat = OverlapKind::maximum;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (int k = 0; k < params.num_clusters(); ++k) {
        for (int i = 0; i < data.n(); ++i) {
            for (int j = 0; j < data.d(); ++j) {
                const double eta = linear_predictor(k, i, j, params, data);
                lo = std::min(lo, eta);
                hi = std::max(hi, eta);
                sum += eta;
            }
        }
    }
    switch (stat) {
        case OverlapKind::minimum: return lo;
        case OverlapKind::maximum: return hi;
        case OverlapKind::mean: break;
    }
    return sum / (static_cast<double>(params.num_clusters()) * data.n() * data.d());
}

double attendance_probability(HeirIndex h, int actor, int event, const ParameterState& params,
                              const TwoModeDataset& data, const ConfigurationLattice& lattice) {
    check_cell(actor, event, data);
    if (h < 0 || h >= lattice.num_configurations()) throw ConfigurationError("configuration index out of range");
    const ConfigMask mask = lattice.mask(h);
    if (mask == 0) return 0.0;
    return normal_cdf(combine_predictors(cluster_predictors(actor, event, params, data), mask, OverlapKind::mean));
}

Eigen::MatrixXd configuration_loglik(const ParameterState& params, const TwoModeDataset& data,
                                     const ConfigurationLattice& lattice) {
    const int n = data.n();
    const int d = data.d();
    const int k_star = lattice.num_configurations();
    const double neg_inf = -std::numeric_limits<double>::infinity();

    // Actor part mu_k + x_i beta_k and event part w_j gamma_k of every predictor.
    Eigen::MatrixXd actor_part = Eigen::MatrixXd::Zero(n, params.num_clusters());
    actor_part.rowwise() += params.mu.transpose();
    if (data.x.cols() > 0) actor_part += data.x * params.beta.transpose();
    Eigen::MatrixXd event_part = Eigen::MatrixXd::Zero(d, params.num_clusters());
    if (data.w.cols() > 0) event_part = data.w * params.gamma.transpose();

    Eigen::MatrixXd out = Eigen::MatrixXd::Constant(n, k_star, neg_inf);
    for (HeirIndex h = 0; h < k_star; ++h) {
        if (!lattice.allowed(h)) continue;
        if (lattice.mask(h) == 0) {
            for (int i = 0; i < n; ++i) {
                if (data.y.row(i).sum() == 0) out(i, h) = 0.0;
            }
            continue;
        }
        Eigen::VectorXd weights = Eigen::VectorXd::Zero(params.num_clusters());
        for (int k = 0; k < params.num_clusters(); ++k) weights(k) = lattice.contains(h, k) ? 1.0 : 0.0;
        weights /= weights.sum();
        const Eigen::VectorXd actor_eta = actor_part * weights;
        const Eigen::VectorXd event_eta = event_part * weights;
        for (int i = 0; i < n; ++i) {
            double total = 0.0;
            for (int j = 0; j < d; ++j) {
                const double eta = actor_eta(i) + event_eta(j);
                if (data.y(i, j) == 1) {
                    total += std::log(std::clamp(normal_cdf(eta), kMinProbability, 1.0 - kMinComplement));
                } else {
                    total += std::log(std::clamp(normal_cdf(-eta), kMinComplement, 1.0 - kMinProbability));
                }
            }
            out(i, h) = total;
        }
    }
    return out;
}

}  // namespace miro
