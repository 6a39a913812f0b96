#pragma once

#include <optional>

#include <Eigen/Dense>

#include "miro/model.hpp"

namespace miro {

enum class OverlapKind { minimum, mean, maximum };

// Standard normal CDF through erfc, accurate in both tails.
double normal_cdf(double x);

// eta_kij = mu_k + x_i . beta_k + w_j . gamma_k
double linear_predictor(int cluster, int actor, int event, const ParameterState& params,
                        const TwoModeDataset& data);

// Predictors of every cluster at one (actor, event) cell.
Eigen::VectorXd cluster_predictors(int actor, int event, const ParameterState& params,
                                   const TwoModeDataset& data);

// Combines the parent predictors of a non-empty configuration. Throws
// ConfigurationError for the all-zero configuration.
double overlap_predictor(const std::vector<int>& z_primary, int actor, int event,
                         const ParameterState& params, const TwoModeDataset& data, OverlapKind kind);

double combine_predictors(const Eigen::VectorXd& eta, ConfigMask mask, OverlapKind kind);

struct MeanOverlapCoefficients {
    double intercept;
    Eigen::VectorXd beta;
    Eigen::VectorXd gamma;
};

// Averaged coefficients of the parents; plugging them into the linear predictor
// reproduces the mean overlap function exactly.
MeanOverlapCoefficients mean_overlap_coefficients(const std::vector<int>& z_primary,
                                                  const ParameterState& params);

/// Data-driven predictor for the empty configuration: an overall statistic of
/// eta_kij over every cluster and every observed (x_i, w_j) pair.
///
/// By default the statistic is paired with the overlap kind as overall minimum
/// for the maximum overlap, overall average for the mean overlap and overall
/// maximum for the minimum overlap. `statistic` selects one explicitly.
double empty_configuration_predictor(OverlapKind kind, const ParameterState& params,
                                     const TwoModeDataset& data,
                                     std::optional<OverlapKind> statistic = std::nullopt);

// Probit attendance probability of configuration h under the mean overlap;
// exactly zero for the empty configuration.
double attendance_probability(HeirIndex h, int actor, int event, const ParameterState& params,
                              const TwoModeDataset& data, const ConfigurationLattice& lattice);

// n x K* matrix of log f(y_i | configuration h). Disallowed configurations, and
// the empty one for units with any attendance, hold -infinity. Probabilities of
// non-empty configurations are clamped to [1e-300, 1 - 1e-16].
Eigen::MatrixXd configuration_loglik(const ParameterState& params, const TwoModeDataset& data,
                                     const ConfigurationLattice& lattice);

}  // namespace miro
