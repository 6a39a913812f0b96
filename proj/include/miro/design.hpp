#pragma once

#include <vector>

#include <Eigen/Dense>

#include "miro/model.hpp"

namespace miro {

struct CellRef {
    int actor;
    int event;
    HeirIndex config;
};

struct StackedResponse {
    Eigen::VectorXd values;     // n*d entries, column-major over Y
    std::vector<CellRef> rows;  // config is left at 0
};

StackedResponse stack_response(const Eigen::MatrixXi& y);
Eigen::MatrixXi unstack_response(const StackedResponse& stacked, int n, int d);

enum class ColumnRole { intercept, actor, event };

/// Coefficient layout shared by the design matrix and the flattened parameters:
/// [mu_1, beta_1, ..., mu_K, beta_K, gamma_1, ..., gamma_K].
struct CoefficientLayout {
    int num_clusters;
    int num_actor_covariates;
    int num_event_covariates;

    int size() const { return num_clusters * (1 + num_actor_covariates + num_event_covariates); }
    int intercept_column(int k) const { return k * (1 + num_actor_covariates); }
    int actor_column(int k, int l) const { return intercept_column(k) + 1 + l; }
    int event_column(int k, int q) const {
        return num_clusters * (1 + num_actor_covariates) + k * num_event_covariates + q;
    }
    ColumnRole role(int column) const;
};

CoefficientLayout layout_for(const ParameterState& params);

Eigen::VectorXd flatten_parameters(const ParameterState& params);

// Writes a flattened vector back into mu, beta and gamma of `params`.
void unflatten_parameters(const Eigen::VectorXd& theta, ParameterState& params);

struct StackedDesign {
    Eigen::VectorXd y_tilde;
    Eigen::MatrixXd a;
    std::vector<CellRef> row_map;
    CoefficientLayout layout;
};

// Rows grouped by configuration, then unit, then event. Units in the empty
// configuration contribute no rows; throws DegenerateDesign if no rows remain.
StackedDesign build_design(const TwoModeDataset& data, const std::vector<HeirIndex>& z,
                           const ConfigurationLattice& lattice);

}  // namespace miro
