#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "miro/model.hpp"

namespace miro {

enum class DataGeneratingProcess { miro_probit, mixture_logit };

struct TrueCoefficients {
    Eigen::VectorXd mu;     // K
    Eigen::MatrixXd beta;   // K x L
    Eigen::MatrixXd gamma;  // K x Q
};

struct SimulationConfig {
    int n = 150;
    int d = 15;
    int num_clusters = 2;
    int num_actor_covariates = 0;  // standard-normal actor covariates
    int event_levels = 0;          // levels of one categorical event covariate; 0 = none
    DataGeneratingProcess dgp = DataGeneratingProcess::miro_probit;
    // Explicit coefficients; otherwise drawn from the separation pattern.
    std::optional<TrueCoefficients> coefficients;
    double intercept_separation = 1.5;
    double slope_separation = 1.0;
    // K* configuration weights for miro_probit, K component weights for mixture_logit.
    Eigen::VectorXd weights;
    std::uint64_t seed = 1;

    int num_event_covariates() const { return event_levels > 1 ? event_levels - 1 : 0; }
    void validate() const;
};

// Weights (0.10, 0.45, 0.25, 0.20); random-allocation MER 0.685.
Eigen::VectorXd benchmark_weights();

// Named scenarios: actor-only-n50-d5, actor-only-n50-d15, event-only-n50,
// event-only-n150, actor-event-n250, misspec-logit.
SimulationConfig simulation_preset(const std::string& name);
std::vector<std::string> simulation_preset_names();

/// Coefficients from the separation pattern: cluster k gets intercept
/// (-1)^k * intercept_separation and every slope (-1)^(k + floor(k/2)) * slope_separation.
TrueCoefficients separated_coefficients(int num_clusters, int num_actor_covariates, int num_event_covariates,
                                        double intercept_separation, double slope_separation);

struct SimulatedData {
    TwoModeDataset data;                   // W already reference-coded
    std::vector<std::string> event_levels;  // raw categorical level of each event (empty if none)
    std::vector<int> labels;                // heir index (miro) or component (logit) per unit
    TrueCoefficients coefficients;
    Eigen::VectorXd weights;
};

SimulatedData generate_miro(const SimulationConfig& config);
SimulatedData generate_logit_mixture(const SimulationConfig& config);
SimulatedData simulate(const SimulationConfig& config);

// Misallocation fraction after the best relabeling of primary clusters, acting on
// heir configurations.
double mer(const std::vector<HeirIndex>& truth, const std::vector<HeirIndex>& estimate,
           const ConfigurationLattice& lattice);

// Misallocation fraction after the best one-to-one matching of estimated labels to
// true labels; label sets may differ in size. Used when the fitted and generating
// label spaces differ.
double mer_matched(const std::vector<int>& truth, const std::vector<int>& estimate);

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

// sum_k alpha_k (1 - alpha_k)
double random_benchmark_mer(const Eigen::VectorXd& weights);

}  // namespace miro
