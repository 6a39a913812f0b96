#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "miro/design.hpp"
#include "miro/model.hpp"
#include "miro/random.hpp"

namespace miro {

struct ChainConfig {
    int iterations = 10000;
    int burn_in = 5000;
    int thin = 1;
    std::uint64_t seed = 1;
    OverlapMode overlap_mode = OverlapMode::full;
    // Defaults to default_prior(lattice) when empty.
    std::optional<PriorSpec> prior;

    void validate() const;
    // 1-based iteration numbers that are kept: after burn-in, counted back from
    // the last iteration in steps of `thin`.
    bool retained(int iteration) const;
    int num_retained() const;
};

struct McmcTrace {
    std::vector<int> iterations;
    std::vector<ParameterState> states;
    std::vector<double> loglik;  // observed-data log-likelihood of each state

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }
};

struct AllocationDraw {
    std::vector<HeirIndex> z;
    Eigen::VectorXi counts;  // units per configuration
};

// Draws every unit's configuration from its full conditional
// P(z_i = h) ∝ alpha_h f(y_i | h).
AllocationDraw sample_allocations(const ParameterState& params, const TwoModeDataset& data,
                                  const ConfigurationLattice& lattice, Rng& rng);

// Membership probabilities P(z_i = h | params, y_i): n x K*.
Eigen::MatrixXd membership_probabilities(const ParameterState& params, const TwoModeDataset& data,
                                         const ConfigurationLattice& lattice);

// Dir(a + counts) restricted to the allowed configurations.
Eigen::VectorXd sample_weights(const Eigen::VectorXi& counts, const Eigen::VectorXd& prior_concentration,
                               const ConfigurationLattice& lattice, Rng& rng);

// Diagonal of the prior precision matrix in the coefficient layout.
Eigen::VectorXd prior_precision(const CoefficientLayout& layout, const PriorSpec& prior);

/// Gaussian full conditional of the stacked coefficients given latent utilities:
/// covariance V = (A'A + P0)^-1 and mean V A' r.
class CoefficientConditional {
public:
    CoefficientConditional(const Eigen::MatrixXd& a, const Eigen::VectorXd& utilities,
                           const Eigen::VectorXd& prior_precision);

    const Eigen::VectorXd& mean() const { return mean_; }
    Eigen::MatrixXd covariance() const;
    Eigen::VectorXd sample(Rng& rng) const;

private:
    Eigen::LLT<Eigen::MatrixXd> precision_factor_;
    Eigen::VectorXd mean_;
};

Eigen::VectorXd refresh_utilities(const StackedDesign& design, const Eigen::VectorXd& theta, Rng& rng);

Eigen::VectorXd sample_coefficients(const StackedDesign& design, const Eigen::VectorXd& utilities,
                                    const PriorSpec& prior, Rng& rng);

/// One Gibbs chain for the overlapping probit mixture under the mean overlap.
///
/// A sweep draws the allocations, then the weights, then rebuilds the design
/// from the new allocations, refreshes the latent utilities around the previous
/// coefficients and draws all coefficients jointly. Units in the empty
/// configuration never enter the regression; if every unit is empty the
/// coefficients are drawn from their prior.
class MiroSampler {
public:
    MiroSampler(const TwoModeDataset& data, const ConfigurationLattice& lattice, PriorSpec prior);

    // Prior-mean weights, allocations drawn from them, zero coefficients.
    void initialize(Rng& rng);
    void sweep(Rng& rng);

    const ParameterState& state() const { return state_; }
    void set_state(ParameterState state) { state_ = std::move(state); }
    // Replaces the responses; used by joint-distribution tests.
    void set_responses(const Eigen::MatrixXi& y) { data_.y = y; }
    const TwoModeDataset& data() const { return data_; }

private:
    TwoModeDataset data_;
    const ConfigurationLattice& lattice_;
    PriorSpec prior_;
    ParameterState state_;
};

// Fails with ConfigurationError when there are neither actor nor event covariates.
void require_predictors(const TwoModeDataset& data);

McmcTrace run_chain(const TwoModeDataset& data, const ChainConfig& config, const ConfigurationLattice& lattice);

}  // namespace miro
