#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "miro/model.hpp"
#include "miro/sampler.hpp"

namespace miro {

enum class ModelFamily { miro, mixtprobit, mixtbern };

std::string to_string(ModelFamily family);
ModelFamily parse_model_family(const std::string& name);

struct ModelSpec {
    ModelFamily family = ModelFamily::miro;
    int num_clusters = 1;
    int num_actor_covariates = 0;
    int num_event_covariates = 0;
    int num_events = 0;
};

ModelSpec model_spec_for(ModelFamily family, int num_clusters, const TwoModeDataset& data);

// sum_i log sum_{h allowed} alpha_h f(y_i | h), evaluated in log space.
double observed_loglik(const ParameterState& params, const TwoModeDataset& data,
                       const ConfigurationLattice& lattice);

/// Free parameters counted by BIC-MCMC:
///   miro        K(1+L+Q) + 2^K
///   mixtprobit  K(1+L+Q) + K
///   mixtbern    K*d + K
long count_parameters(const ModelSpec& spec);

// -2 l_max + log(n d) p
double bic_mcmc_value(double max_loglik, int n, int d, long num_parameters);

// l_max taken over the retained log-likelihoods; throws on an empty series.
double bic_mcmc(const std::vector<double>& loglik, const TwoModeDataset& data, const ModelSpec& spec);
double bic_mcmc(const McmcTrace& trace, const TwoModeDataset& data, const ModelSpec& spec);

struct SweepRow {
    int num_clusters = 0;
    long num_parameters = 0;
    double max_loglik = 0;
    double bic = 0;
    std::uint64_t seed = 0;
    std::optional<std::string> error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<int> selected;  // smallest BIC, ties toward smaller K
};

// Chain for K uses derive_seed(config.seed, K). Chains run concurrently on up to
// `threads` workers; rows are reported in the order of `cluster_counts`.
SweepResult sweep_k(const TwoModeDataset& data, ModelFamily family, const std::vector<int>& cluster_counts,
                    const ChainConfig& config, int threads = 1);

}  // namespace miro
