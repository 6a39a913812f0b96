#include "miro/selection.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "miro/bernoulli.hpp"
#include "miro/overlap.hpp"
#include "miro/random.hpp"

namespace miro {

std::string to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::miro: return "miro";
        case ModelFamily::mixtprobit: return "mixtprobit";
        case ModelFamily::mixtbern: return "mixtbern";
    }
    return "unknown";
}

ModelFamily parse_model_family(const std::string& name) {
    if (name == "miro") return ModelFamily::miro;
    if (name == "mixtprobit") return ModelFamily::mixtprobit;
    if (name == "mixtbern") return ModelFamily::mixtbern;
    throw ConfigurationError("unknown model family '" + name + "' (expected miro, mixtprobit or mixtbern)");
}

ModelSpec model_spec_for(ModelFamily family, int num_clusters, const TwoModeDataset& data) {
    return {family, num_clusters, data.num_actor_covariates(), data.num_event_covariates(), data.d()};
}

double observed_loglik(const ParameterState& params, const TwoModeDataset& data,
                       const ConfigurationLattice& lattice) {
    const Eigen::MatrixXd loglik = configuration_loglik(params, data, lattice);
    const Eigen::VectorXd log_alpha = params.alpha.array().log();
    double total = 0.0;
    for (Eigen::Index i = 0; i < loglik.rows(); ++i) {
        total += log_sum_exp(log_alpha + loglik.row(i).transpose());
    }
    return total;
}

long count_parameters(const ModelSpec& spec) {
    if (spec.num_clusters < 1) throw ConfigurationError("model needs at least one cluster");
    const long k = spec.num_clusters;
    const long per_cluster = 1L + spec.num_actor_covariates + spec.num_event_covariates;
    switch (spec.family) {
        case ModelFamily::miro: return k * per_cluster + (1L << k);
        case ModelFamily::mixtprobit: return k * per_cluster + k;
        case ModelFamily::mixtbern: return k * spec.num_events + k;
    }
    throw ConfigurationError("unknown model family");
}

double bic_mcmc_value(double max_loglik, int n, int d, long num_parameters) {
    return -2.0 * max_loglik + std::log(static_cast<double>(n) * d) * static_cast<double>(num_parameters);
}

double bic_mcmc(const std::vector<double>& loglik, const TwoModeDataset& data, const ModelSpec& spec) {
    if (loglik.empty()) throw ConfigurationError("BIC-MCMC needs a non-empty trace");
    const double l_max = *std::max_element(loglik.begin(), loglik.end());
    return bic_mcmc_value(l_max, data.n(), data.d(), count_parameters(spec));
}

double bic_mcmc(const McmcTrace& trace, const TwoModeDataset& data, const ModelSpec& spec) {
    return bic_mcmc(trace.loglik, data, spec);
}

namespace {

SweepRow fit_one(const TwoModeDataset& data, ModelFamily family, int num_clusters, ChainConfig config) {
    SweepRow row;
    row.num_clusters = num_clusters;
    row.seed = derive_seed(config.seed, static_cast<std::uint64_t>(num_clusters));
    config.seed = row.seed;
    try {
        const ModelSpec spec = model_spec_for(family, num_clusters, data);
        row.num_parameters = count_parameters(spec);
        std::vector<double> loglik;
        if (family == ModelFamily::mixtbern) {
            loglik = fit_bernoulli_mixture(data.y, num_clusters, config).loglik;
        } else {
            config.overlap_mode = family == ModelFamily::miro ? OverlapMode::full : OverlapMode::non_overlapping;
            const ConfigurationLattice lattice(num_clusters, config.overlap_mode);
            if (config.prior && config.prior->dirichlet.size() != lattice.num_configurations()) {
                PriorSpec prior = *config.prior;
                prior.dirichlet = default_dirichlet(lattice);
                config.prior = prior;
            }
            loglik = run_chain(data, config, lattice).loglik;
        }
        row.max_loglik = *std::max_element(loglik.begin(), loglik.end());
        row.bic = bic_mcmc_value(row.max_loglik, data.n(), data.d(), row.num_parameters);
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

SweepResult sweep_k(const TwoModeDataset& data, ModelFamily family, const std::vector<int>& cluster_counts,
                    const ChainConfig& config, int threads) {
    if (cluster_counts.empty()) throw ConfigurationError("empty list of cluster counts");
    SweepResult result;
    result.rows.resize(cluster_counts.size());
    const std::size_t workers = static_cast<std::size_t>(std::max(threads, 1));
    for (std::size_t start = 0; start < cluster_counts.size(); start += workers) {
        const std::size_t stop = std::min(cluster_counts.size(), start + workers);
        if (workers == 1) {
            result.rows[start] = fit_one(data, family, cluster_counts[start], config);
            continue;
        }
        std::vector<std::future<SweepRow>> pending;
        for (std::size_t k = start; k < stop; ++k) {
            pending.push_back(std::async(std::launch::async, fit_one, std::cref(data), family, cluster_counts[k], config));
        }
        for (std::size_t k = start; k < stop; ++k) result.rows[k] = pending[k - start].get();
    }
    const SweepRow* best = nullptr;
    for (const auto& row : result.rows) {
        if (row.error) continue;
        if (!best || row.bic < best->bic || (row.bic == best->bic && row.num_clusters < best->num_clusters)) {
            best = &row;
        }
    }
    if (best) result.selected = best->num_clusters;
    return result;
}

}  // namespace miro
