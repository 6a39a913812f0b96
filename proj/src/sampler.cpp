#include "miro/sampler.hpp"

#include <cmath>
#include <limits>

#include "miro/overlap.hpp"
#include "miro/selection.hpp"

namespace miro {

void ChainConfig::validate() const {
    if (iterations < 1) throw ConfigurationError("iterations must be positive");
    if (burn_in < 0 || burn_in >= iterations) throw ConfigurationError("burn-in must lie in [0, iterations)");
    if (thin < 1) throw ConfigurationError("thin must be positive");
}

bool ChainConfig::retained(int iteration) const {
    return iteration > burn_in && (iterations - iteration) % thin == 0;
}

int ChainConfig::num_retained() const {
    return (iterations - burn_in - 1) / thin + 1;
}

AllocationDraw sample_allocations(const ParameterState& params, const TwoModeDataset& data,
                                  const ConfigurationLattice& lattice, Rng& rng) {
    const Eigen::MatrixXd loglik = configuration_loglik(params, data, lattice);
    const Eigen::VectorXd log_alpha = params.alpha.array().log();
    AllocationDraw draw;
    draw.z.resize(static_cast<std::size_t>(data.n()));
    draw.counts = Eigen::VectorXi::Zero(lattice.num_configurations());
    for (int i = 0; i < data.n(); ++i) {
        const Eigen::VectorXd logp = log_alpha + loglik.row(i).transpose();
        const int h = sample_log_categorical(logp, rng);
        if (h < 0) throw NumericError("unit " + std::to_string(i + 1) + " has zero probability under every configuration");
        draw.z[static_cast<std::size_t>(i)] = h;
        ++draw.counts(h);
    }
    return draw;
}

Eigen::MatrixXd membership_probabilities(const ParameterState& params, const TwoModeDataset& data,
                                         const ConfigurationLattice& lattice) {
    Eigen::MatrixXd logp = configuration_loglik(params, data, lattice);
    const Eigen::RowVectorXd log_alpha = params.alpha.array().log().transpose();
    logp.rowwise() += log_alpha;
    Eigen::MatrixXd prob(logp.rows(), logp.cols());
    for (Eigen::Index i = 0; i < logp.rows(); ++i) {
        const double norm = log_sum_exp(logp.row(i).transpose());
        if (!std::isfinite(norm)) throw NumericError("membership probabilities undefined for unit " + std::to_string(i + 1));
        prob.row(i) = (logp.row(i).array() - norm).exp();
    }
    return prob;
}

Eigen::VectorXd sample_weights(const Eigen::VectorXi& counts, const Eigen::VectorXd& prior_concentration,
                               const ConfigurationLattice& lattice, Rng& rng) {
    Eigen::VectorXd concentration = prior_concentration + counts.cast<double>();
    for (HeirIndex h = 0; h < lattice.num_configurations(); ++h) {
        if (!lattice.allowed(h)) concentration(h) = 0.0;
    }
    return sample_dirichlet(concentration, rng);
}

Eigen::VectorXd prior_precision(const CoefficientLayout& layout, const PriorSpec& prior) {
    Eigen::VectorXd precision(layout.size());
    for (int c = 0; c < layout.size(); ++c) {
        switch (layout.role(c)) {
            case ColumnRole::intercept: precision(c) = 1.0 / prior.sigma2_mu; break;
            case ColumnRole::actor: precision(c) = 1.0 / prior.sigma2_beta; break;
            case ColumnRole::event: precision(c) = 1.0 / prior.sigma2_gamma; break;
        }
    }
    return precision;
}

CoefficientConditional::CoefficientConditional(const Eigen::MatrixXd& a, const Eigen::VectorXd& utilities,
                                               const Eigen::VectorXd& prior_precision) {
    const Eigen::Index p = prior_precision.size();
    Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(p, p);
    if (a.rows() > 0) precision.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    precision.diagonal() += prior_precision;
    precision = precision.selfadjointView<Eigen::Lower>();
    precision_factor_.compute(precision);
    if (precision_factor_.info() != Eigen::Success) {
        throw NumericError("coefficient posterior precision is not positive definite");
    }
    if (a.rows() > 0) {
        mean_ = precision_factor_.solve(a.transpose() * utilities);
    } else {
        mean_ = Eigen::VectorXd::Zero(p);
    }
}

Eigen::MatrixXd CoefficientConditional::covariance() const {
    const Eigen::Index p = mean_.size();
    return precision_factor_.solve(Eigen::MatrixXd::Identity(p, p));
}

Eigen::VectorXd CoefficientConditional::sample(Rng& rng) const {
    Eigen::VectorXd c(mean_.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = standard_normal(rng);
    // precision = L L', so L'^-1 c has covariance (L L')^-1 = V.
    return mean_ + precision_factor_.matrixU().solve(c);
}

Eigen::VectorXd refresh_utilities(const StackedDesign& design, const Eigen::VectorXd& theta, Rng& rng) {
    const Eigen::VectorXd mean = design.a * theta;
    Eigen::VectorXd r(mean.size());
    for (Eigen::Index k = 0; k < r.size(); ++k) {
        r(k) = sample_truncated_normal(mean(k), static_cast<int>(design.y_tilde(k)), rng);
    }
    return r;
}

Eigen::VectorXd sample_coefficients(const StackedDesign& design, const Eigen::VectorXd& utilities,
                                    const PriorSpec& prior, Rng& rng) {
    const CoefficientConditional conditional(design.a, utilities, prior_precision(design.layout, prior));
    return conditional.sample(rng);
}

void require_predictors(const TwoModeDataset& data) {
    if (data.num_actor_covariates() == 0 && data.num_event_covariates() == 0) {
        throw ConfigurationError(
            "no actor or event covariates: supply covariates or use event-dummy mode");
    }
}

MiroSampler::MiroSampler(const TwoModeDataset& data, const ConfigurationLattice& lattice, PriorSpec prior)
    : data_(with_default_names(data)), lattice_(lattice), prior_(std::move(prior)) {
    if (prior_.dirichlet.size() == 0) prior_.dirichlet = default_dirichlet(lattice_);
    prior_.validate(lattice_);
    state_ = zero_state(lattice_.num_clusters(), data_.num_actor_covariates(), data_.num_event_covariates(),
                        data_.n(), lattice_.num_configurations());
}

void MiroSampler::initialize(Rng& rng) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(lattice_.num_configurations());
    for (HeirIndex h : lattice_.allowed_indices()) alpha(h) = prior_.dirichlet(h);
    alpha /= alpha.sum();
    state_ = zero_state(lattice_.num_clusters(), data_.num_actor_covariates(), data_.num_event_covariates(),
                        data_.n(), lattice_.num_configurations());
    state_.alpha = alpha;
    const Eigen::VectorXd log_alpha = alpha.array().log();
    for (auto& h : state_.z) h = sample_log_categorical(log_alpha, rng);
}

void MiroSampler::sweep(Rng& rng) {
    AllocationDraw allocation = sample_allocations(state_, data_, lattice_, rng);
    state_.z = std::move(allocation.z);
    state_.alpha = sample_weights(allocation.counts, prior_.dirichlet, lattice_, rng);

    const CoefficientLayout layout = layout_for(state_);
    const Eigen::VectorXd precision = prior_precision(layout, prior_);
    Eigen::VectorXd theta;
    if (allocation.counts(lattice_.index_of(ConfigMask{0})) == data_.n()) {
        const CoefficientConditional prior_only(Eigen::MatrixXd(0, layout.size()), Eigen::VectorXd(0), precision);
        theta = prior_only.sample(rng);
    } else {
        const StackedDesign design = build_design(data_, state_.z, lattice_);
        const Eigen::VectorXd utilities = refresh_utilities(design, flatten_parameters(state_), rng);
        theta = CoefficientConditional(design.a, utilities, precision).sample(rng);
    }
    unflatten_parameters(theta, state_);
}

McmcTrace run_chain(const TwoModeDataset& data, const ChainConfig& config, const ConfigurationLattice& lattice) {
    config.validate();
    require_valid(data);
    require_predictors(data);
    if (lattice.mode() != config.overlap_mode) throw ConfigurationError("lattice overlap mode differs from chain config");
    const PriorSpec prior = config.prior ? *config.prior : default_prior(lattice);

    MiroSampler sampler(data, lattice, prior);
    Rng rng(config.seed);
    sampler.initialize(rng);

    McmcTrace trace;
    trace.states.reserve(static_cast<std::size_t>(config.num_retained()));
    for (int t = 1; t <= config.iterations; ++t) {
        sampler.sweep(rng);
        if (!config.retained(t)) continue;
        trace.iterations.push_back(t);
        trace.states.push_back(sampler.state());
        trace.loglik.push_back(observed_loglik(sampler.state(), sampler.data(), lattice));
    }
    return trace;
}

}  // namespace miro
