#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "miro/errors.hpp"

namespace miro {

// Index of a heir configuration, i.e. a row of the configuration matrix U.
// Zero is always the all-zero (empty) configuration.
using HeirIndex = int;

// Bit k of a configuration mask is set when primary cluster k is part of it.
using ConfigMask = std::uint32_t;

inline constexpr int kMaxClusters = 10;

enum class OverlapMode { full, non_overlapping };

struct TwoModeDataset {
    Eigen::MatrixXi y;  // n x d attendance indicators
    Eigen::MatrixXd x;  // n x L actor covariates
    Eigen::MatrixXd w;  // d x Q event covariates
    std::vector<std::string> actor_names;
    std::vector<std::string> event_names;
    std::vector<std::string> actor_covariate_names;
    std::vector<std::string> event_covariate_names;

    int n() const { return static_cast<int>(y.rows()); }
    int d() const { return static_cast<int>(y.cols()); }
    int num_actor_covariates() const { return static_cast<int>(x.cols()); }
    int num_event_covariates() const { return static_cast<int>(w.cols()); }

};

bool operator==(const TwoModeDataset& a, const TwoModeDataset& b);

// Lists every violated dataset invariant; empty means valid.
std::vector<std::string> validate_dataset(const TwoModeDataset& data);

// Throws ValidationError carrying the first few violations.
void require_valid(const TwoModeDataset& data);

// Fills names ("a1", "e1", ...) that are missing so every matrix has labels.
TwoModeDataset with_default_names(TwoModeDataset data);

// Replaces W with reference-coded event indicators (d-1 columns, first event is
// the reference). Together with the cluster intercepts this gives every cluster
// one free attendance level per event.
TwoModeDataset with_event_dummies(TwoModeDataset data);

/// All 2^K binary allocation patterns over K primary clusters.
///
/// Rows are ordered by the number of clusters they contain and, within a
/// given size, lexicographically by the cluster indices: the empty
/// configuration first, then the singletons in label order, then pairs, ...
class ConfigurationLattice {
public:
    ConfigurationLattice(int num_clusters, OverlapMode mode);

    int num_clusters() const { return num_clusters_; }
    int num_configurations() const { return static_cast<int>(masks_.size()); }
    OverlapMode mode() const { return mode_; }

    ConfigMask mask(HeirIndex h) const { return masks_.at(static_cast<std::size_t>(h)); }
    int size(HeirIndex h) const;
    bool contains(HeirIndex h, int cluster) const { return (mask(h) >> cluster) & 1u; }
    bool allowed(HeirIndex h) const { return allowed_.at(static_cast<std::size_t>(h)); }
    const std::vector<HeirIndex>& allowed_indices() const { return allowed_indices_; }

    HeirIndex index_of(ConfigMask mask) const;
    HeirIndex index_of(const std::vector<int>& z_primary) const;
    std::vector<int> row(HeirIndex h) const;

    // The K* x K binary matrix U.
    Eigen::MatrixXi u_matrix() const;

    // Compact form such as "101", cluster 1 first.
    std::string bit_string(HeirIndex h) const;
    HeirIndex parse_bit_string(const std::string& bits) const;

private:
    int num_clusters_;
    OverlapMode mode_;
    std::vector<ConfigMask> masks_;
    std::vector<HeirIndex> index_by_mask_;
    std::vector<bool> allowed_;
    std::vector<HeirIndex> allowed_indices_;
};

ConfigurationLattice build_lattice(int num_clusters, OverlapMode mode);

inline HeirIndex heir_index(const std::vector<int>& z_primary, const ConfigurationLattice& lattice) {
    return lattice.index_of(z_primary);
}

struct PriorSpec {
    double sigma2_mu = 10.0;
    double sigma2_beta = 10.0;
    double sigma2_gamma = 10.0;
    Eigen::VectorXd dirichlet;  // one concentration per configuration; empty means default_dirichlet

    void validate(const ConfigurationLattice& lattice) const;
};

// a_h = K* on singleton configurations and 1 elsewhere.
Eigen::VectorXd default_dirichlet(const ConfigurationLattice& lattice);

PriorSpec default_prior(const ConfigurationLattice& lattice);

struct ParameterState {
    Eigen::VectorXd mu;     // K
    Eigen::MatrixXd beta;   // K x L
    Eigen::MatrixXd gamma;  // K x Q
    Eigen::VectorXd alpha;  // K*
    std::vector<HeirIndex> z;

    int num_clusters() const { return static_cast<int>(mu.size()); }

};

// Exact equality, including matrix shapes.
bool operator==(const ParameterState& a, const ParameterState& b);

ParameterState zero_state(int num_clusters, int num_actor_covariates, int num_event_covariates,
                          int num_units, int num_configurations);

// Weights on the simplex within 1e-12, allocations in allowed configurations.
std::vector<std::string> check_state(const ParameterState& state, const ConfigurationLattice& lattice);

// Relabels primary clusters: old cluster k becomes cluster perm[k]. Coefficient rows
// move accordingly and heir-level objects follow the induced action on configurations.
ParameterState permute_clusters(const ParameterState& state, const std::vector<int>& perm,
                                const ConfigurationLattice& lattice);

HeirIndex permute_configuration(HeirIndex h, const std::vector<int>& perm,
                                const ConfigurationLattice& lattice);

}  // namespace miro
