#pragma once

#include <vector>

#include <Eigen/Dense>

#include "miro/model.hpp"
#include "miro/sampler.hpp"

namespace miro {

// c_ij = 1 when units i and j share a label.
Eigen::MatrixXd cooccurrence(const std::vector<int>& labels);

// Iteration whose co-occurrence matrix is closest (sum of squared differences)
// to the average co-occurrence matrix; earliest iteration on ties.
std::size_t select_pivot(const std::vector<std::vector<int>>& allocations);
std::size_t select_pivot(const McmcTrace& trace);

// Every permutation of 0..k-1 in lexicographic order.
std::vector<std::vector<int>> all_permutations(int k);

// Permutation (old label k -> perm[k]) that brings the coefficients of `state`
// closest to those of `pivot`; first in lexicographic order on ties.
std::vector<int> best_alignment(const ParameterState& state, const ParameterState& pivot);

struct RelabeledTrace {
    McmcTrace trace;
    std::vector<std::vector<int>> permutations;  // applied to each iteration
};

// Pivotal reordering on the flattened (mu, B, Gamma) coefficients. Weights and
// allocations follow the induced permutation of configurations; log-likelihoods
// are carried over unchanged.
RelabeledTrace relabel_trace(const McmcTrace& trace, std::size_t pivot, const ConfigurationLattice& lattice);

// n x K* membership probabilities averaged over the trace.
Eigen::MatrixXd average_membership(const McmcTrace& trace, const TwoModeDataset& data,
                                   const ConfigurationLattice& lattice);

// Row-wise argmax, lowest index on ties.
std::vector<int> argmax_rows(const Eigen::MatrixXd& probabilities);

std::vector<HeirIndex> map_allocation(const McmcTrace& trace, const TwoModeDataset& data,
                                      const ConfigurationLattice& lattice);

struct PosteriorSummary {
    Eigen::VectorXd mu_mean, mu_sd;
    Eigen::MatrixXd beta_mean, beta_sd;
    Eigen::MatrixXd gamma_mean, gamma_sd;
    Eigen::VectorXd alpha_mean, alpha_sd;
};

// Elementwise mean and sample standard deviation (zero for a single draw).
PosteriorSummary posterior_summary(const McmcTrace& trace);

// Chain diagnostics.
double effective_sample_size(const std::vector<double>& series);
// Monte-Carlo standard error of the mean from non-overlapping batch means.
double batch_means_standard_error(const std::vector<double>& series, int num_batches = 50);

}  // namespace miro
