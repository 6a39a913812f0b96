#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace miro {

using Rng = std::mt19937_64;

// Independent stream seeds derived from one base seed (SplitMix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

double standard_normal(Rng& rng);

// Standard normal restricted to (lower, +inf). Normal rejection near the bulk,
// exponential rejection (optimal rate) in the tail, so any lower bound works.
double standard_normal_above(double lower, Rng& rng);

// Latent utility for a probit observation: N(mean, 1) restricted to (0, inf)
// when y = 1 and to (-inf, 0] when y = 0.
double sample_truncated_normal(double mean, int y, Rng& rng);

// Draws from Dir(concentration); zero concentrations give exact zeros.
Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& concentration, Rng& rng);

// Index drawn with probability proportional to exp(log_weights); -inf entries
// are never chosen. Returns -1 when every weight is -inf.
int sample_log_categorical(const Eigen::Ref<const Eigen::VectorXd>& log_weights, Rng& rng);

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& values);

}  // namespace miro
