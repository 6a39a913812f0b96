#include "doctest.h"

#include <cmath>

#include "miro/errors.hpp"
#include "miro/overlap.hpp"
#include "miro/random.hpp"
#include "miro/selection.hpp"
#include "miro/simulate.hpp"
#include "support.hpp"

using namespace miro;

TEST_CASE("parameter counts") {
    CHECK(count_parameters({ModelFamily::miro, 2, 0, 6, 26}) == 18);
    CHECK(count_parameters({ModelFamily::mixtprobit, 3, 0, 6, 26}) == 24);
    CHECK(count_parameters({ModelFamily::mixtbern, 3, 0, 6, 26}) == 81);
    // overlapping counting on event dummies (Q = d - 1)
    CHECK(count_parameters({ModelFamily::miro, 2, 0, 25, 26}) == 56);
    CHECK_THROWS_AS(count_parameters({ModelFamily::miro, 0, 0, 1, 2}), ConfigurationError);
}

TEST_CASE("BIC-MCMC formula") {
    CHECK(std::abs(bic_mcmc_value(-117.04, 9, 26, 18) - 332.28) < 0.01);
    CHECK(bic_mcmc_value(0.0, 9, 26, 0) == 0.0);
    CHECK(bic_mcmc_value(-10.0, 5, 5, 3) > bic_mcmc_value(-9.0, 5, 5, 3));
    TwoModeDataset data;
    data.y = Eigen::MatrixXi::Ones(9, 26);
    CHECK(bic_mcmc(std::vector<double>{-200.0, -117.04, -150.0}, data, {ModelFamily::miro, 2, 0, 6, 26}) ==
          doctest::Approx(bic_mcmc_value(-117.04, 9, 26, 18)));
    CHECK_THROWS_AS(bic_mcmc(std::vector<double>{}, data, {ModelFamily::miro, 2, 0, 6, 26}), ConfigurationError);
}

TEST_CASE("observed log-likelihood by hand") {
    // one allowed configuration with pi = 0.5 everywhere
    const ConfigurationLattice single(1, OverlapMode::non_overlapping);
    testing::Gen g(1);
    auto data = testing::random_dataset(g, 4, 3, 0, 1);
    ParameterState p = zero_state(1, 0, 1, 4, 2);
    p.alpha << 0.0, 1.0;
    CHECK(observed_loglik(p, data, single) == doctest::Approx(12 * std::log(0.5)).epsilon(1e-14));

    const ConfigurationLattice lattice(1, OverlapMode::full);
    TwoModeDataset one;
    one.y = (Eigen::MatrixXi(1, 1) << 0).finished();
    one.x = (Eigen::MatrixXd(1, 1) << 2.0).finished();
    one.w.resize(1, 0);
    ParameterState q = zero_state(1, 1, 0, 1, 2);
    q.mu(0) = -0.2;
    q.beta(0, 0) = 0.4;
    q.alpha << 0.35, 0.65;
    const double pi = 0.5 * std::erfc(-0.6 / std::sqrt(2.0));
    CHECK(std::abs(observed_loglik(q, one, lattice) - std::log(0.35 + 0.65 * (1 - pi))) < 1e-12);
}

TEST_CASE("observed log-likelihood is label invariant (property)") {
    testing::Gen g(2);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = testing::uniform_int(g, 1, 4);
        const ConfigurationLattice lattice(k, OverlapMode::full);
        const auto data = testing::random_dataset(g, 6, 4, 1, 1);
        const auto s = testing::random_state(g, data, lattice);
        const auto p = permute_clusters(s, testing::random_permutation(g, k), lattice);
        CHECK(std::abs(observed_loglik(s, data, lattice) - observed_loglik(p, data, lattice)) < 1e-10);
    }
}

TEST_CASE("true parameters dominate permuted event coefficients on average") {
    double truth_total = 0.0, scrambled_total = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        SimulationConfig config = simulation_preset("event-only-n150");
        config.seed = 100 + rep;
        const SimulatedData sim = simulate(config);
        const ConfigurationLattice lattice(2, OverlapMode::full);
        ParameterState truth = zero_state(2, 0, 2, sim.data.n(), 4);
        truth.mu = sim.coefficients.mu;
        truth.gamma = sim.coefficients.gamma;
        truth.alpha = sim.weights;
        truth.z = sim.labels;
        ParameterState scrambled = truth;
        scrambled.gamma.col(0).swap(scrambled.gamma.col(1));
        scrambled.gamma.row(0).swap(scrambled.gamma.row(1));
        truth_total += observed_loglik(truth, sim.data, lattice);
        scrambled_total += observed_loglik(scrambled, sim.data, lattice);
    }
    CHECK(truth_total >= scrambled_total);
}

TEST_CASE("sweep over K") {
    SimulationConfig config = simulation_preset("event-only-n50");
    config.seed = 3;
    const SimulatedData sim = simulate(config);
    ChainConfig chain;
    chain.iterations = 300;
    chain.burn_in = 150;
    chain.seed = 4;
    const SweepResult one = sweep_k(sim.data, ModelFamily::miro, {2}, chain);
    REQUIRE(one.selected);
    CHECK(*one.selected == 2);

    const SweepResult serial = sweep_k(sim.data, ModelFamily::miro, {1, 2, 3}, chain, 1);
    const SweepResult parallel = sweep_k(sim.data, ModelFamily::miro, {1, 2, 3}, chain, 3);
    REQUIRE(serial.rows.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK(serial.rows[r].num_clusters == static_cast<int>(r) + 1);
        CHECK(serial.rows[r].bic == parallel.rows[r].bic);
        CHECK(serial.rows[r].seed == derive_seed(4, r + 1));
    }
    CHECK(serial.selected == parallel.selected);

    // a failing K is reported and the sweep continues
    const SweepResult broken = sweep_k(sim.data, ModelFamily::miro, {2, 11}, chain);
    CHECK(broken.rows[1].error.has_value());
    CHECK(*broken.selected == 2);

    const SweepResult bern = sweep_k(sim.data, ModelFamily::mixtbern, {1, 2}, chain);
    CHECK(bern.rows[1].num_parameters == 2 * 15 + 2);
    CHECK_FALSE(bern.rows[1].error.has_value());
}

TEST_CASE("model family names") {
    for (auto f : {ModelFamily::miro, ModelFamily::mixtprobit, ModelFamily::mixtbern})
        CHECK(parse_model_family(to_string(f)) == f);
    CHECK_THROWS_AS(parse_model_family("manet"), ConfigurationError);
}
