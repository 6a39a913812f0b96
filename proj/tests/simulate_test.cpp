#include "doctest.h"

#include <cmath>
#include <map>

#include "miro/errors.hpp"
#include "miro/overlap.hpp"
#include "miro/postprocess.hpp"
#include "miro/simulate.hpp"
#include "support.hpp"

using namespace miro;

namespace {

// Pair-counting ARI oracle.
double ari_oracle(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    double both = 0, in_a = 0, in_b = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool sa = a[i] == a[j], sb = b[i] == b[j];
            both += sa && sb;
            in_a += sa;
            in_b += sb;
            pairs += 1;
        }
    const double expected = in_a * in_b / pairs;
    return (both - expected) / (0.5 * (in_a + in_b) - expected);
}

double mer_oracle(const std::vector<int>& t, const std::vector<int>& e, const ConfigurationLattice& lattice) {
    double best = 1.0;
    for (const auto& perm : all_permutations(lattice.num_clusters())) {
        int wrong = 0;
        for (std::size_t i = 0; i < t.size(); ++i) wrong += permute_configuration(e[i], perm, lattice) != t[i];
        best = std::min(best, static_cast<double>(wrong) / static_cast<double>(t.size()));
    }
    return best;
}

}  // namespace

TEST_CASE("random benchmark") {
    CHECK(std::abs(random_benchmark_mer(benchmark_weights()) - 0.685) < 1e-12);
    CHECK(random_benchmark_mer((Eigen::VectorXd(1) << 1.0).finished()) == 0.0);
    CHECK(random_benchmark_mer((Eigen::VectorXd(2) << 0.5, 0.5).finished()) == 0.5);
}

TEST_CASE("MER") {
    const ConfigurationLattice lattice(2, OverlapMode::full);
    CHECK(mer({1, 2, 3, 0}, {1, 2, 3, 0}, lattice) == 0.0);
    CHECK(mer({1, 2, 3, 0}, {2, 1, 3, 0}, lattice) == 0.0);
    CHECK(mer({1, 1, 2, 3}, {1, 2, 2, 0}, lattice) == mer_oracle({1, 1, 2, 3}, {1, 2, 2, 0}, lattice));
    CHECK(mer({1, 1, 2, 3}, {1, 2, 2, 0}, lattice) == 0.5);
    CHECK_THROWS_AS(mer({1}, {1, 2}, lattice), ValidationError);

    testing::Gen g(1);
    for (int trial = 0; trial < 200; ++trial) {
        const ConfigurationLattice l(testing::uniform_int(g, 1, 3), OverlapMode::full);
        std::vector<int> t(10), e(10);
        for (auto& v : t) v = testing::uniform_int(g, 0, l.num_configurations() - 1);
        for (auto& v : e) v = testing::uniform_int(g, 0, l.num_configurations() - 1);
        const double m = mer(t, e, l);
        CHECK(m == mer_oracle(t, e, l));
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
        const auto perm = testing::random_permutation(g, l.num_clusters());
        std::vector<int> moved(10);
        for (std::size_t i = 0; i < 10; ++i) moved[i] = permute_configuration(e[i], perm, l);
        CHECK(mer(t, moved, l) == m);
    }
}

TEST_CASE("one-to-one matched MER") {
    CHECK(mer_matched({0, 0, 1, 1}, {5, 5, 7, 7}) == 0.0);
    CHECK(mer_matched({0, 0, 1, 1, 2}, {3, 3, 3, 4, 4}) == doctest::Approx(0.4));
    CHECK(mer_matched({0, 1, 2}, {0, 0, 0}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("adjusted Rand index") {
    CHECK(adjusted_rand_index({0, 0, 1, 1, 2, 2}, {0, 0, 1, 1, 2, 2}) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index({0, 0, 1, 1, 2, 2}, {4, 4, 4, 4, 4, 4}) == doctest::Approx(0.0));
    const std::vector<int> a{0, 0, 0, 1, 1, 2}, b{0, 0, 1, 1, 2, 2};
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(ari_oracle(a, b)).epsilon(1e-12));

    testing::Gen g(2);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = testing::uniform_int(g, 4, 20);
        std::vector<int> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (auto& v : x) v = testing::uniform_int(g, 0, 3);
        for (auto& v : y) v = testing::uniform_int(g, 0, 3);
        const double r = adjusted_rand_index(x, y);
        CHECK(r <= 1.0 + 1e-12);
        CHECK(r == doctest::Approx(adjusted_rand_index(y, x)).epsilon(1e-12));
        std::vector<int> renamed = y;
        for (auto& v : renamed) v = 7 - 2 * v;
        CHECK(r == doctest::Approx(adjusted_rand_index(x, renamed)).epsilon(1e-12));
        const double o = ari_oracle(x, y);
        if (std::isfinite(o)) CHECK(r == doctest::Approx(o).epsilon(1e-9));
    }
}

TEST_CASE("presets") {
    const auto e150 = simulation_preset("event-only-n150");
    CHECK(e150.n == 150);
    CHECK(e150.d == 15);
    CHECK(e150.num_event_covariates() == 2);
    const auto logit = simulation_preset("misspec-logit");
    CHECK(logit.n == 300);
    CHECK(logit.d == 20);
    CHECK(logit.num_clusters == 4);
    CHECK(logit.dgp == DataGeneratingProcess::mixture_logit);
    for (const auto& name : simulation_preset_names()) {
        const SimulatedData sim = simulate(simulation_preset(name));
        CHECK(sim.data.n() == simulation_preset(name).n);
        CHECK(validate_dataset(sim.data).empty());
    }
    CHECK_THROWS_AS(simulation_preset("nope"), ConfigurationError);
}

TEST_CASE("separation pattern") {
    const TrueCoefficients c = separated_coefficients(4, 1, 1, 1.5, 1.0);
    CHECK(c.mu == (Eigen::VectorXd(4) << 1.5, -1.5, 1.5, -1.5).finished());
    CHECK(c.beta.col(0) == (Eigen::VectorXd(4) << 1, -1, -1, 1).finished());
    CHECK(c.gamma.col(0) == c.beta.col(0));
}

TEST_CASE("seeds: reproducible, shape preserving") {
    SimulationConfig config = simulation_preset("actor-event-n250");
    config.seed = 5;
    const SimulatedData a = simulate(config), b = simulate(config);
    CHECK(a.data == b.data);
    CHECK(a.labels == b.labels);
    config.seed = 6;
    const SimulatedData c = simulate(config);
    CHECK(c.data.y.rows() == a.data.y.rows());
    CHECK(c.data.w.cols() == a.data.w.cols());
    CHECK_FALSE(c.data.y == a.data.y);
}

TEST_CASE("empty configuration rows are all zero, saturated predictors are deterministic") {
    SimulationConfig config = simulation_preset("actor-only-n50-d15");
    config.n = 400;
    TrueCoefficients sat;
    sat.mu = (Eigen::VectorXd(2) << 9.0, -9.0).finished();
    sat.beta = Eigen::MatrixXd::Zero(2, 1);
    sat.gamma.resize(2, 0);
    config.coefficients = sat;
    const SimulatedData sim = simulate(config);
    for (int i = 0; i < 400; ++i) {
        const int h = sim.labels[static_cast<std::size_t>(i)];
        const int total = sim.data.y.row(i).sum();
        if (h == 0) CHECK(total == 0);
        if (h == 1) CHECK(total == 15);
        if (h == 2) CHECK(total == 0);
    }
}

TEST_CASE("attendance frequencies match the link functions") {
    for (auto dgp : {DataGeneratingProcess::miro_probit, DataGeneratingProcess::mixture_logit}) {
        SimulationConfig config;
        config.n = 20000;
        config.d = 4;
        config.num_clusters = 2;
        config.event_levels = 2;
        config.dgp = dgp;
        config.weights = dgp == DataGeneratingProcess::miro_probit ? benchmark_weights()
                                                                    : (Eigen::VectorXd(2) << 0.4, 0.6).finished();
        config.seed = 7;
        const SimulatedData sim = simulate(config);
        const ConfigurationLattice lattice(2, OverlapMode::full);
        ParameterState truth = zero_state(2, 0, 1, config.n, 4);
        truth.mu = sim.coefficients.mu;
        truth.gamma = sim.coefficients.gamma;
        std::map<std::pair<int, int>, std::pair<double, double>> cells;
        for (int i = 0; i < config.n; ++i) {
            const int h = sim.labels[static_cast<std::size_t>(i)];
            for (int j = 0; j < config.d; ++j) {
                auto& cell = cells[{h, j}];
                cell.first += sim.data.y(i, j);
                cell.second += 1;
            }
        }
        for (const auto& [key, cell] : cells) {
            const auto [h, j] = key;
            double p;
            if (dgp == DataGeneratingProcess::miro_probit) {
                p = attendance_probability(h, 0, j, truth, sim.data, lattice);
            } else {
                p = 1.0 / (1.0 + std::exp(-linear_predictor(h, 0, j, truth, sim.data)));
            }
            CHECK(std::abs(cell.first / cell.second - p) < 0.02);
        }
    }
}
