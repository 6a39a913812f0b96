#include "doctest.h"

#include <cmath>

#include "miro/random.hpp"

using namespace miro;

namespace {

struct Moments {
    double mean;
    double se;
};

template <typename F>
Moments moments(int draws, F&& f) {
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < draws; ++t) {
        const double v = f();
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / draws;
    return {mean, std::sqrt((sum2 / draws - mean * mean) / draws)};
}

}  // namespace

TEST_CASE("truncated normal respects the sign constraint") {
    Rng rng(1);
    for (int t = 0; t < 100000; ++t) CHECK_UNARY(sample_truncated_normal(0.3, 1, rng) > 0.0);
    for (int t = 0; t < 100000; ++t) CHECK_UNARY(sample_truncated_normal(-0.3, 0, rng) <= 0.0);
}

TEST_CASE("half-normal mean") {
    Rng rng(2);
    const auto m = moments(100000, [&] { return sample_truncated_normal(0.0, 1, rng); });
    CHECK(std::abs(m.mean - std::sqrt(2.0 / M_PI)) < 0.01 * std::sqrt(2.0 / M_PI));
}

TEST_CASE("far tails stay finite") {
    Rng rng(3);
    for (double mean : {-6.0, -8.0, -20.0, 8.0}) {
        for (int t = 0; t < 1000; ++t) {
            const double r = sample_truncated_normal(mean, 1, rng);
            CHECK(std::isfinite(r));
            CHECK(r > 0.0);
            const double s = sample_truncated_normal(-mean, 0, rng);
            CHECK(std::isfinite(s));
            CHECK(s <= 0.0);
        }
    }
}

TEST_CASE("truncated normal mean matches the inverse Mills ratio") {
    Rng rng(4);
    for (double a : {-1.0, 0.5, 2.0, 4.0, 7.0}) {
        // E[Z | Z > a] = phi(a) / (1 - Phi(a))
        const double mills = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI) / (0.5 * std::erfc(a / std::sqrt(2.0)));
        const auto m = moments(50000, [&] { return standard_normal_above(a, rng); });
        CHECK(std::abs(m.mean - mills) < 4.0 * m.se);
    }
}

TEST_CASE("Dirichlet moments") {
    Rng rng(5);
    const Eigen::VectorXd a = (Eigen::VectorXd(4) << 1.0, 4.0, 0.5, 2.5).finished();
    const int draws = 100000;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(4), sum2 = Eigen::VectorXd::Zero(4);
    for (int t = 0; t < draws; ++t) {
        const Eigen::VectorXd v = sample_dirichlet(a, rng);
        CHECK(std::abs(v.sum() - 1.0) < 1e-12);
        sum += v;
        sum2 += v.cwiseProduct(v);
    }
    const Eigen::VectorXd mean = sum / draws;
    for (int k = 0; k < 4; ++k) {
        const double expected = a(k) / a.sum();
        const double var = expected * (1 - expected) / (a.sum() + 1);
        CHECK(std::abs(mean(k) - expected) < 3.0 * std::sqrt(var / draws));
    }

    const Eigen::VectorXd with_zero = (Eigen::VectorXd(3) << 2.0, 0.0, 1.0).finished();
    for (int t = 0; t < 100; ++t) CHECK(sample_dirichlet(with_zero, rng)(1) == 0.0);
}

TEST_CASE("log categorical") {
    Rng rng(6);
    Eigen::VectorXd w(3);
    w << std::log(0.2), -INFINITY, std::log(0.8);
    int counts[3] = {0, 0, 0};
    for (int t = 0; t < 100000; ++t) ++counts[sample_log_categorical(w, rng)];
    CHECK(counts[1] == 0);
    CHECK(std::abs(counts[0] / 1e5 - 0.2) < 3.0 * std::sqrt(0.16 / 1e5));
    w.setConstant(-INFINITY);
    CHECK(sample_log_categorical(w, rng) == -1);
    w << 1000.0, 1000.0, -INFINITY;
    CHECK(log_sum_exp(w) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}
