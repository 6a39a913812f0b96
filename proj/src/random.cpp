#include "miro/random.hpp"

#include <cmath>
#include <limits>

namespace miro {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double standard_normal(Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    return normal(rng);
}

double standard_normal_above(double lower, Rng& rng) {
    // Below this bound plain rejection accepts at least ~30% of draws.
    constexpr double kTailThreshold = 0.5;
    if (lower < kTailThreshold) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (;;) {
            const double v = normal(rng);
            if (v > lower) return v;
        }
    }
    const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
    std::exponential_distribution<double> exponential(rate);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (;;) {
        const double v = lower + exponential(rng);
        const double gap = v - rate;
        if (unif(rng) <= std::exp(-0.5 * gap * gap) && v > lower) return v;
    }
}

double sample_truncated_normal(double mean, int y, Rng& rng) {
    for (;;) {
        if (y == 1) {
            const double r = mean + standard_normal_above(-mean, rng);
            if (r > 0) return r;
        } else {
            const double r = mean - standard_normal_above(mean, rng);
            if (r <= 0) return r;
        }
    }
}

Eigen::VectorXd sample_dirichlet(const Eigen::VectorXd& concentration, Rng& rng) {
    Eigen::VectorXd draw = Eigen::VectorXd::Zero(concentration.size());
    for (Eigen::Index h = 0; h < concentration.size(); ++h) {
        if (concentration(h) <= 0) continue;
        std::gamma_distribution<double> gamma(concentration(h), 1.0);
        draw(h) = gamma(rng);
    }
    const double total = draw.sum();
    if (!(total > 0)) {
        // All gamma draws underflowed; only possible for tiny concentrations.
        Eigen::Index best = 0;
        concentration.maxCoeff(&best);
        draw.setZero();
        draw(best) = 1.0;
        return draw;
    }
    return draw / total;
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& values) {
    const double top = values.size() > 0 ? values.maxCoeff() : -std::numeric_limits<double>::infinity();
    if (!std::isfinite(top)) return top;
    return top + std::log((values.array() - top).exp().sum());
}

int sample_log_categorical(const Eigen::Ref<const Eigen::VectorXd>& log_weights, Rng& rng) {
    const double top = log_weights.maxCoeff();
    if (!std::isfinite(top)) return -1;
    const Eigen::VectorXd weights = (log_weights.array() - top).exp();
    std::uniform_real_distribution<double> unif(0.0, weights.sum());
    const double target = unif(rng);
    double cumulative = 0.0;
    int last_positive = -1;
    for (Eigen::Index h = 0; h < weights.size(); ++h) {
        if (weights(h) <= 0) continue;
        cumulative += weights(h);
        last_positive = static_cast<int>(h);
        if (target < cumulative) return last_positive;
    }
    return last_positive;
}

}  // namespace miro
