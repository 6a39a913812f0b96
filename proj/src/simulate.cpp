#include "miro/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "miro/overlap.hpp"
#include "miro/postprocess.hpp"
#include "miro/random.hpp"

namespace miro {

void SimulationConfig::validate() const {
    if (n < 1 || d < 1) throw ConfigurationError("simulation needs n >= 1 and d >= 1");
    if (num_clusters < 1 || num_clusters > kMaxClusters) throw ConfigurationError("simulation K out of range");
    if (num_actor_covariates < 0 || event_levels < 0 || event_levels == 1) {
        throw ConfigurationError("invalid covariate plan");
    }
    const Eigen::Index expected = dgp == DataGeneratingProcess::miro_probit ? (Eigen::Index{1} << num_clusters)
                                                                            : num_clusters;
    if (weights.size() != expected) {
        throw ConfigurationError("simulation weights need " + std::to_string(expected) + " entries");
    }
    if ((weights.array() < 0).any() || std::abs(weights.sum() - 1.0) > 1e-9) {
        throw ConfigurationError("simulation weights must lie on the simplex");
    }
    if (coefficients) {
        const auto& c = *coefficients;
        if (c.mu.size() != num_clusters || c.beta.rows() != num_clusters || c.gamma.rows() != num_clusters ||
            c.beta.cols() != num_actor_covariates || c.gamma.cols() != num_event_covariates()) {
            throw ConfigurationError("true coefficients do not match the covariate plan");
        }
    }
}

Eigen::VectorXd benchmark_weights() {
    Eigen::VectorXd w(4);
    w << 0.10, 0.45, 0.25, 0.20;
    return w;
}

std::vector<std::string> simulation_preset_names() {
    return {"actor-only-n50-d5", "actor-only-n50-d15", "event-only-n50",
            "event-only-n150",   "actor-event-n250",   "misspec-logit"};
}

SimulationConfig simulation_preset(const std::string& name) {
    SimulationConfig c;
    c.num_clusters = 2;
    c.weights = benchmark_weights();
    if (name == "actor-only-n50-d5" || name == "actor-only-n50-d15") {
        c.n = 50;
        c.d = name == "actor-only-n50-d5" ? 5 : 15;
        c.num_actor_covariates = 1;
    } else if (name == "event-only-n50" || name == "event-only-n150") {
        c.n = name == "event-only-n50" ? 50 : 150;
        c.d = 15;
        c.event_levels = 3;
    } else if (name == "actor-event-n250") {
        c.n = 250;
        c.d = 21;
        c.num_actor_covariates = 1;
        c.event_levels = 3;
    } else if (name == "misspec-logit") {
        c.n = 300;
        c.d = 20;
        c.num_clusters = 4;
        c.num_actor_covariates = 1;
        c.event_levels = 2;
        c.dgp = DataGeneratingProcess::mixture_logit;
    } else {
        throw ConfigurationError("unknown simulation preset '" + name + "'");
    }
    return c;
}

TrueCoefficients separated_coefficients(int num_clusters, int num_actor_covariates, int num_event_covariates,
                                        double intercept_separation, double slope_separation) {
    TrueCoefficients c;
    c.mu.resize(num_clusters);
    c.beta.resize(num_clusters, num_actor_covariates);
    c.gamma.resize(num_clusters, num_event_covariates);
    for (int k = 0; k < num_clusters; ++k) {
        c.mu(k) = (k % 2 == 0 ? 1.0 : -1.0) * intercept_separation;
        const double slope = ((k + k / 2) % 2 == 0 ? 1.0 : -1.0) * slope_separation;
        c.beta.row(k).setConstant(slope);
        c.gamma.row(k).setConstant(slope);
    }
    return c;
}

namespace {

// Actor covariates, the categorical event covariate and its reference coding.
SimulatedData draw_covariates(const SimulationConfig& config, Rng& rng) {
    SimulatedData out;
    TwoModeDataset& data = out.data;
    data.y = Eigen::MatrixXi::Zero(config.n, config.d);
    data.x.resize(config.n, config.num_actor_covariates);
    for (int i = 0; i < config.n; ++i) {
        for (int l = 0; l < config.num_actor_covariates; ++l) data.x(i, l) = standard_normal(rng);
    }
    for (int l = 0; l < config.num_actor_covariates; ++l) data.actor_covariate_names.push_back("x" + std::to_string(l + 1));

    const int num_q = config.num_event_covariates();
    data.w = Eigen::MatrixXd::Zero(config.d, num_q);
    if (config.event_levels > 1) {
        std::vector<int> level(static_cast<std::size_t>(config.d));
        for (int j = 0; j < config.d; ++j) level[static_cast<std::size_t>(j)] = j % config.event_levels;
        std::shuffle(level.begin(), level.end(), rng);
        for (int j = 0; j < config.d; ++j) {
            const int v = level[static_cast<std::size_t>(j)];
            out.event_levels.push_back("L" + std::to_string(v + 1));
            if (v > 0) data.w(j, v - 1) = 1.0;
        }
        for (int q = 1; q < config.event_levels; ++q) data.event_covariate_names.push_back("category=L" + std::to_string(q + 1));
    }
    for (int i = 0; i < config.n; ++i) data.actor_names.push_back("actor" + std::to_string(i + 1));
    for (int j = 0; j < config.d; ++j) data.event_names.push_back("event" + std::to_string(j + 1));

    out.coefficients = config.coefficients
                           ? *config.coefficients
                           : separated_coefficients(config.num_clusters, config.num_actor_covariates, num_q,
                                                    config.intercept_separation, config.slope_separation);
    out.weights = config.weights;
    return out;
}

ParameterState as_state(const TrueCoefficients& c, const Eigen::VectorXd& weights, const std::vector<int>& z) {
    ParameterState s;
    s.mu = c.mu;
    s.beta = c.beta;
    s.gamma = c.gamma;
    s.alpha = weights;
    s.z = z;
    return s;
}

}  // namespace

SimulatedData generate_miro(const SimulationConfig& config) {
    config.validate();
    if (config.dgp != DataGeneratingProcess::miro_probit) throw ConfigurationError("generate_miro needs the miro dgp");
    Rng rng(config.seed);
    SimulatedData out = draw_covariates(config, rng);
    const ConfigurationLattice lattice(config.num_clusters, OverlapMode::full);
    const Eigen::VectorXd log_weights = config.weights.array().log();
    out.labels.resize(static_cast<std::size_t>(config.n));
    for (auto& h : out.labels) h = sample_log_categorical(log_weights, rng);

    const ParameterState truth = as_state(out.coefficients, out.weights, out.labels);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < config.n; ++i) {
        const HeirIndex h = out.labels[static_cast<std::size_t>(i)];
        for (int j = 0; j < config.d; ++j) {
            const double p = attendance_probability(h, i, j, truth, out.data, lattice);
            out.data.y(i, j) = unif(rng) < p ? 1 : 0;
        }
    }
    return out;
}

SimulatedData generate_logit_mixture(const SimulationConfig& config) {
    config.validate();
    if (config.dgp != DataGeneratingProcess::mixture_logit) {
        throw ConfigurationError("generate_logit_mixture needs the mixture_logit dgp");
    }
    Rng rng(config.seed);
    SimulatedData out = draw_covariates(config, rng);
    const Eigen::VectorXd log_weights = config.weights.array().log();
    out.labels.resize(static_cast<std::size_t>(config.n));
    for (auto& k : out.labels) k = sample_log_categorical(log_weights, rng);

    const ParameterState truth = as_state(out.coefficients, out.weights, out.labels);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < config.n; ++i) {
        const int k = out.labels[static_cast<std::size_t>(i)];
        for (int j = 0; j < config.d; ++j) {
            const double eta = linear_predictor(k, i, j, truth, out.data);
            const double p = 1.0 / (1.0 + std::exp(-eta));
            out.data.y(i, j) = unif(rng) < p ? 1 : 0;
        }
    }
    return out;
}

SimulatedData simulate(const SimulationConfig& config) {
    return config.dgp == DataGeneratingProcess::miro_probit ? generate_miro(config) : generate_logit_mixture(config);
}

double mer(const std::vector<HeirIndex>& truth, const std::vector<HeirIndex>& estimate,
           const ConfigurationLattice& lattice) {
    if (truth.size() != estimate.size()) throw ValidationError("label vectors differ in length");
    if (truth.empty()) return 0.0;
    std::size_t best = truth.size();
    for (const auto& perm : all_permutations(lattice.num_clusters())) {
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (permute_configuration(estimate[i], perm, lattice) != truth[i]) ++wrong;
        }
        best = std::min(best, wrong);
    }
    return static_cast<double>(best) / static_cast<double>(truth.size());
}

namespace {

std::vector<int> compact_labels(const std::vector<int>& labels, int& count) {
    std::map<int, int> index;
    for (int v : labels) index.emplace(v, 0);
    count = 0;
    for (auto& [value, k] : index) k = count++;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int v : labels) out.push_back(index[v]);
    return out;
}

// Minimum-cost assignment of rows to distinct columns (rows <= cols).
std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(rows + 1), 0.0), v(static_cast<std::size_t>(cols + 1), 0.0);
    std::vector<int> owner(static_cast<std::size_t>(cols + 1), 0), way(static_cast<std::size_t>(cols + 1), 0);
    for (int i = 1; i <= rows; ++i) {
        owner[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(cols + 1), inf);
        std::vector<bool> used(static_cast<std::size_t>(cols + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = owner[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= cols; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= cols; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(owner[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (owner[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            owner[static_cast<std::size_t>(j0)] = owner[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> assignment(static_cast<std::size_t>(rows), -1);
    for (int j = 1; j <= cols; ++j) {
        if (owner[static_cast<std::size_t>(j)] != 0) assignment[static_cast<std::size_t>(owner[static_cast<std::size_t>(j)] - 1)] = j - 1;
    }
    return assignment;
}

}  // namespace

double mer_matched(const std::vector<int>& truth, const std::vector<int>& estimate) {
    if (truth.size() != estimate.size()) throw ValidationError("label vectors differ in length");
    if (truth.empty()) return 0.0;
    int num_true = 0;
    int num_est = 0;
    const auto t = compact_labels(truth, num_true);
    const auto e = compact_labels(estimate, num_est);
    const int size = std::max(num_true, num_est);
    Eigen::MatrixXd agreement = Eigen::MatrixXd::Zero(size, size);
    for (std::size_t i = 0; i < t.size(); ++i) agreement(e[i], t[i]) += 1.0;
    const auto assignment = hungarian(-agreement);
    double matched = 0.0;
    for (int r = 0; r < size; ++r) matched += agreement(r, assignment[static_cast<std::size_t>(r)]);
    return 1.0 - matched / static_cast<double>(truth.size());
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw ValidationError("label vectors differ in length");
    int ra = 0;
    int rb = 0;
    const auto ca = compact_labels(a, ra);
    const auto cb = compact_labels(b, rb);
    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(ra, rb);
    for (std::size_t i = 0; i < ca.size(); ++i) table(ca[i], cb[i]) += 1.0;
    auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
    double index = 0.0;
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.cols(); ++j) index += pairs(table(i, j));
    }
    double sum_a = 0.0;
    for (Eigen::Index i = 0; i < table.rows(); ++i) sum_a += pairs(table.row(i).sum());
    double sum_b = 0.0;
    for (Eigen::Index j = 0; j < table.cols(); ++j) sum_b += pairs(table.col(j).sum());
    const double total = pairs(static_cast<double>(a.size()));
    if (total == 0) return 1.0;
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    // Both partitions trivial in the same way (all singletons or one block each).
    if (max_index == expected) return 1.0;
    return (index - expected) / (max_index - expected);
}

double random_benchmark_mer(const Eigen::VectorXd& weights) {
    return (weights.array() * (1.0 - weights.array())).sum();
}

}  // namespace miro
