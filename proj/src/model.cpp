#include "miro/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace miro {

namespace {

template <typename Derived>
bool same_matrix(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

}  // namespace

bool operator==(const TwoModeDataset& a, const TwoModeDataset& b) {
    return same_matrix(a.y, b.y) && same_matrix(a.x, b.x) && same_matrix(a.w, b.w) &&
           a.actor_names == b.actor_names && a.event_names == b.event_names &&
           a.actor_covariate_names == b.actor_covariate_names &&
           a.event_covariate_names == b.event_covariate_names;
}

bool operator==(const ParameterState& a, const ParameterState& b) {
    return same_matrix(a.mu, b.mu) && same_matrix(a.beta, b.beta) && same_matrix(a.gamma, b.gamma) &&
           same_matrix(a.alpha, b.alpha) && a.z == b.z;
}

std::vector<std::string> validate_dataset(const TwoModeDataset& data) {
    std::vector<std::string> issues;
    const auto n = data.y.rows();
    const auto d = data.y.cols();
    if (n < 1) issues.emplace_back("empty dataset: no actors");
    if (d < 1) issues.emplace_back("empty dataset: no events");
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const int v = data.y(i, j);
            if (v != 0 && v != 1) {
                std::ostringstream msg;
                msg << "non-binary entry at (" << i + 1 << "," << j + 1 << "): " << v;
                issues.push_back(msg.str());
            }
        }
    }
    if (data.x.rows() != n && !(data.x.size() == 0 && data.x.cols() == 0)) {
        std::ostringstream msg;
        msg << "actor covariate row count " << data.x.rows() << " does not match n=" << n;
        issues.push_back(msg.str());
    }
    if (data.w.rows() != d && !(data.w.size() == 0 && data.w.cols() == 0)) {
        std::ostringstream msg;
        msg << "event covariate row count " << data.w.rows() << " does not match d=" << d;
        issues.push_back(msg.str());
    }
    for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
        for (Eigen::Index l = 0; l < data.x.cols(); ++l) {
            if (!std::isfinite(data.x(i, l))) {
                std::ostringstream msg;
                msg << "non-finite actor covariate at (" << i + 1 << "," << l + 1 << ")";
                issues.push_back(msg.str());
            }
        }
    }
    for (Eigen::Index j = 0; j < data.w.rows(); ++j) {
        for (Eigen::Index q = 0; q < data.w.cols(); ++q) {
            if (!std::isfinite(data.w(j, q))) {
                std::ostringstream msg;
                msg << "non-finite event covariate at (" << j + 1 << "," << q + 1 << ")";
                issues.push_back(msg.str());
            }
        }
    }
    auto check_names = [&](const std::vector<std::string>& names, Eigen::Index expected, const char* what) {
        if (!names.empty() && static_cast<Eigen::Index>(names.size()) != expected) {
            std::ostringstream msg;
            msg << what << " count " << names.size() << " does not match " << expected;
            issues.push_back(msg.str());
        }
    };
    check_names(data.actor_names, n, "actor name");
    check_names(data.event_names, d, "event name");
    check_names(data.actor_covariate_names, data.x.cols(), "actor covariate name");
    check_names(data.event_covariate_names, data.w.cols(), "event covariate name");
    return issues;
}

void require_valid(const TwoModeDataset& data) {
    const auto issues = validate_dataset(data);
    if (issues.empty()) return;
    std::ostringstream msg;
    msg << "invalid dataset:";
    const std::size_t shown = std::min<std::size_t>(issues.size(), 5);
    for (std::size_t k = 0; k < shown; ++k) msg << "\n  " << issues[k];
    if (issues.size() > shown) msg << "\n  ... " << issues.size() - shown << " more";
    throw ValidationError(msg.str());
}

TwoModeDataset with_default_names(TwoModeDataset data) {
    auto fill = [](std::vector<std::string>& names, Eigen::Index count, const char* prefix) {
        if (static_cast<Eigen::Index>(names.size()) == count) return;
        names.clear();
        for (Eigen::Index k = 0; k < count; ++k) names.push_back(prefix + std::to_string(k + 1));
    };
    if (data.x.rows() == 0) data.x.resize(data.y.rows(), 0);
    if (data.w.rows() == 0) data.w.resize(data.y.cols(), 0);
    fill(data.actor_names, data.y.rows(), "a");
    fill(data.event_names, data.y.cols(), "e");
    fill(data.actor_covariate_names, data.x.cols(), "x");
    fill(data.event_covariate_names, data.w.cols(), "w");
    return data;
}

TwoModeDataset with_event_dummies(TwoModeDataset data) {
    data = with_default_names(std::move(data));
    const int d = data.d();
    data.w = Eigen::MatrixXd::Zero(d, std::max(d - 1, 0));
    data.event_covariate_names.clear();
    for (int j = 1; j < d; ++j) {
        data.w(j, j - 1) = 1.0;
        data.event_covariate_names.push_back("event=" + data.event_names[static_cast<std::size_t>(j)]);
    }
    return data;
}

ConfigurationLattice::ConfigurationLattice(int num_clusters, OverlapMode mode)
    : num_clusters_(num_clusters), mode_(mode) {
    if (num_clusters < 1 || num_clusters > kMaxClusters) {
        throw ConfigurationError("number of clusters must lie in 1.." + std::to_string(kMaxClusters) +
                                 ", got " + std::to_string(num_clusters));
    }
    const ConfigMask count = ConfigMask{1} << num_clusters;
    masks_.resize(count);
    std::iota(masks_.begin(), masks_.end(), ConfigMask{0});
    // Within one size, lexicographic order of the member index sets; for masks this
    // means the reversed bit pattern read from cluster 0 compares descending.
    auto reversed = [num_clusters](ConfigMask m) {
        ConfigMask r = 0;
        for (int k = 0; k < num_clusters; ++k) {
            if ((m >> k) & 1u) r |= ConfigMask{1} << (num_clusters - 1 - k);
        }
        return r;
    };
    std::sort(masks_.begin(), masks_.end(), [&](ConfigMask a, ConfigMask b) {
        const int pa = std::popcount(a);
        const int pb = std::popcount(b);
        if (pa != pb) return pa < pb;
        return reversed(a) > reversed(b);
    });
    index_by_mask_.assign(count, -1);
    allowed_.assign(count, true);
    for (HeirIndex h = 0; h < static_cast<HeirIndex>(count); ++h) {
        index_by_mask_[masks_[static_cast<std::size_t>(h)]] = h;
        if (mode == OverlapMode::non_overlapping) {
            allowed_[static_cast<std::size_t>(h)] = std::popcount(masks_[static_cast<std::size_t>(h)]) == 1;
        }
        if (allowed_[static_cast<std::size_t>(h)]) allowed_indices_.push_back(h);
    }
}

int ConfigurationLattice::size(HeirIndex h) const { return std::popcount(mask(h)); }

HeirIndex ConfigurationLattice::index_of(ConfigMask m) const {
    if (m >= index_by_mask_.size()) throw ConfigurationError("configuration mask out of range");
    return index_by_mask_[m];
}

HeirIndex ConfigurationLattice::index_of(const std::vector<int>& z_primary) const {
    if (static_cast<int>(z_primary.size()) != num_clusters_) {
        throw ConfigurationError("primary allocation vector has wrong length");
    }
    ConfigMask m = 0;
    for (int k = 0; k < num_clusters_; ++k) {
        if (z_primary[static_cast<std::size_t>(k)] != 0) m |= ConfigMask{1} << k;
    }
    return index_by_mask_[m];
}

std::vector<int> ConfigurationLattice::row(HeirIndex h) const {
    std::vector<int> out(static_cast<std::size_t>(num_clusters_));
    for (int k = 0; k < num_clusters_; ++k) out[static_cast<std::size_t>(k)] = contains(h, k) ? 1 : 0;
    return out;
}

Eigen::MatrixXi ConfigurationLattice::u_matrix() const {
    Eigen::MatrixXi u(num_configurations(), num_clusters_);
    for (HeirIndex h = 0; h < num_configurations(); ++h) {
        for (int k = 0; k < num_clusters_; ++k) u(h, k) = contains(h, k) ? 1 : 0;
    }
    return u;
}

std::string ConfigurationLattice::bit_string(HeirIndex h) const {
    std::string out;
    for (int k = 0; k < num_clusters_; ++k) out.push_back(contains(h, k) ? '1' : '0');
    return out;
}

HeirIndex ConfigurationLattice::parse_bit_string(const std::string& bits) const {
    if (static_cast<int>(bits.size()) != num_clusters_) {
        throw ValidationError("configuration '" + bits + "' does not have " + std::to_string(num_clusters_) +
                              " digits");
    }
    ConfigMask m = 0;
    for (int k = 0; k < num_clusters_; ++k) {
        const char c = bits[static_cast<std::size_t>(k)];
        if (c != '0' && c != '1') throw ValidationError("configuration '" + bits + "' is not a bit string");
        if (c == '1') m |= ConfigMask{1} << k;
    }
    return index_by_mask_[m];
}

ConfigurationLattice build_lattice(int num_clusters, OverlapMode mode) {
    return ConfigurationLattice(num_clusters, mode);
}

void PriorSpec::validate(const ConfigurationLattice& lattice) const {
    if (!(sigma2_mu > 0) || !(sigma2_beta > 0) || !(sigma2_gamma > 0)) {
        throw ConfigurationError("prior variances must be positive");
    }
    if (dirichlet.size() != lattice.num_configurations()) {
        throw ConfigurationError("Dirichlet prior needs one concentration per configuration");
    }
    if (!(dirichlet.array() > 0).all()) throw ConfigurationError("Dirichlet concentrations must be positive");
}

Eigen::VectorXd default_dirichlet(const ConfigurationLattice& lattice) {
    const int k_star = lattice.num_configurations();
    Eigen::VectorXd a(k_star);
    for (HeirIndex h = 0; h < k_star; ++h) a(h) = lattice.size(h) == 1 ? k_star : 1.0;
    return a;
}

PriorSpec default_prior(const ConfigurationLattice& lattice) {
    PriorSpec prior;
    prior.dirichlet = default_dirichlet(lattice);
    return prior;
}

ParameterState zero_state(int num_clusters, int num_actor_covariates, int num_event_covariates,
                          int num_units, int num_configurations) {
    ParameterState s;
    s.mu = Eigen::VectorXd::Zero(num_clusters);
    s.beta = Eigen::MatrixXd::Zero(num_clusters, num_actor_covariates);
    s.gamma = Eigen::MatrixXd::Zero(num_clusters, num_event_covariates);
    s.alpha = Eigen::VectorXd::Constant(num_configurations, 1.0 / num_configurations);
    s.z.assign(static_cast<std::size_t>(num_units), 0);
    return s;
}

std::vector<std::string> check_state(const ParameterState& state, const ConfigurationLattice& lattice) {
    std::vector<std::string> issues;
    if (state.mu.size() != lattice.num_clusters() || state.beta.rows() != lattice.num_clusters() ||
        state.gamma.rows() != lattice.num_clusters()) {
        issues.emplace_back("coefficient dimensions do not match K");
    }
    if (state.alpha.size() != lattice.num_configurations()) {
        issues.emplace_back("weight vector does not have K* entries");
    } else {
        if ((state.alpha.array() < 0).any()) issues.emplace_back("negative weight");
        if (std::abs(state.alpha.sum() - 1.0) > 1e-12) issues.emplace_back("weights do not sum to one");
    }
    for (std::size_t i = 0; i < state.z.size(); ++i) {
        const HeirIndex h = state.z[i];
        if (h < 0 || h >= lattice.num_configurations() || !lattice.allowed(h)) {
            issues.push_back("unit " + std::to_string(i + 1) + " allocated to a disallowed configuration");
        }
    }
    return issues;
}

HeirIndex permute_configuration(HeirIndex h, const std::vector<int>& perm, const ConfigurationLattice& lattice) {
    const ConfigMask old_mask = lattice.mask(h);
    ConfigMask new_mask = 0;
    for (int k = 0; k < lattice.num_clusters(); ++k) {
        if ((old_mask >> k) & 1u) new_mask |= ConfigMask{1} << perm[static_cast<std::size_t>(k)];
    }
    return lattice.index_of(new_mask);
}

ParameterState permute_clusters(const ParameterState& state, const std::vector<int>& perm,
                                const ConfigurationLattice& lattice) {
    const int num_clusters = state.num_clusters();
    if (static_cast<int>(perm.size()) != num_clusters) throw ConfigurationError("permutation has wrong length");
    ParameterState out = state;
    for (int k = 0; k < num_clusters; ++k) {
        const int target = perm[static_cast<std::size_t>(k)];
        out.mu(target) = state.mu(k);
        out.beta.row(target) = state.beta.row(k);
        out.gamma.row(target) = state.gamma.row(k);
    }
    std::vector<HeirIndex> config_map(static_cast<std::size_t>(lattice.num_configurations()));
    for (HeirIndex h = 0; h < lattice.num_configurations(); ++h) {
        config_map[static_cast<std::size_t>(h)] = permute_configuration(h, perm, lattice);
        out.alpha(config_map[static_cast<std::size_t>(h)]) = state.alpha(h);
    }
    for (auto& h : out.z) h = config_map[static_cast<std::size_t>(h)];
    return out;
}

}  // namespace miro
