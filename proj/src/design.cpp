#include "miro/design.hpp"

namespace miro {

StackedResponse stack_response(const Eigen::MatrixXi& y) {
    StackedResponse out;
    out.values.resize(y.size());
    out.rows.reserve(static_cast<std::size_t>(y.size()));
    Eigen::Index r = 0;
    for (int j = 0; j < y.cols(); ++j) {
        for (int i = 0; i < y.rows(); ++i) {
            out.values(r++) = y(i, j);
            out.rows.push_back({i, j, 0});
        }
    }
    return out;
}

Eigen::MatrixXi unstack_response(const StackedResponse& stacked, int n, int d) {
    Eigen::MatrixXi y = Eigen::MatrixXi::Zero(n, d);
    for (std::size_t r = 0; r < stacked.rows.size(); ++r) {
        y(stacked.rows[r].actor, stacked.rows[r].event) = static_cast<int>(stacked.values(static_cast<Eigen::Index>(r)));
    }
    return y;
}

ColumnRole CoefficientLayout::role(int column) const {
    const int block = 1 + num_actor_covariates;
    if (column >= num_clusters * block) return ColumnRole::event;
    return column % block == 0 ? ColumnRole::intercept : ColumnRole::actor;
}

CoefficientLayout layout_for(const ParameterState& params) {
    return {params.num_clusters(), static_cast<int>(params.beta.cols()), static_cast<int>(params.gamma.cols())};
}

Eigen::VectorXd flatten_parameters(const ParameterState& params) {
    const CoefficientLayout layout = layout_for(params);
    Eigen::VectorXd theta(layout.size());
    for (int k = 0; k < layout.num_clusters; ++k) {
        theta(layout.intercept_column(k)) = params.mu(k);
        for (int l = 0; l < layout.num_actor_covariates; ++l) theta(layout.actor_column(k, l)) = params.beta(k, l);
        for (int q = 0; q < layout.num_event_covariates; ++q) theta(layout.event_column(k, q)) = params.gamma(k, q);
    }
    return theta;
}

void unflatten_parameters(const Eigen::VectorXd& theta, ParameterState& params) {
    const CoefficientLayout layout = layout_for(params);
    if (theta.size() != layout.size()) throw ConfigurationError("flattened coefficient vector has wrong length");
    for (int k = 0; k < layout.num_clusters; ++k) {
        params.mu(k) = theta(layout.intercept_column(k));
        for (int l = 0; l < layout.num_actor_covariates; ++l) params.beta(k, l) = theta(layout.actor_column(k, l));
        for (int q = 0; q < layout.num_event_covariates; ++q) params.gamma(k, q) = theta(layout.event_column(k, q));
    }
}

StackedDesign build_design(const TwoModeDataset& data, const std::vector<HeirIndex>& z,
                           const ConfigurationLattice& lattice) {
    const int n = data.n();
    const int d = data.d();
    if (static_cast<int>(z.size()) != n) throw ConfigurationError("allocation vector length differs from n");
    const int num_l = data.num_actor_covariates();
    const int num_q = data.num_event_covariates();
    const int num_k = lattice.num_clusters();

    std::vector<std::vector<int>> members(static_cast<std::size_t>(lattice.num_configurations()));
    for (int i = 0; i < n; ++i) {
        const HeirIndex h = z[static_cast<std::size_t>(i)];
        if (h < 0 || h >= lattice.num_configurations()) throw ConfigurationError("allocation out of range");
        if (lattice.mask(h) != 0) members[static_cast<std::size_t>(h)].push_back(i);
    }
    Eigen::Index num_rows = 0;
    for (const auto& m : members) num_rows += static_cast<Eigen::Index>(m.size()) * d;
    if (num_rows == 0) throw DegenerateDesign("every unit is in the empty configuration; no regression rows");

    StackedDesign out;
    out.layout = {num_k, num_l, num_q};
    out.a = Eigen::MatrixXd::Zero(num_rows, out.layout.size());
    out.y_tilde.resize(num_rows);
    out.row_map.reserve(static_cast<std::size_t>(num_rows));

    Eigen::Index r = 0;
    for (HeirIndex h = 0; h < lattice.num_configurations(); ++h) {
        const auto& units = members[static_cast<std::size_t>(h)];
        if (units.empty()) continue;
        const double weight = 1.0 / lattice.size(h);
        for (int i : units) {
            for (int j = 0; j < d; ++j, ++r) {
                for (int k = 0; k < num_k; ++k) {
                    if (!lattice.contains(h, k)) continue;
                    out.a(r, out.layout.intercept_column(k)) = weight;
                    for (int l = 0; l < num_l; ++l) out.a(r, out.layout.actor_column(k, l)) = weight * data.x(i, l);
                    for (int q = 0; q < num_q; ++q) out.a(r, out.layout.event_column(k, q)) = weight * data.w(j, q);
                }
                out.y_tilde(r) = data.y(i, j);
                out.row_map.push_back({i, j, h});
            }
        }
    }
    return out;
}

}  // namespace miro
