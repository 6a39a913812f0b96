#include "doctest.h"

#include <map>

#include "miro/design.hpp"
#include "miro/errors.hpp"
#include "miro/overlap.hpp"
#include "support.hpp"

using namespace miro;

TEST_CASE("stacking is column-major and invertible") {
    Eigen::MatrixXi y(2, 2);
    y << 1, 0, 0, 1;
    const StackedResponse s = stack_response(y);
    CHECK(s.values == (Eigen::VectorXd(4) << 1, 0, 0, 1).finished());
    CHECK(s.rows[1].actor == 1);
    CHECK(s.rows[1].event == 0);
    CHECK(unstack_response(s, 2, 2) == y);

    testing::Gen g(1);
    const auto data = testing::random_dataset(g, 9, 26, 0, 0);
    const auto big = stack_response(data.y);
    CHECK(big.values.size() == 234);
    CHECK(unstack_response(big, 9, 26) == data.y);
}

TEST_CASE("flatten layout") {
    ParameterState p = zero_state(2, 1, 0, 1, 4);
    p.mu << 1, 3;
    p.beta << 2, 4;
    CHECK(flatten_parameters(p) == (Eigen::VectorXd(4) << 1, 2, 3, 4).finished());
    CHECK(layout_for(zero_state(2, 0, 6, 1, 4)).size() == 14);

    testing::Gen g(4);
    for (int trial = 0; trial < 100; ++trial) {
        const ConfigurationLattice lattice(testing::uniform_int(g, 1, 4), OverlapMode::full);
        const auto data = testing::random_dataset(g, 2, 2, testing::uniform_int(g, 0, 3), testing::uniform_int(g, 0, 3));
        const auto s = testing::random_state(g, data, lattice);
        ParameterState back = s;
        back.mu.setZero();
        back.beta.setZero();
        back.gamma.setZero();
        unflatten_parameters(flatten_parameters(s), back);
        CHECK(back == s);
        const CoefficientLayout layout = layout_for(s);
        for (int k = 0; k < lattice.num_clusters(); ++k) {
            CHECK(layout.role(layout.intercept_column(k)) == ColumnRole::intercept);
            for (int l = 0; l < data.num_actor_covariates(); ++l) CHECK(layout.role(layout.actor_column(k, l)) == ColumnRole::actor);
            for (int q = 0; q < data.num_event_covariates(); ++q) CHECK(layout.role(layout.event_column(k, q)) == ColumnRole::event);
        }
    }
    ParameterState p2 = zero_state(2, 1, 0, 1, 4);
    CHECK_THROWS(unflatten_parameters(Eigen::VectorXd::Zero(5), p2));
}

TEST_CASE("design rows carry configuration weights") {
    const ConfigurationLattice lattice(2, OverlapMode::full);
    TwoModeDataset data;
    data.y = Eigen::MatrixXi::Ones(3, 2);
    data.x = (Eigen::MatrixXd(3, 1) << 0.5, -1.0, 2.0).finished();
    data.w = (Eigen::MatrixXd(2, 1) << 1.0, 3.0).finished();
    const StackedDesign design = build_design(data, {3, 1, 0}, lattice);
    REQUIRE(design.a.rows() == 4);
    REQUIRE(design.a.cols() == 6);
    // unit 1 is in (1,0): plain per-cluster row
    const Eigen::RowVectorXd single = design.a.row(0);
    CHECK(design.row_map[0].actor == 1);
    CHECK(single == (Eigen::RowVectorXd(6) << 1, -1.0, 0, 0, 1.0, 0).finished());
    // unit 0 is in (1,1): halves on both blocks
    CHECK(design.row_map[2].actor == 0);
    CHECK(design.row_map[3].event == 1);
    CHECK(design.a.row(3) == (Eigen::RowVectorXd(6) << 0.5, 0.25, 0.5, 0.25, 1.5, 1.5).finished());
    CHECK(design.y_tilde.size() == 4);

    CHECK_THROWS_AS(build_design(data, {0, 0, 0}, lattice), DegenerateDesign);
}

TEST_CASE("design predictor equals the mean overlap (property)") {
    testing::Gen g(12);
    for (int trial = 0; trial < 200; ++trial) {
        const ConfigurationLattice lattice(testing::uniform_int(g, 1, 4), OverlapMode::full);
        const auto data = testing::random_dataset(g, testing::uniform_int(g, 1, 6), testing::uniform_int(g, 1, 5),
                                                  testing::uniform_int(g, 0, 3), testing::uniform_int(g, 0, 3));
        auto s = testing::random_state(g, data, lattice);
        s.z[0] = testing::uniform_int(g, 1, lattice.num_configurations() - 1);
        const StackedDesign design = build_design(data, s.z, lattice);
        int nonempty = 0;
        for (auto h : s.z) nonempty += h != 0;
        CHECK(design.a.rows() == nonempty * data.d());
        const Eigen::VectorXd fitted = design.a * flatten_parameters(s);
        for (Eigen::Index r = 0; r < design.a.rows(); ++r) {
            const CellRef c = design.row_map[static_cast<std::size_t>(r)];
            CHECK(c.config == s.z[static_cast<std::size_t>(c.actor)]);
            CHECK(design.y_tilde(r) == data.y(c.actor, c.event));
            const double direct = overlap_predictor(lattice.row(c.config), c.actor, c.event, s, data, OverlapKind::mean);
            CHECK(std::abs(fitted(r) - direct) < 1e-10);
        }
    }
}

TEST_CASE("moving one unit changes only its rows") {
    testing::Gen g(13);
    for (int trial = 0; trial < 50; ++trial) {
        const ConfigurationLattice lattice(3, OverlapMode::full);
        const auto data = testing::random_dataset(g, 5, 3, 1, 1);
        auto s = testing::random_state(g, data, lattice);
        for (auto& z : s.z) z = testing::uniform_int(g, 1, 7);
        auto moved = s.z;
        const int unit = testing::uniform_int(g, 0, 4);
        moved[static_cast<std::size_t>(unit)] = 1 + (moved[static_cast<std::size_t>(unit)] % 7);
        const auto a = build_design(data, s.z, lattice);
        const auto b = build_design(data, moved, lattice);
        auto rows_by_cell = [](const StackedDesign& d) {
            std::map<std::pair<int, int>, Eigen::RowVectorXd> out;
            for (std::size_t r = 0; r < d.row_map.size(); ++r)
                out[{d.row_map[r].actor, d.row_map[r].event}] = d.a.row(static_cast<Eigen::Index>(r));
            return out;
        };
        const auto ra = rows_by_cell(a), rb = rows_by_cell(b);
        for (const auto& [cell, row] : ra) {
            if (cell.first == unit) CHECK(row != rb.at(cell));
            else CHECK(row == rb.at(cell));
        }
    }
}
