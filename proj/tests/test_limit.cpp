#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "npd/corpus.hpp"
#include "npd/limit.hpp"
#include "support.hpp"

using namespace npd;

namespace {

std::vector<MonotoneCoupling> repeated(const MonotoneCoupling& f, std::size_t count) {
    return std::vector<MonotoneCoupling>(count, f);
}

struct ReparamCase {
    RandomMorsePair pair;
    PipelineReport report;
};

ReparamCase reparam_case(std::uint64_t seed, std::size_t n = 256) {
    RandomMorsePair pair = random_morse_pair(seed, 2, n, 0.0);
    PipelineOptions options;
    options.level = 5;
    PipelineReport report = run_limit_pipeline(pair.x, pair.y, options);
    return {std::move(pair), std::move(report)};
}

}  // namespace

TEST_CASE("dyadic grid") {
    const DenseGrid g = DenseGrid::dyadic(4);
    REQUIRE(g.thetas.size() == 16);
    CHECK(g.spacing() == doctest::Approx(two_pi / 16));
    for (std::size_t k = 1; k < 16; ++k) CHECK(g.thetas[k] - g.thetas[k - 1] == doctest::Approx(g.spacing()));
    // Nested across levels.
    const DenseGrid finer = DenseGrid::dyadic(5);
    for (std::size_t k = 0; k < 16; ++k) CHECK(finer.thetas[2 * k] == g.thetas[k]);
    CHECK_THROWS_AS(DenseGrid::dyadic(0), std::invalid_argument);
}

TEST_CASE("coupling map") {
    const SampledCurve x = testing::uniform({0, 1, 2, 3});
    SUBCASE("identity") {
        const CouplingMap f(MonotoneCoupling::identity(4), x, x);
        for (double t : {0.0, 0.3, 1.9, 4.0, 6.1}) CHECK(f(t) == doctest::Approx(t));
    }
    SUBCASE("shift") {
        const CouplingMap f(MonotoneCoupling::shift(4, 1), x, x);
        CHECK(f(0.0) == doctest::Approx(pi / 2));
        CHECK(f(3 * pi / 2 + 0.1) == doctest::Approx(0.1));
    }
    SUBCASE("vertical run maps to its midpoint") {
        const SampledCurve y = testing::uniform({0, 1, 2, 3, 4, 5, 6, 7});
        // Sample 0 of X is coupled with samples 0, 1, 2 of Y.
        std::vector<IndexPair> pairs{{0, 0}, {0, 1}, {0, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 6}, {3, 7}};
        const CouplingMap f(MonotoneCoupling(pairs, 4, 8, Orientation::preserving), x, y);
        CHECK(f(0.0) == doctest::Approx(y.theta(1)));
        // Between X samples 0 and 1 the map runs linearly from Y sample 2 to 3.
        CHECK(f(pi / 4) == doctest::Approx(0.5 * (y.theta(2) + y.theta(3))));
    }
    SUBCASE("reversing") {
        const CouplingMap f(MonotoneCoupling::shift(4, 0, Orientation::reversing), x, x);
        CHECK(f(0.0) == doctest::Approx(0.0));
        CHECK(f(pi / 2) == doctest::Approx(3 * pi / 2));
        CHECK(f(pi / 4) == doctest::Approx(7 * pi / 4));
    }
}

TEST_CASE("run_sequence_on_grid with a constant identity sequence") {
    const SampledCurve x = testing::uniform({0, 1, 0.5, 2, 0.2, 1.5, 0.1, 0.7});
    const auto seq = repeated(MonotoneCoupling::identity(8), 5);
    const RelationRho rho = run_sequence_on_grid(seq, x, x, DenseGrid::dyadic(4), 1e-3);
    REQUIRE(rho.forward.size() == 16);
    REQUIRE(rho.backward.size() == 16);
    CHECK(rho.window == 3);
    CHECK(rho.fully_converged());
    for (const auto& e : rho.forward) {
        CHECK(e.residual == 0.0);
        CHECK(angular_distance(e.source, e.image) < 1e-12);
    }
    for (const auto& e : rho.backward) CHECK(angular_distance(e.source, e.image) < 1e-12);
}

TEST_CASE("run_sequence_on_grid flags a non-Cauchy sequence") {
    const SampledCurve x = testing::uniform({0, 1, 0.5, 2, 0.2, 1.5, 0.1, 0.7});
    std::vector<MonotoneCoupling> seq;
    for (int k = 0; k < 8; ++k) {
        seq.push_back(k % 2 == 0 ? MonotoneCoupling::identity(8) : MonotoneCoupling::shift(8, 1));
    }
    const RelationRho rho = run_sequence_on_grid(seq, x, x, DenseGrid::dyadic(4), 1e-3);
    CHECK(rho.flagged_count() == 32);
    for (const auto& e : rho.forward) {
        CHECK_FALSE(e.converged);
        CHECK(e.residual == doctest::Approx(two_pi / 8));
    }
}

TEST_CASE("run_sequence_on_grid preconditions") {
    const SampledCurve x = testing::uniform({0, 1, 2, 3});
    const auto two = repeated(MonotoneCoupling::identity(4), 2);
    const auto three = repeated(MonotoneCoupling::identity(4), 3);
    CHECK_THROWS_AS(run_sequence_on_grid(two, x, x, DenseGrid::dyadic(3), 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(run_sequence_on_grid(three, x, x, DenseGrid::dyadic(3), 0.0), std::invalid_argument);
    std::vector<MonotoneCoupling> mixed = three;
    mixed[1] = MonotoneCoupling::shift(4, 0, Orientation::reversing);
    CHECK_THROWS_AS(run_sequence_on_grid(mixed, x, x, DenseGrid::dyadic(3), 1e-3), std::invalid_argument);
}

TEST_CASE("lemma checks on the identity relation") {
    const SampledCurve x = testing::uniform({0, 1, 0.5, 2, 0.2, 1.5, 0.1, 0.7});
    const auto seq = repeated(MonotoneCoupling::identity(8), 4);
    const DenseGrid grid = DenseGrid::dyadic(5);
    const RelationRho rho = run_sequence_on_grid(seq, x, x, grid, 1e-3);
    const LemmaReport report = check_lemma_properties(rho, x, x, default_eta_grid(grid));
    REQUIRE(report.property_i_modulus.size() == 4);
    for (const auto& row : report.property_i_modulus) {
        CHECK(row.forward_eps == doctest::Approx(row.eta));
        CHECK(row.backward_eps == doctest::Approx(row.eta));
    }
    CHECK(report.property_ii_ok);
    CHECK(report.property_iii_ok);
    CHECK(report.failures.empty());
    CHECK(report.all_ok());
    CHECK(report.max_value_gap < 1e-12);
}

TEST_CASE("limit pipeline on a reparametrized curve") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const ReparamCase c = reparam_case(seed);
        const RelationRho& rho = c.report.rho;
        CHECK(rho.fully_converged());

        // Forward limit approximates the inverse reparametrization.
        for (const auto& e : rho.forward) {
            CHECK(angular_distance(e.image, c.pair.reparam.inverse(e.source)) <= 2.0 * c.pair.x.mesh());
        }

        const double slack = sampling_slack(c.pair.x, c.pair.y);
        const LemmaReport& lemma = c.report.lemma;
        CHECK(lemma.all_ok());
        CHECK(lemma.failures.empty());
        CHECK(lemma.max_value_gap <= lemma.value_gap_bound);
        // Modulus table within the Lipschitz bound of the known map.
        const double lip = std::max(c.pair.reparam.lipschitz(), c.pair.reparam.inverse_lipschitz());
        const double mesh = std::max(c.pair.x.mesh(), c.pair.y.mesh());
        for (const auto& row : lemma.property_i_modulus) {
            CHECK(row.forward_eps <= lip * row.eta + 4.0 * mesh);
            CHECK(row.backward_eps <= lip * row.eta + 4.0 * mesh);
        }

        const ExtensionReport& ext = c.report.extension;
        REQUIRE(ext.map);
        CHECK(ext.succeeded());
        CHECK(ext.optimality_residual <= slack + rho.tolerance);
        CHECK(ext.table.size() == c.pair.x.size());
        for (std::size_t k = 0; k < 64; ++k) {
            const double t = two_pi * (static_cast<double>(k) + 0.37) / 64.0;
            CHECK(angular_distance((*ext.map)(t), c.pair.reparam.inverse(t)) <= 2.0 * c.pair.x.mesh());
        }
    }
}

TEST_CASE("forward and backward extensions compose to the identity") {
    const ReparamCase c = reparam_case(4);
    const RelationRho& rho = c.report.rho;
    const ExtensionAttempt forward = monotone_extension(rho.forward, rho.orientation);
    const ExtensionAttempt backward = monotone_extension(rho.backward, rho.orientation);
    REQUIRE(forward.map);
    REQUIRE(backward.map);
    for (double t : rho.grid.thetas) {
        CHECK(angular_distance((*backward.map)((*forward.map)(t)), t) <= 2.0 * rho.grid.spacing());
    }
}

TEST_CASE("deeper grids keep the modulus estimate stable") {
    const RandomMorsePair pair = random_morse_pair(5, 2, 256, 0.0);
    const DistanceResult d = pseudo_distance(pair.x, pair.y);
    const auto seq = approximating_sequence(pair.x, pair.y, harmonic_schedule(32), d);
    const DenseGrid coarse = DenseGrid::dyadic(5);
    const DenseGrid fine = DenseGrid::dyadic(6);
    const auto etas = default_eta_grid(coarse);
    const LemmaReport a = check_lemma_properties(run_sequence_on_grid(seq, pair.x, pair.y, coarse, 1e-3),
                                                 pair.x, pair.y, etas);
    const LemmaReport b = check_lemma_properties(run_sequence_on_grid(seq, pair.x, pair.y, fine, 1e-3),
                                                 pair.x, pair.y, etas);
    const double slack = sampling_slack(pair.x, pair.y);
    for (std::size_t k = 0; k < etas.size(); ++k) {
        CHECK(b.property_i_modulus[k].forward_eps <= a.property_i_modulus[k].forward_eps + slack);
        CHECK(b.property_i_modulus[k].backward_eps <= a.property_i_modulus[k].backward_eps + slack);
    }
}

TEST_CASE("plateau collapse breaks backward single-valuedness and the extension") {
    const CurvePair pair = example3_pair(512);
    const PipelineReport report = run_limit_pipeline(pair.x, pair.y);
    CHECK(report.rho.fully_converged());
    CHECK(report.lemma.property_ii_ok);
    CHECK_FALSE(report.lemma.property_iii_backward_ok);
    CHECK_FALSE(report.lemma.all_ok());
    CHECK_FALSE(report.lemma.failures.empty());
    bool backward_failure = false;
    for (const auto& f : report.lemma.failures) backward_failure = backward_failure || f.direction == "backward";
    CHECK(backward_failure);

    const ExtensionReport& ext = report.extension;
    CHECK_FALSE(ext.extended);
    CHECK_FALSE(ext.map);
    REQUIRE(ext.violation);
    // The refused interval lies over the plateau.
    const auto [from, to] = example3_plateau_arc();
    CHECK(ext.violation->first >= from - 2.0 * report.rho.grid.spacing());
    CHECK(ext.violation->second <= to + 2.0 * report.rho.grid.spacing());
    CHECK(ext.violation->second > ext.violation->first);
}

TEST_CASE("monotone_extension refuses stalled or backward knots") {
    std::vector<RhoEntry> entries;
    for (int k = 0; k < 8; ++k) {
        const double t = two_pi * k / 8.0;
        entries.push_back({t, t, 0.0, true});
    }
    CHECK(monotone_extension(entries, Orientation::preserving).map);
    CHECK_FALSE(monotone_extension(entries, Orientation::reversing).map);

    entries[3].image = entries[2].image;
    entries[4].image = entries[2].image;
    const ExtensionAttempt stalled = monotone_extension(entries, Orientation::preserving);
    CHECK_FALSE(stalled.map);
    REQUIRE(stalled.violation);
    CHECK(stalled.violation->first == doctest::Approx(entries[2].source));
    CHECK(stalled.violation->second == doctest::Approx(entries[4].source));
}

TEST_CASE("identity extension has zero residual") {
    const SampledCurve x = testing::uniform({0, 1, 0.5, 2, 0.2, 1.5, 0.1, 0.7});
    const auto seq = repeated(MonotoneCoupling::identity(8), 4);
    const RelationRho rho = run_sequence_on_grid(seq, x, x, DenseGrid::dyadic(4), 1e-3);
    const ExtensionReport ext = extend_and_verify_optimal(rho, x, x);
    REQUIRE(ext.map);
    CHECK(ext.succeeded());
    CHECK(ext.optimality_residual < 1e-12);
    for (double t : {0.1, 1.0, 3.3, 6.2}) CHECK((*ext.map)(t) == doctest::Approx(t));
}
