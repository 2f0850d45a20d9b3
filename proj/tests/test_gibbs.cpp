#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rcpotts/gibbs.hpp"
#include "rcpotts/graph.hpp"
#include "rcpotts/phase.hpp"
#include "rcpotts/rng.hpp"

using namespace rcpotts;
using doctest::Approx;

TEST_SUITE("gibbs") {

TEST_CASE("spin configs count classes and monochromatic edges") {
    const Multigraph tri = testutil::load_fixture("triangle");
    const SpinConfig same = make_spin_config(tri, {1, 1, 1}, 3);
    CHECK(same.mono == 3);
    CHECK(same.class_count[1] == 3);
    CHECK(potts_log_weight(same, 0.8) == Approx(3 * 0.8));

    const SpinConfig proper = make_spin_config(tri, {1, 2, 3}, 3);
    CHECK(proper.mono == 0);
    CHECK(potts_log_weight(proper, 0.8) == 0.0);

    const SpinConfig mixed = make_spin_config(tri, {1, 1, 2}, 3);
    CHECK(mixed.mono == 1);

    // self-loops are monochromatic regardless of colour; parallels count twice
    const Multigraph loop = testutil::load_fixture("self_loop");
    CHECK(make_spin_config(loop, std::vector<std::int32_t>(loop.n(), 2), 3).mono >= 1);
    const Multigraph par = testutil::load_fixture("parallel2");
    CHECK(make_spin_config(par, {1, 1}, 2).mono == 2);

    CHECK_THROWS_AS(make_spin_config(tri, {1, 1}, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_spin_config(tri, {1, 1, 4}, 3), std::invalid_argument);
}

TEST_CASE("incremental recolouring matches recounting from scratch") {
    const Multigraph g = testutil::load_fixture("petersen8");
    RngStream rng(11);
    const int q = 4;
    std::vector<std::int32_t> colour(static_cast<std::size_t>(g.n()), 1);
    SpinConfig spin = make_spin_config(g, colour, q);
    for (int step = 0; step < 2000; ++step) {
        const int v = static_cast<int>(rng.uniform_int(g.n()));
        const int c = 1 + static_cast<int>(rng.uniform_int(q));
        recolour(g, spin, v, c);
        colour[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(c);
        if (step % 97 == 0) {
            const SpinConfig fresh = make_spin_config(g, colour, q);
            REQUIRE(spin.mono == fresh.mono);
            REQUIRE(spin.class_count == fresh.class_count);
        }
    }
}

TEST_CASE("colour statistics normalize to fractions that sum correctly") {
    const Multigraph tri = testutil::load_fixture("triangle");
    const SpinConfig spin = make_spin_config(tri, {1, 1, 2}, 3);
    const ColourStats st = colour_stats(tri, spin);
    CHECK(st.half_edges == 6);
    CHECK(st.nu[1] == Approx(2.0 / 3));
    CHECK(st.nu[2] == Approx(1.0 / 3));
    CHECK(st.pair_count[1][1] == 2);  // edge 0-1, one half-edge each way
    CHECK(st.pair_count[1][2] == 2);
    CHECK(st.pair_count[2][1] == 2);
    CHECK(st.rho[1][1] == Approx(2.0 / 6));

    // 2-regular fixture: row sums of rho equal nu
    for (int i = 1; i <= 3; ++i) {
        double row = 0;
        for (int j = 1; j <= 3; ++j) row += st.rho[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        CHECK(row == Approx(st.nu[static_cast<std::size_t>(i)]));
    }

    // self-loop adds 2 to its diagonal pair count
    const Multigraph loop = testutil::load_fixture("self_loop");
    const SpinConfig lspin = make_spin_config(loop, std::vector<std::int32_t>(loop.n(), 1), 2);
    const ColourStats lst = colour_stats(loop, lspin);
    CHECK(lst.pair_count[1][1] == lst.half_edges);
}

TEST_CASE("phase membership labels the model vectors and rejects fat tolerances") {
    const PhaseProfile pr = phase_profile(3, 3, beta_c(3, 3));
    const PhaseMembership dis = phase_membership(nu_dis_vector(3), pr, 0.05);
    CHECK(dis.label == PhaseLabel::Disordered);
    CHECK(dis.dis_distance == Approx(0.0));

    const auto nu_ord = nu_ord_vector(pr);
    const PhaseMembership ord = phase_membership(nu_ord, pr, 0.05);
    CHECK(ord.label == PhaseLabel::OrderedDominant);
    CHECK(ord.dominant_colour == 1);
    CHECK(ord.ord_distance == Approx(0.0).epsilon(1e-12));

    // relabelled ordered vector: dominant colour follows the permutation
    std::vector<double> swapped{nu_ord[1], nu_ord[2], nu_ord[0]};
    const PhaseMembership perm = phase_membership(swapped, pr, 0.05);
    CHECK(perm.label == PhaseLabel::OrderedDominant);
    CHECK(perm.dominant_colour == 3);

    const PhaseMembership nei = phase_membership({0.5, 0.45, 0.05}, pr, 0.05);
    CHECK(nei.label == PhaseLabel::Neither);

    CHECK_THROWS_AS(phase_membership(nu_dis_vector(3), pr, 10.0), std::invalid_argument);
}

TEST_CASE("percolation keeps only monochromatic edges, each with its own coin") {
    const Multigraph k4 = testutil::load_fixture("k4");
    RngStream rng(21);
    const SpinConfig same = make_spin_config(k4, {1, 1, 1, 1}, 2);
    const SpinConfig split = make_spin_config(k4, {1, 1, 2, 2}, 2);

    const auto none = percolate(k4, same, 0.0, rng);
    for (char c : none) CHECK(c == 0);
    const auto all = percolate(k4, same, 1.0, rng);
    for (char c : all) CHECK(c == 1);

    // bichromatic edges never survive even at p=1
    const auto part = percolate(k4, split, 1.0, rng);
    for (std::int32_t e = 0; e < k4.edge_count(); ++e) {
        const Edge& ed = k4.edge(e);
        const bool mono = split.colour[static_cast<std::size_t>(ed.u)] ==
                          split.colour[static_cast<std::size_t>(ed.v)];
        CHECK(static_cast<bool>(part[static_cast<std::size_t>(e)]) == mono);
    }

    // monochromatic graph at p=1/2: the mask is uniform over all 2^6 subsets
    const std::int64_t draws = 64 * 400;
    std::vector<std::int64_t> counts(64, 0);
    for (std::int64_t i = 0; i < draws; ++i) {
        const auto mask = percolate(k4, same, 0.5, rng);
        int idx = 0;
        for (std::size_t e = 0; e < mask.size(); ++e)
            if (mask[e]) idx |= 1 << e;
        ++counts[static_cast<std::size_t>(idx)];
    }
    std::vector<double> expected(64, static_cast<double>(draws) / 64.0);
    CHECK(testutil::chi2_pvalue(testutil::chi2_stat(expected, counts), 63.0) > 1e-6);
}

TEST_CASE("component colouring is uniform and constant per component") {
    const Multigraph tri = testutil::load_fixture("triangle");
    RngStream rng(77);
    std::vector<char> one_edge{1, 0, 0};  // edge 0 joins vertices 0,1
    const int q = 3;
    std::map<std::pair<int, int>, std::int64_t> histo;
    const std::int64_t draws = 9000;
    for (std::int64_t i = 0; i < draws; ++i) {
        const SpinConfig spin = colour_components(tri, one_edge, q, rng);
        REQUIRE(spin.colour[0] == spin.colour[1]);  // same component, same colour
        ++histo[{spin.colour[0], spin.colour[2]}];
    }
    // (colour of {0,1}, colour of {2}) is uniform on q*q cells
    CHECK(histo.size() == 9);
    std::vector<double> expected(9, static_cast<double>(draws) / 9.0);
    std::vector<std::int64_t> observed;
    for (const auto& [key, count] : histo) observed.push_back(count);
    CHECK(testutil::chi2_pvalue(testutil::chi2_stat(expected, observed), 8.0) > 1e-6);
}

TEST_CASE("spin files round-trip") {
    const Multigraph tri = testutil::load_fixture("triangle");
    const SpinConfig spin = make_spin_config(tri, {2, 1, 3}, 3);
    std::ostringstream out;
    write_spins(out, spin);
    std::istringstream in(out.str());
    const SpinConfig back = read_spins(in, tri);
    CHECK(back.colour == spin.colour);
    CHECK(back.q == spin.q);
    CHECK(back.mono == spin.mono);

    std::istringstream bad("2 3\n1\n1\n");
    CHECK_THROWS_AS(read_spins(bad, tri), std::invalid_argument);
}

}  // TEST_SUITE
