#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rcpotts/gibbs.hpp"
#include "rcpotts/oracle.hpp"
#include "rcpotts/phase.hpp"
#include "rcpotts/planted.hpp"
#include "rcpotts/rng.hpp"

using namespace rcpotts;
using doctest::Approx;

namespace {

double l1_class_error(const PlantedSpec& spec, const std::vector<double>& nu) {
    double err = 0;
    for (int i = 0; i < spec.q; ++i)
        err += std::abs(static_cast<double>(spec.class_sizes[static_cast<std::size_t>(i)]) /
                            static_cast<double>(spec.n) -
                        nu[static_cast<std::size_t>(i)]);
    return err;
}

double l1_block_error(const PlantedSpec& spec, const std::vector<std::vector<double>>& rho) {
    const double dn = static_cast<double>(spec.d) * static_cast<double>(spec.n);
    double err = 0;
    for (int i = 0; i < spec.q; ++i)
        for (int j = 0; j < spec.q; ++j)
            err += std::abs(static_cast<double>(
                                spec.blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) /
                                dn -
                            rho[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return err;
}

// Two-sample homogeneity chi-square over the union of observed keys.
double homogeneity_pvalue(const std::map<std::int64_t, std::int64_t>& a,
                          const std::map<std::int64_t, std::int64_t>& b) {
    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> merged;
    std::int64_t na = 0, nb = 0;
    for (const auto& [k, c] : a) merged[k].first += c, na += c;
    for (const auto& [k, c] : b) merged[k].second += c, nb += c;
    // pool sparse tails so expected counts stay above ~5
    double stat = 0;
    int dof = -1;
    std::int64_t pa = 0, pb = 0;
    for (const auto& [k, cell] : merged) {
        pa += cell.first;
        pb += cell.second;
        const double tot = static_cast<double>(pa + pb);
        const double ea = tot * static_cast<double>(na) / static_cast<double>(na + nb);
        const double eb = tot * static_cast<double>(nb) / static_cast<double>(na + nb);
        if (ea < 5 || eb < 5) continue;  // keep pooling into the next cell
        stat += (pa - ea) * (pa - ea) / ea + (pb - eb) * (pb - eb) / eb;
        ++dof;
        pa = pb = 0;
    }
    if (pa + pb > 0 && dof >= 0) {
        // fold the leftover tail into the statistic as one more cell
        const double tot = static_cast<double>(pa + pb);
        const double ea = tot * static_cast<double>(na) / static_cast<double>(na + nb);
        const double eb = tot * static_cast<double>(nb) / static_cast<double>(na + nb);
        if (ea > 0 && eb > 0) {
            stat += (pa - ea) * (pa - ea) / ea + (pb - eb) * (pb - eb) / eb;
            ++dof;
        }
    }
    if (dof < 1) return 1.0;
    return testutil::chi2_pvalue(stat, dof);
}

}  // namespace

TEST_SUITE("planted") {

TEST_CASE("spec rounding respects the L1 error budgets") {
    for (int q : {3, 5}) {
        for (int d : {3, 4}) {
            for (std::int64_t n : {52, 100, 1031, 20000}) {
                if ((n * d) % 2) continue;
                const double bc = beta_c(q, d);
                {
                    const PlantedSpec spec = planted_spec_disordered(q, d, n, 0.8 * bc);
                    spec.validate();
                    CHECK(l1_class_error(spec, nu_dis_vector(q)) <=
                          static_cast<double>(q) / static_cast<double>(n) + 1e-12);
                    CHECK(l1_block_error(spec, rho_dis_matrix(q, 0.8 * bc)) <=
                          2.0 * q * q / (static_cast<double>(d) * static_cast<double>(n)) + 1e-12);
                }
                {
                    const PhaseProfile pr = phase_profile(q, d, bc);
                    const PlantedSpec spec = planted_spec_ordered(q, d, n, bc);
                    spec.validate();
                    CHECK(l1_class_error(spec, nu_ord_vector(pr)) <=
                          static_cast<double>(q) / static_cast<double>(n) + 1e-12);
                    CHECK(l1_block_error(spec, rho_ord_matrix(pr)) <=
                          2.0 * q * q / (static_cast<double>(d) * static_cast<double>(n)) + 1e-12);
                }
            }
        }
    }
    // pinned small example: q=3, d=3, n=100 disordered
    const PlantedSpec s100 = planted_spec_disordered(3, 3, 100, 1.0);
    CHECK(l1_class_error(s100, nu_dis_vector(3)) <= 0.03 + 1e-12);
    // ordered at criticality: the heavy class holds (q-1)/q of the vertices
    const PlantedSpec o100 = planted_spec_ordered(3, 3, 100, beta_c(3, 3));
    CHECK(std::abs(static_cast<double>(o100.class_sizes[0]) / 100.0 - 2.0 / 3.0) <= 0.03 + 1e-12);
}

TEST_CASE("spec validation rejects inconsistent tables") {
    PlantedSpec spec = planted_spec_disordered(3, 3, 100, 1.0);
    CHECK_NOTHROW(spec.validate());
    PlantedSpec odd = spec;
    odd.blocks[0][0] += 1;
    CHECK_THROWS_AS(odd.validate(), std::invalid_argument);  // parity and row sum break
    PlantedSpec asym = spec;
    asym.blocks[0][1] += 1;
    CHECK_THROWS_AS(asym.validate(), std::invalid_argument);
    PlantedSpec badn = spec;
    badn.class_sizes[0] += 1;
    CHECK_THROWS_AS(badn.validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_planted_spec(3, 3, 101, nu_dis_vector(3), rho_dis_matrix(3, 1.0)),
                    std::invalid_argument);  // odd half-edge count
    CHECK_THROWS_AS(planted_spec_ordered(3, 3, 100, 0.5 * beta_u(3, 3)), std::invalid_argument);
}

TEST_CASE("spec serialization round-trips") {
    const PlantedSpec spec = planted_spec_ordered(4, 5, 200, beta_c(4, 5));
    const std::string text = spec.to_json();
    const PlantedSpec back = PlantedSpec::from_json(text);
    CHECK(back.q == spec.q);
    CHECK(back.d == spec.d);
    CHECK(back.n == spec.n);
    CHECK(back.class_sizes == spec.class_sizes);
    CHECK(back.blocks == spec.blocks);
    CHECK(back.to_json() == text);
}

TEST_CASE("samples realize the colour counts and block table exactly") {
    RngStream rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const PlantedSpec spec = trial % 2 == 0
                                     ? planted_spec_disordered(3, 3, 60, 1.0)
                                     : planted_spec_ordered(3, 4, 60, beta_c(3, 4));
        const PlantedSample s = sample_planted(spec, rng);
        REQUIRE(s.graph.n() == spec.n);
        REQUIRE(s.graph.edge_count() == spec.n * spec.d / 2);

        std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.q) + 1, 0);
        std::vector<std::int32_t> colour32(s.colours.begin(), s.colours.end());
        for (int c : s.colours) ++counts[static_cast<std::size_t>(c)];
        for (int i = 0; i < spec.q; ++i)
            REQUIRE(counts[static_cast<std::size_t>(i + 1)] ==
                    spec.class_sizes[static_cast<std::size_t>(i)]);

        const SpinConfig spin = make_spin_config(s.graph, colour32, spec.q);
        const ColourStats st = colour_stats(s.graph, spin);
        for (int i = 0; i < spec.q; ++i)
            for (int j = 0; j < spec.q; ++j)
                REQUIRE(st.pair_count[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(
                            j + 1)] ==
                        spec.blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
}

TEST_CASE("two vertices, one cross edge: both colourings equally likely") {
    PlantedSpec spec;
    spec.q = 2;
    spec.d = 1;
    spec.n = 2;
    spec.class_sizes = {1, 1};
    spec.blocks = {{0, 1}, {1, 0}};
    spec.validate();
    RngStream rng(616);
    std::int64_t first_is_one = 0;
    const std::int64_t draws = 20000;
    for (std::int64_t i = 0; i < draws; ++i) {
        const PlantedSample s = sample_planted(spec, rng);
        REQUIRE(s.graph.edge_count() == 1);
        REQUIRE_FALSE(s.graph.edge(0).is_loop());
        REQUIRE(s.colours[0] != s.colours[1]);
        if (s.colours[0] == 1) ++first_is_one;
    }
    // binomial(20000, 1/2): 4 sigma is ~283
    CHECK(std::abs(first_is_one - draws / 2) < 300);
}

TEST_CASE("conditioned on the colouring, the pairing is uniform over admissible ones") {
    PlantedSpec spec;
    spec.q = 2;
    spec.d = 2;
    spec.n = 4;
    spec.class_sizes = {2, 2};
    spec.blocks = {{2, 2}, {2, 2}};
    spec.validate();

    // reference colouring: vertices 0,1 in class 1 and 2,3 in class 2
    const std::vector<int> ref{1, 1, 2, 2};

    // enumerate admissible pairings for ref by filtering all 7!! pairings
    std::map<std::vector<std::int32_t>, std::int64_t> admissible;
    for_each_pairing(8, [&](const std::vector<std::int32_t>& pairing) {
        std::vector<std::vector<std::int64_t>> blocks(2, std::vector<std::int64_t>(2, 0));
        for (int h = 0; h < 8; ++h) {
            const int i = ref[static_cast<std::size_t>(h / 2)] - 1;
            const int j = ref[static_cast<std::size_t>(pairing[static_cast<std::size_t>(h)] / 2)] - 1;
            ++blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        if (blocks[0][0] == 2 && blocks[0][1] == 2 && blocks[1][0] == 2 && blocks[1][1] == 2)
            admissible[pairing] = 0;
    });
    REQUIRE(admissible.size() == 72);

    RngStream rng(27182);
    std::int64_t kept = 0;
    for (std::int64_t i = 0; i < 40000; ++i) {
        const PlantedSample s = sample_planted(spec, rng);
        if (s.colours != ref) continue;
        ++kept;
        auto it = admissible.find(s.graph.pairing());
        REQUIRE(it != admissible.end());
        ++it->second;
    }
    REQUIRE(kept > 4000);  // 1/6 of draws land on ref in expectation
    std::vector<double> expected(admissible.size(),
                                 static_cast<double>(kept) / static_cast<double>(admissible.size()));
    std::vector<std::int64_t> observed;
    for (const auto& [pairing, count] : admissible) observed.push_back(count);
    CHECK(testutil::chi2_pvalue(testutil::chi2_stat(expected, observed), 71.0) > 1e-6);
}

TEST_CASE("lazy reveals conserve budgets and finish into the exact block table") {
    const PlantedSpec spec = planted_spec_disordered(3, 3, 40, 1.0);
    RngStream rng(5);
    LazyPlantedGraph g(spec, rng);

    auto total_budget = [&] {
        std::int64_t sum = 0;
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) sum += g.remaining_block(i, j);
        return sum;
    };
    auto pool_matches_rows = [&] {
        for (int c = 1; c <= 3; ++c) {
            std::int64_t row = 0;
            for (int j = 1; j <= 3; ++j) row += g.remaining_block(c, j);
            if (row != g.unmatched_in_class(c)) return false;
        }
        return true;
    };

    const std::int64_t start = total_budget();
    CHECK(start == spec.n * spec.d);
    CHECK(pool_matches_rows());

    // class counts in the lazy colouring match the requested class_sizes
    std::vector<std::int64_t> counts(4, 0);
    for (std::int64_t v = 0; v < g.n(); ++v) ++counts[static_cast<std::size_t>(g.colour(v))];
    for (int i = 0; i < 3; ++i)
        CHECK(counts[static_cast<std::size_t>(i + 1)] == spec.class_sizes[static_cast<std::size_t>(i)]);

    for (int k = 0; k < 15; ++k) {
        std::int64_t h = -1;  // first unrevealed half-edge
        for (std::int64_t c = 0; c < g.n() * g.d() && h < 0; ++c)
            if (!g.revealed(c)) h = c;
        REQUIRE(h >= 0);
        const std::int64_t before = total_budget();
        const std::int64_t hp = g.reveal(h, rng);
        CHECK(g.partner(h) == hp);
        CHECK(g.partner(hp) == h);
        CHECK(g.reveal(h, rng) == hp);  // idempotent
        CHECK(total_budget() == before - 2);
        CHECK(pool_matches_rows());
        // within-class budgets stay even on the diagonal
        for (int i = 1; i <= 3; ++i) CHECK(g.remaining_block(i, i) % 2 == 0);
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) CHECK(g.remaining_block(i, j) == g.remaining_block(j, i));
    }

    const Multigraph full = g.finish(rng);
    CHECK(total_budget() == 0);
    std::vector<std::int32_t> colour32;
    for (std::int64_t v = 0; v < g.n(); ++v)
        colour32.push_back(static_cast<std::int32_t>(g.colour(v)));
    const ColourStats st = colour_stats(full, make_spin_config(full, colour32, 3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(st.pair_count[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j + 1)] ==
                  spec.blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
}

TEST_CASE("revealed balls cover every half-edge of interior vertices") {
    const PlantedSpec spec = planted_spec_disordered(3, 3, 200, 1.0);
    RngStream rng(88);
    LazyPlantedGraph g(spec, rng);
    const RevealedBall b = reveal_ball(g, 7, 2, rng);
    CHECK(b.center == 7);
    CHECK(b.vertices.front() == 7);
    REQUIRE(!b.edges.empty());
    // distances: recompute via BFS over revealed edges
    std::map<std::int64_t, int> dist;
    dist[7] = 0;
    std::vector<std::int64_t> frontier{7};
    for (int r = 0; r < 2; ++r) {
        std::vector<std::int64_t> next;
        for (std::int64_t u : frontier) {
            for (int s = 0; s < g.d(); ++s) {
                const std::int64_t h = g.half_edge(u, s);
                if (!g.revealed(h)) continue;
                const std::int64_t w = g.vertex_of(g.partner(h));
                if (!dist.count(w)) dist[w] = r + 1, next.push_back(w);
            }
        }
        frontier = std::move(next);
    }
    for (std::int64_t u : b.vertices) {
        REQUIRE(dist.count(u));
        if (dist[u] < 2)  // interior vertices are fully matched
            for (int s = 0; s < g.d(); ++s) CHECK(g.revealed(g.half_edge(u, s)));
    }
}

TEST_CASE("exploration caps follow the stated formulas") {
    CHECK(exploration_time_cap(5000, 0.1) == 30);
    CHECK(exploration_time_cap(100, 0.25) == 3);
    CHECK(exploration_collision_cap(0.1) == 100);
    CHECK(exploration_collision_cap(0.3) == 34);
    CHECK_THROWS_AS(exploration_time_cap(100, 0.7), std::invalid_argument);
    CHECK_THROWS_AS(exploration_collision_cap(0.0), std::invalid_argument);
}

TEST_CASE("exploration handles the degenerate cases") {
    RngStream rng(3);
    // p = 0: nothing survives, so no vertex beyond the sphere activates
    {
        const PlantedSpec spec = planted_spec_disordered(3, 3, 300, 1.0);
        LazyPlantedGraph g(spec, rng);
        // t_cap 30 > the ~12 free sphere half-edges, so the active set is
        // fully consumed before the cap and the strict flag can fire
        const ExplorationReport rep = explore_shattering(g, 0, 2, 0.0, 30, 100, rng, true);
        CHECK(rep.terminated);
        CHECK(rep.survivals == 0);
        CHECK(rep.activated_vertices == rep.sphere_size);
        CHECK(rep.sphere_components == rep.sphere_size);
        CHECK(rep.shattered);
        for (const ExplorationStep& s : rep.steps) CHECK_FALSE(s.survived);
    }
    // empty sphere: radius beyond the component diameter
    {
        PlantedSpec tiny;
        tiny.q = 2;
        tiny.d = 1;
        tiny.n = 2;
        tiny.class_sizes = {1, 1};
        tiny.blocks = {{0, 1}, {1, 0}};
        LazyPlantedGraph g(tiny, rng);
        const ExplorationReport rep = explore_shattering(g, 0, 5, 0.5, 4, 10, rng);
        CHECK(rep.sphere_size == 0);
        CHECK(rep.terminated);
        CHECK(rep.active_at_cap == 0);
        CHECK(rep.k_observed == 0);
        CHECK(rep.shattered);
    }
}

TEST_CASE("per-step records satisfy the growth and counting invariants") {
    RngStream rng(1234);
    const PlantedSpec spec = planted_spec_ordered(3, 3, 400, beta_c(3, 3));
    for (int trial = 0; trial < 5; ++trial) {
        LazyPlantedGraph g(spec, rng);
        const ExplorationReport rep =
            explore_shattering(g, trial, 2, p_of_beta(beta_c(3, 3)), 19, 100, rng, true);
        CHECK(rep.terminated);
        std::int64_t collisions = 0, survivals = 0;
        for (const ExplorationStep& s : rep.steps) {
            // the active set grows by at most one per step
            CHECK(s.active_after <= rep.sphere_size + s.t);
            if (s.collision) ++collisions;
            if (s.survived) {
                ++survivals;
                CHECK(s.same_colour);  // only monochromatic edges carry the coin
            }
        }
        CHECK(collisions == rep.collisions);
        CHECK(survivals == rep.survivals);
        CHECK(rep.k_observed == rep.collisions);
        CHECK(static_cast<std::int64_t>(rep.steps.size()) == rep.steps_used);
        CHECK(rep.steps_used >= rep.t_cap);
    }
}

TEST_CASE("the survival coin fires at rate p on fresh monochromatic matches") {
    // A step is a filler iff the active set was empty when it ran, i.e. the
    // previous recorded step left active_after == 0 (or the sphere started
    // empty).  Real steps each pair one fresh half-edge; monochromatic ones
    // carry an independent Bernoulli(p) coin, so aggregated survivals are
    // Binomial(#mono real steps, p) exactly.  The mono fraction itself sits
    // near e^beta/(e^beta+q-1) in the disordered profile, up to depletion.
    const int q = 3, d = 3;
    const double beta = 0.8 * beta_c(q, d);
    const double p = p_of_beta(beta);
    const std::int64_t n = 5000;
    const PlantedSpec spec = planted_spec_disordered(q, d, n, beta);
    RngStream rng(2718);
    std::int64_t real_steps = 0, mono_real = 0, survivals = 0;
    for (int trial = 0; trial < 100; ++trial) {
        LazyPlantedGraph g(spec, rng);
        const ExplorationReport rep =
            explore_shattering(g, (trial * 37) % n, 3, p, exploration_time_cap(n, 0.1), 1000,
                               rng, true);
        std::int64_t live_before = rep.sphere_size;
        for (const ExplorationStep& s : rep.steps) {
            if (live_before > 0) {
                ++real_steps;
                if (s.same_colour) ++mono_real;
                if (s.survived) ++survivals;
            } else {
                // fillers never carry the coin
                CHECK_FALSE(s.survived);
                CHECK_FALSE(s.collision);
            }
            live_before = s.active_after;
        }
    }
    REQUIRE(mono_real > 500);
    const double se = std::sqrt(static_cast<double>(mono_real) * p * (1 - p));
    CHECK(std::abs(static_cast<double>(survivals) - static_cast<double>(mono_real) * p) <=
          4 * se + 1);
    const double mono_frac = static_cast<double>(mono_real) / static_cast<double>(real_steps);
    const double expected = std::exp(beta) / (std::exp(beta) + q - 1);
    CHECK(std::abs(mono_frac - expected) < 0.05);
}

TEST_CASE("lazy exploration matches eager percolation in distribution") {
    // statistic: number of sphere vertices minus the number of distinct
    // outside components they land in (0 when fully shattered)
    const int q = 3, d = 3, ell = 2;
    const std::int64_t n = 60;
    const double beta = 0.8 * beta_c(q, d);
    const double p = p_of_beta(beta);
    const PlantedSpec spec = planted_spec_disordered(q, d, n, beta);
    const std::int64_t trials = 4000;

    RngStream lazy_rng(99);
    std::map<std::int64_t, std::int64_t> lazy_histo;
    for (std::int64_t i = 0; i < trials; ++i) {
        LazyPlantedGraph g(spec, lazy_rng);
        const ExplorationReport rep = explore_shattering(g, 0, ell, p, 5, 1000, lazy_rng);
        ++lazy_histo[rep.sphere_size - rep.sphere_components];
    }

    RngStream eager_rng(881);
    std::map<std::int64_t, std::int64_t> eager_histo;
    for (std::int64_t i = 0; i < trials; ++i) {
        const PlantedSample s = sample_planted(spec, eager_rng);
        // distances from the start vertex
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        dist[0] = 0;
        std::vector<int> order{0};
        for (std::size_t head = 0; head < order.size(); ++head) {
            const int u = order[head];
            for (const auto& [w, e] : s.graph.incident(u)) {
                (void)e;
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                    order.push_back(w);
                }
            }
        }
        // percolate monochromatic edges not touching the ball interior
        std::vector<Edge> kept;
        for (std::int32_t e = 0; e < s.graph.edge_count(); ++e) {
            const Edge& ed = s.graph.edge(e);
            const int du = dist[static_cast<std::size_t>(ed.u)];
            const int dv = dist[static_cast<std::size_t>(ed.v)];
            const bool ball_edge = (du >= 0 && du < ell) || (dv >= 0 && dv < ell);
            const bool mono = s.colours[static_cast<std::size_t>(ed.u)] ==
                              s.colours[static_cast<std::size_t>(ed.v)];
            const bool coin = eager_rng.bernoulli(p);  // drawn for every edge to keep streams simple
            if (!ball_edge && mono && coin) kept.push_back(ed);
        }
        const ComponentLabelling lab = components(static_cast<int>(n), kept);
        std::vector<std::int32_t> roots;
        std::int64_t sphere_size = 0;
        for (int v = 0; v < static_cast<int>(n); ++v)
            if (dist[static_cast<std::size_t>(v)] == ell) {
                ++sphere_size;
                roots.push_back(lab.label[static_cast<std::size_t>(v)]);
            }
        std::sort(roots.begin(), roots.end());
        const std::int64_t distinct =
            std::unique(roots.begin(), roots.end()) - roots.begin();
        ++eager_histo[sphere_size - distinct];
    }

    CHECK(homogeneity_pvalue(lazy_histo, eager_histo) > 1e-3);
}

}  // TEST_SUITE
