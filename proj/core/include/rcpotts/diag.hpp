#pragma once

#include <cstdint>
#include <vector>

#include "rcpotts/dynamics.hpp"
#include "rcpotts/graph.hpp"
#include "rcpotts/phase.hpp"
#include "rcpotts/rng.hpp"

namespace rcpotts {

// Default diagnostic radius: floor(0.45 * log_{d-1} n), just under half the
// graph's diameter scale so distinct balls rarely overlap.
int default_radius(std::int64_t n, int d);

// Shattering certificate around v: remove the edges of B_ell(v) from F and
// ask how many sphere vertices share an outside component.  k_min = 0 means
// every sphere vertex reaches a distinct component, the strongest form of
// local shattering.
struct ShatterReport {
    int v = 0;
    int ell = 0;
    std::int64_t sphere_size = 0;
    std::int64_t components_hit = 0;  // distinct outside components touching the sphere
    std::int64_t k_min = 0;           // sphere_size - components_hit
    // (component label, sphere-vertex count) for components holding >= 2 sphere vertices
    std::vector<std::pair<std::int32_t, std::int64_t>> nontrivial_components;
};

ShatterReport shatter_report(const Multigraph& g, const std::vector<char>& member, int v, int ell);

// Wired-boundary search around v: a vertex set S inside the ball (excluding
// v) such that (1) the component C_v of v in G - S stays inside B_ell(v) and
// (2) all of S lies in one component of the F-subgraph avoiding V(C_v).
//
// Search runs in two stages.  If some simple length-ell path from v avoids
// the largest component C1 of (V - v, F minus v's edges), no boundary is
// reported (the path is the counter-witness).  Otherwise S is built from the
// first C1 vertex reachable from each short path stub and both defining
// conditions are verified directly on (G, F).
struct WiredBoundaryReport {
    int v = 0;
    int ell = 0;
    bool exists = false;
    bool via_path_criterion = false;  // no length-ell path from v avoids C1
    bool budget_exceeded = false;     // path search ran out of budget; exists is then unknown
    std::vector<std::int32_t> witness;  // the cut set S when exists
};

WiredBoundaryReport wired_boundary(const Multigraph& g, const std::vector<char>& member, int v,
                                   int ell, std::int64_t path_budget = 10'000'000);

// Weak-spatial-mixing gap: ball marginal of an edge under a fixed boundary
// versus the same marginal under the phase-restricted chain on the whole
// graph.  Free boundary pairs with the disordered window, wired with the
// ordered one.
enum class PhaseSide { Disordered, Ordered };

struct WsmBudgets {
    std::int64_t ball_steps = 200'000;
    std::int64_t full_steps = 200'000;
    int replicas = 8;
    int threads = 1;
};

struct WsmGapReport {
    int v = 0;
    std::int32_t target_edge = -1;
    int ell = 0;
    MarginalEstimate ball;
    MarginalEstimate full;
    double gap = 0;      // |ball.mean - full.mean|
    double stderr_ = 0;  // combined standard error
};

// Marginal of target_edge under the window-restricted dynamics on the whole
// graph (all-out start in the disordered window, all-in in the ordered one).
MarginalEstimate restricted_marginal(const Multigraph& g, const PhaseProfile& profile,
                                     PhaseSide side, std::int32_t target_edge, std::int64_t steps,
                                     int replicas, RngStream stream, int threads = 1);

WsmGapReport wsm_gap(const Multigraph& g, const PhaseProfile& profile, PhaseSide side, int v,
                     std::int32_t target_edge, int ell, const WsmBudgets& budgets,
                     RngStream stream);

// Fraction of post-burn-in trace rows inside each phase window.
struct PhaseOccupancy {
    std::int64_t samples = 0;
    double dis = 0, ord = 0, neither = 0;
};

PhaseOccupancy phase_occupancy(const Trace& trace);

// Steps until the all-in and all-out chains driven by shared randomness
// coincide.  Inclusion order is preserved at every step, so coincidence
// persists once reached.
struct CouplingReport {
    bool coalesced = false;
    std::int64_t steps = 0;       // first coincidence step, or t_max when timed out
    std::int64_t final_diff = 0;  // edges still differing at exit
};

CouplingReport coupling_time(const Multigraph& g, ChainParams params, std::int64_t t_max,
                             RngStream& rng);

}  // namespace rcpotts
