#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcpotts/graph.hpp"
#include "rcpotts/phase.hpp"
#include "rcpotts/rng.hpp"

namespace rcpotts {

// Planted-colouring specification: class sizes n_i rounded from a target
// colour profile nu, and a symmetric block matrix b where b_ij counts the
// half-edges of class i matched to class j (so b_ii is even and row i sums to
// d * n_i).  Conditioned on the colouring, the pairing is uniform over
// pairings realizing b.
struct PlantedSpec {
    int q = 0;
    int d = 0;
    std::int64_t n = 0;
    std::vector<std::int64_t> class_sizes;           // length q, sums to n
    std::vector<std::vector<std::int64_t>> blocks;   // q x q symmetric, b_ii even

    std::int64_t row_sum(int i) const;
    void validate() const;  // throws on any violated constraint

    std::string to_json() const;
    static PlantedSpec from_json(const std::string& text);
};

// Rounds the target profile (nu, rho) to integer class sizes and block counts.
// Class sizes use largest-remainder rounding of n*nu_i.  Block counts round
// 2|E|*rho_ij and then get a deterministic repair pass: fix diagonal parity,
// restore symmetry, and walk row sums back to d*n_i by adjusting off-diagonal
// entries (largest first).  The result always validates.
PlantedSpec make_planted_spec(int q, int d, std::int64_t n, const std::vector<double>& nu,
                              const std::vector<std::vector<double>>& rho);

// Convenience: spec for the ordered/disordered phase profiles at beta.
PlantedSpec planted_spec_ordered(int q, int d, std::int64_t n, double beta);
PlantedSpec planted_spec_disordered(int q, int d, std::int64_t n, double beta);

struct PlantedSample {
    Multigraph graph;
    std::vector<int> colours;  // vertex -> colour class, 1-based
};

// Samples (colouring, graph): assigns colours by shuffling the class multiset,
// then draws a uniform pairing realizing the block counts (within-class
// blocks get a uniform perfect matching on their half-edges, cross blocks a
// uniform bijection between the two sides).
PlantedSample sample_planted(const PlantedSpec& spec, RngStream& rng);

// Lazy view of the same distribution: colours and block counts are fixed
// up-front, half-edge partners are revealed on demand.  Conditioned on the
// revealed prefix, the unrevealed pairing stays uniform over completions, so
// local exploration never needs the full graph.
class LazyPlantedGraph {
  public:
    LazyPlantedGraph(const PlantedSpec& spec, RngStream& rng);

    std::int64_t n() const { return spec_.n; }
    int d() const { return spec_.d; }
    int q() const { return spec_.q; }
    const PlantedSpec& spec() const { return spec_; }
    int colour(std::int64_t v) const { return colours_[static_cast<std::size_t>(v)]; }

    std::int64_t half_edge(std::int64_t v, int slot) const { return v * spec_.d + slot; }
    std::int64_t vertex_of(std::int64_t h) const { return h / spec_.d; }
    bool revealed(std::int64_t h) const { return partner_[static_cast<std::size_t>(h)] >= 0; }
    std::int64_t partner(std::int64_t h) const { return partner_[static_cast<std::size_t>(h)]; }

    // Reveals the partner of h (drawing it if needed) and returns it.
    std::int64_t reveal(std::int64_t h, RngStream& rng);

    std::int64_t revealed_pairs() const { return revealed_pairs_; }

    // Remaining unmatched half-edges of colour class c (1-based).
    std::int64_t unmatched_in_class(int c) const {
        return static_cast<std::int64_t>(pool_[static_cast<std::size_t>(c - 1)].size());
    }
    // Remaining b_cj budget.
    std::int64_t remaining_block(int c, int j) const {
        return m_[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(j - 1)];
    }

    // Materializes the full graph by revealing every remaining half-edge.
    Multigraph finish(RngStream& rng);

  private:
    void remove_from_pool(std::int64_t h);

    PlantedSpec spec_;
    std::vector<int> colours_;                       // vertex -> class
    std::vector<std::int64_t> partner_;              // half-edge -> partner or -1
    std::vector<std::vector<std::int64_t>> m_;       // remaining block budgets
    std::vector<std::vector<std::int64_t>> pool_;    // per-class unmatched half-edges
    std::vector<std::int64_t> pool_pos_;             // half-edge -> index in its pool
    std::int64_t revealed_pairs_ = 0;
};

// Local limit around a vertex: reveal all partners within graph distance
// `radius` of v, returning the revealed edge list (endpoints by vertex).
struct RevealedBall {
    std::int64_t center = 0;
    int radius = 0;
    std::vector<std::int64_t> vertices;                       // BFS order
    std::vector<std::pair<std::int64_t, std::int64_t>> edges; // revealed pairs as (u, v)
};
RevealedBall reveal_ball(LazyPlantedGraph& g, std::int64_t v, int radius, RngStream& rng);

// Lazy exploration of the percolated components of the sphere S_ell(v),
// revealing one half-edge per time step.  The ball around v is revealed
// first and conditioned on (its edges carry no percolation coin); the active
// vertex set starts as the sphere and grows by monochromatic matches that
// survive an independent p-coin.  Interior ball vertices are fully matched
// by the conditioning, so every later match is a fresh edge outside the
// ball.  A collision is a match landing on an ever-active vertex; the
// collision sum bounds how many sphere vertices can share a component, so a
// small sum plus early extinction certifies local shattering.

// One clock tick of the exploration: a half-edge match plus the percolation
// outcome.  collision is the indicator of matching into the ever-active set;
// survived means the edge was monochromatic and kept by the p-coin.
struct ExplorationStep {
    std::int64_t t = 0;
    std::int64_t half_edge = 0;
    std::int64_t partner_vertex = 0;
    bool same_colour = false;
    bool survived = false;
    bool collision = false;
    std::int64_t active_after = 0;  // |A_t|
};

struct ExplorationReport {
    std::int64_t start_vertex = 0;
    int ell = 0;
    int t_cap = 0;
    std::int64_t sphere_size = 0;
    std::int64_t steps_used = 0;          // final time (half-edges matched, fillers included)
    bool terminated = false;              // loop exited with an empty active set
    std::int64_t active_at_cap = 0;       // |A_{t_cap}|, 0 when extinction came earlier
    std::int64_t collisions = 0;          // matches into the ever-active set
    std::int64_t survivals = 0;           // monochromatic matches that kept their edge
    std::int64_t k_observed = 0;          // == collisions (non-distinct sphere vertex bound)
    std::int64_t activated_vertices = 0;  // sphere plus every vertex ever activated
    std::int64_t sphere_components = 0;   // distinct kept-edge components among sphere vertices
    bool shattered = false;               // strict: active_at_cap == 0 && k_observed <= k_cap
    std::vector<ExplorationStep> steps;   // populated only when record_steps is set
};

// Time cap floor(n^{1/2-eps}) and collision cap ceil(10/eps).
int exploration_time_cap(std::int64_t n, double eps);
std::int64_t exploration_collision_cap(double eps);

ExplorationReport explore_shattering(LazyPlantedGraph& g, std::int64_t v, int ell, double p,
                                     int t_cap, std::int64_t k_cap, RngStream& rng,
                                     bool record_steps = false);

void write_exploration_csv(const std::string& path, const ExplorationReport& rep);

}  // namespace rcpotts
