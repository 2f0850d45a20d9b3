#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rcpotts/graph.hpp"
#include "rcpotts/phase.hpp"
#include "rcpotts/rng.hpp"

namespace rcpotts {

// Spin assignment sigma: V -> {1..q} with cached colour counts and the
// monochromatic edge count m(sigma).  Self-loops are always monochromatic;
// parallel edges count separately.
struct SpinConfig {
    int q = 0;
    std::vector<std::int32_t> colour;       // 1-based colours
    std::vector<std::int64_t> class_count;  // index 0 unused; class_count[c] = #{v: colour v = c}
    std::int64_t mono = 0;                  // monochromatic edge count
};

SpinConfig make_spin_config(const Multigraph& g, std::vector<std::int32_t> colour, int q);

// Potts weight in log space: beta * m(sigma).
double potts_log_weight(const SpinConfig& spin, double beta);

// O(deg(v)) recolouring that keeps counts and mono in sync.
void recolour(const Multigraph& g, SpinConfig& spin, int v, int new_colour);

// Empirical colour statistics.  nu[i] = class fraction; rho[i][j] = half-edge
// pair fraction: pair_count[i][j] counts half-edges at colour-i vertices whose
// partner vertex has colour j (a self-loop contributes 2 to its diagonal
// entry), normalized by 2|E|.  Exact integer counts are kept alongside.
struct ColourStats {
    int q = 0;
    std::int64_t half_edges = 0;  // 2|E|
    std::vector<std::int64_t> class_count;              // 1-based
    std::vector<std::vector<std::int64_t>> pair_count;  // 1-based, symmetric
    std::vector<double> nu;                             // 1-based
    std::vector<std::vector<double>> rho;               // 1-based
};

ColourStats colour_stats(const Multigraph& g, const SpinConfig& spin);

enum class PhaseLabel { Disordered, OrderedDominant, Neither };

struct PhaseMembership {
    PhaseLabel label = PhaseLabel::Neither;
    int dominant_colour = 0;  // set iff label == OrderedDominant
    double dis_distance = 0;  // L1 distance of empirical nu to the uniform vector
    double ord_distance = 0;  // min over colour relabellings of L1 distance to nu_ord
};

// Classifies an empirical colour histogram against the disordered and ordered
// model vectors at tolerance theta (L1).  Rejects theta large enough to make
// the two labels ambiguous (theta >= half the dis/ord L1 separation).
PhaseMembership phase_membership(const std::vector<double>& nu_empirical,
                                 const PhaseProfile& profile, double theta);

// Potts -> random-cluster direction of the Edwards-Sokal coupling: keep each
// monochromatic edge independently with probability p.  Returns an edge
// membership mask aligned with edge ids (coins drawn in edge-id order).
std::vector<char> percolate(const Multigraph& g, const SpinConfig& spin, double p,
                            RngStream& rng);

// Random-cluster -> Potts direction: colour every component of the edge set
// uniformly at random.
SpinConfig colour_components(const Multigraph& g, const std::vector<char>& edge_member, int q,
                             RngStream& rng);

// Spin file format: first line "n q", then n lines with one colour each.
void write_spins(std::ostream& out, const SpinConfig& spin);
SpinConfig read_spins(std::istream& in, const Multigraph& g);
void write_spins_file(const std::string& path, const SpinConfig& spin);

}  // namespace rcpotts
