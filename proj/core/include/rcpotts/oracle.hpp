#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rcpotts/graph.hpp"

namespace rcpotts {

// Exact enumeration of tiny instances; ground truth for the statistical
// tests.  Supports are indexed implicitly: edge subsets by bitmask (bit i =
// edge i), colourings by mixed radix (vertex 0 least significant, digits
// 0..q-1 for colours 1..q).
struct ExactDistribution {
    std::vector<double> log_weight;  // unnormalized log weights by index
    double log_z = 0;                // log-sum-exp of the weights
    std::vector<double> prob;        // normalized probabilities
    // Per-edge inclusion probabilities (RC) or flattened per-vertex colour
    // marginals [v*q + c-1] (Potts).
    std::vector<double> marginals;
};

// Full enumeration of mu(sigma) ~ e^{beta * #monochromatic edges}.
// Requires q^n <= 10^7.  Self-loops are always monochromatic.
ExactDistribution exact_potts(const Multigraph& g, int q, double beta);

// Full enumeration of pi(F) ~ q^{c(F)} p^{|F|} (1-p)^{|E|-|F|}.  Requires
// 2^{|E|} <= 10^7.  Self-loops count toward |F| but never change c(F).
ExactDistribution exact_rc(const Multigraph& g, double q, double p);

// Half the l1 distance between two distributions on a common index space.
double exact_tv(const std::vector<double>& a, const std::vector<double>& b);

// Normalizes sample counts into a probability vector for TV comparisons.
std::vector<double> histogram_to_distribution(const std::vector<std::int64_t>& counts);

// Decodes a Potts configuration index into 1-based colours.
std::vector<int> potts_config_of_index(std::int64_t index, int n, int q);

// Exact pushforward of the Potts measure under monochromatic-edge
// percolation with retention p = 1 - e^{-beta}; must equal exact_rc.
std::vector<double> es_pushforward(const Multigraph& g, int q, double beta);

// Single-step transition matrix of the heat-bath edge dynamics, checked
// against the exact stationary vector.  Requires 2^{|E|} <= 2^14.
struct TransitionCheckReport {
    std::int64_t states = 0;
    double stationarity_residual = 0;    // max_j |(pi P)_j - pi_j|
    double detailed_balance_residual = 0;  // max |pi_i P_ij - pi_j P_ji|
    bool irreducible = false;
    bool ok(double tol = 1e-10) const {
        return irreducible && stationarity_residual < tol && detailed_balance_residual < tol;
    }
};

TransitionCheckReport exact_transition_check(const Multigraph& g, double q, double p);

// Number of perfect matchings of k points: (k-1)!! for even k.
double pairing_count(int k);

// Visits every pairing of {0..k-1} (k even); the argument maps each
// half-edge to its partner.  Order is deterministic (smallest unmatched
// point first).
void for_each_pairing(int k, const std::function<void(const std::vector<std::int32_t>&)>& visit);

}  // namespace rcpotts
