#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcpotts/graph.hpp"
#include "rcpotts/phase.hpp"
#include "rcpotts/rng.hpp"

namespace rcpotts {

// Single-edge heat-bath dynamics for the random-cluster measure
// pi(F) ~ q^{c(F)} p^{|F|} (1-p)^{|E|-|F|}.
//
// One step: pick an edge e uniformly; if e is a cut edge of (V, F u {e})
// (endpoints not connected in (V, F \ {e})), include it with probability
// p_hat = p/((1-p)q + p), else with probability p.  Self-loops never count as
// cut edges.  A window restriction on |F| turns the chain into the
// phase-restricted variant: an update whose resulting edge count leaves the
// window is ignored (state unchanged, reported as not applied).

struct ChainParams {
    double q = 2;
    double p = 0.5;
    double p_hat = 0;
    static ChainParams from_p(double q, double p);
    static ChainParams from_beta(double q, double beta);
};

struct Window {
    double lo = 0;
    double hi = 0;
    bool contains(std::int64_t f_size) const {
        return static_cast<double>(f_size) >= lo && static_cast<double>(f_size) <= hi;
    }
};

// Disordered / ordered edge-count windows for the phase-restricted chain,
// centered on the expected densities at beta_c.
Window dis_window(const PhaseProfile& profile, std::int64_t n);
Window ord_window(const PhaseProfile& profile, std::int64_t n);

enum class InitState { AllOut, AllIn };
enum class ConnectivityMode { BfsOnDemand, LazyDsu };

struct StepReport {
    std::int32_t edge = -1;
    bool was_cut = false;
    bool proposed_in = false;
    bool applied = false;
};

class RcChain {
  public:
    RcChain(const Multigraph& g, ChainParams params, InitState init);
    RcChain(const Multigraph& g, ChainParams params, std::vector<char> member);

    const Multigraph& graph() const { return *g_; }
    const ChainParams& params() const { return params_; }
    const std::vector<char>& member() const { return member_; }
    std::int64_t edge_in_count() const { return in_count_; }
    std::int64_t steps_done() const { return steps_; }
    std::int64_t rejected_by_restriction() const { return rejected_; }

    // Restrict updates to a |F| window.  The current configuration must lie
    // inside the window.
    void set_window(Window w);
    // Restrict updates to a subset of edges (e.g. a ball); all other edges are
    // frozen at their current state.
    void set_updatable(std::vector<std::int32_t> edges);
    const std::optional<Window>& window() const { return window_; }
    const std::optional<std::vector<std::int32_t>>& updatable() const { return updatable_; }

    void set_connectivity_mode(ConnectivityMode mode);
    ConnectivityMode connectivity_mode() const { return mode_; }

    StepReport step(RngStream& rng);
    // Applies a step with externally supplied randomness (for grand coupling).
    StepReport step_with(std::int64_t edge_index, double u);

    // True iff u and v are connected in (V, F \ {excluded_edge}).
    bool connected_excluding(int u, int v, std::int32_t excluded_edge);

  private:
    bool bfs_connected(int u, int v, std::int32_t excluded_edge);
    void rebuild_dsu();
    void apply_insert(std::int32_t e);
    void apply_remove(std::int32_t e);

    const Multigraph* g_;
    ChainParams params_;
    std::vector<char> member_;
    std::int64_t in_count_ = 0;
    std::int64_t steps_ = 0;
    std::int64_t rejected_ = 0;
    std::optional<Window> window_;
    std::optional<std::vector<std::int32_t>> updatable_;

    ConnectivityMode mode_ = ConnectivityMode::BfsOnDemand;
    std::vector<std::int32_t> dsu_parent_;
    std::int64_t dsu_deletions_ = 0;

    // Scratch for stamped bidirectional BFS (no per-query allocation).
    std::vector<std::int64_t> mark_a_, mark_b_;
    std::int64_t stamp_ = 0;
    std::vector<std::int32_t> frontier_a_, frontier_b_, next_frontier_;

    // Debug-mode consistency checks at exponentially spaced queries.
    std::int64_t query_count_ = 0;
    std::int64_t next_check_ = 1;
};

// One grand-coupling step: all chains receive the same edge index and the same
// uniform variate.  Chains must share the graph and the updatable domain.
// With shared randomness the update rule preserves inclusion (X subset of Y
// stays a subset) because a cut edge in the larger state is also cut in the
// smaller one and p_hat <= p.
std::vector<StepReport> grand_coupling_step(std::vector<RcChain*>& chains, RngStream& rng);

struct TraceRow {
    std::int64_t step = 0;
    std::int64_t f_size = 0;
    std::int32_t components = 0;
    std::int64_t largest = 0;
    int phase_label = -1;  // 0 = disordered window, 1 = ordered window, 2 = neither, -1 = n/a
};

struct ObserverConfig {
    std::int64_t stride = 0;   // 0 -> default n (one sweep)
    std::int64_t burn_in = -1; // -1 -> steps/2; marginal accumulation starts after burn_in
    std::vector<std::int32_t> marginal_edges;
    const PhaseProfile* profile = nullptr;  // enables phase labels on rows
};

struct Trace {
    std::int64_t steps = 0;
    std::int64_t burn_in = 0;
    std::vector<TraceRow> rows;
    std::vector<std::int32_t> marginal_edges;
    std::vector<std::int64_t> marginal_counts;
    std::int64_t marginal_samples = 0;
    std::int64_t applied = 0;
    std::int64_t rejected_by_restriction = 0;
    double marginal(std::size_t i) const {
        return marginal_samples ? static_cast<double>(marginal_counts[i]) / marginal_samples : 0.0;
    }
};

Trace run_chain(RcChain& chain, std::int64_t steps, RngStream& rng, const ObserverConfig& obs = {});

struct MarginalEstimate {
    double mean = 0;
    double stderr_ = 0;
    int replicas = 0;
};

enum class Boundary { Free, Wired };

// Per-edge inclusion probability under the random-cluster measure on the ball
// B_ell(v) with free or wired boundary, estimated by running the dynamics
// restricted to ball edges with every outside edge frozen (out for free, in
// for wired).  Each replica runs `steps` updates, uses the second half for
// accumulation, and gets its own substream; replicas can run in parallel.
MarginalEstimate ball_marginal(const Multigraph& g, ChainParams params, int v, int ell,
                               Boundary boundary, std::int32_t target_edge, std::int64_t steps,
                               int replicas, RngStream stream, int threads = 1);

}  // namespace rcpotts
