#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcpotts/rng.hpp"

namespace rcpotts {

// Thrown when a bounded search exhausts its work budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    std::int32_t u = -1;
    std::int32_t v = -1;
    bool is_loop() const { return u == v; }
};

// Undirected multigraph produced by half-edge pairing.  Self-loops and
// parallel edges are kept as-is.  Half-edges are indexed contiguously per
// vertex: half-edge h belongs to vertex_of(h), slot h - offset(vertex).
// pairing[h] is the partner half-edge or -1 if unmatched (exact-edge model
// leaves leftovers unmatched).
class Multigraph {
  public:
    Multigraph() = default;
    // Builds edge list (ids assigned by ascending smaller half-edge index) and
    // adjacency from a pairing.  degree_cap is the nominal degree written to
    // the serialized header (== degree for regular graphs).
    Multigraph(std::vector<std::int32_t> degree_seq, std::vector<std::int32_t> pairing,
               int degree_cap);
    // Same, but with edge ids dictated by the caller (deserialization keeps
    // file order).  The edge list must contain exactly the matched pairs.
    Multigraph(std::vector<std::int32_t> degree_seq, std::vector<std::int32_t> pairing,
               int degree_cap, std::vector<Edge> edges_in_order);

    int n() const { return static_cast<int>(degree_seq_.size()); }
    int degree_cap() const { return degree_cap_; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(std::int32_t id) const { return edges_[static_cast<std::size_t>(id)]; }
    const std::vector<std::int32_t>& degree_seq() const { return degree_seq_; }
    int degree(int v) const { return degree_seq_[static_cast<std::size_t>(v)]; }

    std::int64_t half_edge_count() const { return static_cast<std::int64_t>(pairing_.size()); }
    std::int64_t half_edge_offset(int v) const { return offsets_[static_cast<std::size_t>(v)]; }
    int vertex_of_half_edge(std::int64_t h) const;
    std::int32_t pairing_of(std::int64_t h) const { return pairing_[static_cast<std::size_t>(h)]; }
    const std::vector<std::int32_t>& pairing() const { return pairing_; }
    std::vector<std::pair<std::int32_t, std::int32_t>> free_half_edges() const;  // (vertex, slot)

    // Incident (neighbour, edge id) pairs; a self-loop appears once.
    const std::vector<std::pair<std::int32_t, std::int32_t>>& incident(int v) const {
        return adj_[static_cast<std::size_t>(v)];
    }

  private:
    std::vector<std::int32_t> degree_seq_;
    std::vector<std::int64_t> offsets_;
    std::vector<std::int32_t> pairing_;
    int degree_cap_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> adj_;
};

// Uniform pairing of n*d half-edges (n*d must be even).  Self-loops and
// multi-edges are kept: the sampler is the plain configuration model.
Multigraph sample_configuration_model(int n, int d, RngStream& rng);

// Uniformly choose 2m half-edges out of sum(degree_seq), then a uniform
// perfect matching on the chosen set.  Unmatched half-edges are recorded.
Multigraph sample_exact_edge_model(const std::vector<std::int32_t>& degree_seq, std::int64_t m,
                                   RngStream& rng);

struct Ball {
    int center = -1;
    int radius = 0;
    std::vector<std::int32_t> vertices;  // BFS order, center first
    std::vector<std::int32_t> distance;  // aligned with vertices
    std::vector<std::int32_t> edges;     // ids of edges induced on the vertex set
    std::vector<std::int32_t> sphere;    // vertices at distance exactly radius
    std::int64_t excess = 0;             // |edges| - |vertices| + (#components of the ball)
    bool is_tree() const { return excess == 0; }
    bool contains(int v) const;

  private:
    friend Ball ball(const Multigraph&, int, int);
    std::vector<char> member_;
};

// Induced subgraph on vertices within distance `radius` of v.  A self-loop at
// the center contributes an induced edge (it lies inside the ball) but does
// not extend distances.
Ball ball(const Multigraph& g, int v, int radius);

struct ComponentLabelling {
    int count = 0;
    std::vector<std::int32_t> label;  // label[v] = smallest vertex id in v's component
    std::vector<std::int64_t> size_by_label;  // size_by_label[l] nonzero iff l is a label
    std::pair<std::int32_t, std::int64_t> largest() const;  // (label, size); ties -> smaller label
};

// Connected components of (V, edge subset).  Labels are canonical (min vertex
// id), hence independent of edge order.
ComponentLabelling components(int n, const std::vector<Edge>& edges);
ComponentLabelling components(const Multigraph& g, const std::vector<char>& edge_member);

// True iff a simple path with exactly `length` edges starts at v and avoids
// `forbidden` vertices entirely (v included: forbidden v => false; length 0 =>
// true when v is allowed).  Depth-first search over vertex-distinct paths with
// a hard budget on visited states.
bool exists_avoiding_path(const Multigraph& g, int v, int length,
                          const std::vector<char>& forbidden,
                          std::int64_t budget = 10'000'000);

// Text serialization.
//   line 1:            n d m
//   next m lines:      id u v     (ascending id)
//   optional sentinel: #free      followed by "vertex slot" lines
void write_graph(std::ostream& out, const Multigraph& g);
Multigraph read_graph(std::istream& in);
void write_graph_file(const std::string& path, const Multigraph& g);
Multigraph read_graph_file(const std::string& path);

}  // namespace rcpotts
