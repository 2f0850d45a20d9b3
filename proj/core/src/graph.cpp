#include "rcpotts/graph.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace rcpotts {

Multigraph::Multigraph(std::vector<std::int32_t> degree_seq, std::vector<std::int32_t> pairing,
                       int degree_cap)
    : degree_seq_(std::move(degree_seq)), pairing_(std::move(pairing)), degree_cap_(degree_cap) {
    const int n = static_cast<int>(degree_seq_.size());
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v) {
        if (degree_seq_[v] < 0) throw std::invalid_argument("negative degree");
        offsets_[v + 1] = offsets_[v] + degree_seq_[v];
    }
    if (static_cast<std::int64_t>(pairing_.size()) != offsets_[n])
        throw std::invalid_argument("pairing size does not match degree sequence");

    for (std::int64_t h = 0; h < static_cast<std::int64_t>(pairing_.size()); ++h) {
        const std::int32_t p = pairing_[h];
        if (p == -1) continue;
        if (p < 0 || p >= static_cast<std::int32_t>(pairing_.size()) || p == h ||
            pairing_[p] != static_cast<std::int32_t>(h))
            throw std::invalid_argument("pairing is not an involution");
    }

    adj_.assign(static_cast<std::size_t>(n), {});
    for (std::int64_t h = 0; h < static_cast<std::int64_t>(pairing_.size()); ++h) {
        const std::int32_t p = pairing_[h];
        if (p == -1 || p < h) continue;  // one edge per matched pair
        const int u = vertex_of_half_edge(h);
        const int v = vertex_of_half_edge(p);
        const std::int32_t id = static_cast<std::int32_t>(edges_.size());
        edges_.push_back(Edge{static_cast<std::int32_t>(u), static_cast<std::int32_t>(v)});
        adj_[u].emplace_back(v, id);
        if (u != v) adj_[v].emplace_back(u, id);
    }
}

Multigraph::Multigraph(std::vector<std::int32_t> degree_seq, std::vector<std::int32_t> pairing,
                       int degree_cap, std::vector<Edge> edges_in_order)
    : Multigraph(std::move(degree_seq), std::move(pairing), degree_cap) {
    if (edges_in_order.size() != edges_.size())
        throw std::invalid_argument("explicit edge list size does not match pairing");
    for (const Edge& e : edges_in_order) {
        if (e.u < 0 || e.u >= n() || e.v < 0 || e.v >= n())
            throw std::invalid_argument("explicit edge endpoint out of range");
    }
    edges_ = std::move(edges_in_order);
    adj_.assign(static_cast<std::size_t>(n()), {});
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(edges_.size()); ++id) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        adj_[e.u].emplace_back(e.v, id);
        if (e.u != e.v) adj_[e.v].emplace_back(e.u, id);
    }
}

int Multigraph::vertex_of_half_edge(std::int64_t h) const {
    assert(h >= 0 && h < static_cast<std::int64_t>(pairing_.size()));
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), h);
    return static_cast<int>(it - offsets_.begin()) - 1;
}

std::vector<std::pair<std::int32_t, std::int32_t>> Multigraph::free_half_edges() const {
    std::vector<std::pair<std::int32_t, std::int32_t>> out;
    for (int v = 0; v < n(); ++v) {
        for (std::int32_t s = 0; s < degree_seq_[v]; ++s) {
            if (pairing_[offsets_[v] + s] == -1)
                out.emplace_back(static_cast<std::int32_t>(v), s);
        }
    }
    return out;
}

Multigraph sample_configuration_model(int n, int d, RngStream& rng) {
    if (n <= 0 || d <= 0) throw std::invalid_argument("configuration model needs n,d >= 1");
    const std::int64_t total = static_cast<std::int64_t>(n) * d;
    if (total % 2 != 0) throw std::invalid_argument("configuration model needs n*d even");

    std::vector<std::int32_t> perm(static_cast<std::size_t>(total));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    std::vector<std::int32_t> pairing(static_cast<std::size_t>(total), -1);
    for (std::int64_t i = 0; i < total; i += 2) {
        pairing[perm[i]] = perm[i + 1];
        pairing[perm[i + 1]] = perm[i];
    }
    return Multigraph(std::vector<std::int32_t>(static_cast<std::size_t>(n), d),
                      std::move(pairing), d);
}

Multigraph sample_exact_edge_model(const std::vector<std::int32_t>& degree_seq, std::int64_t m,
                                   RngStream& rng) {
    std::int64_t total = 0;
    for (auto d : degree_seq) {
        if (d < 0) throw std::invalid_argument("negative degree");
        total += d;
    }
    if (m < 0 || 2 * m > total) throw std::invalid_argument("exact edge model needs 0 <= 2m <= sum(degrees)");

    // A single uniform permutation yields both a uniform 2m-subset (its prefix)
    // and, within the prefix, a uniform perfect matching (consecutive pairs).
    std::vector<std::int32_t> perm(static_cast<std::size_t>(total));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    std::vector<std::int32_t> pairing(static_cast<std::size_t>(total), -1);
    for (std::int64_t i = 0; i < 2 * m; i += 2) {
        pairing[perm[i]] = perm[i + 1];
        pairing[perm[i + 1]] = perm[i];
    }
    const int cap = degree_seq.empty() ? 0 : *std::max_element(degree_seq.begin(), degree_seq.end());
    return Multigraph(degree_seq, std::move(pairing), cap);
}

bool Ball::contains(int v) const {
    return v >= 0 && v < static_cast<int>(member_.size()) && member_[static_cast<std::size_t>(v)];
}

Ball ball(const Multigraph& g, int v, int radius) {
    if (v < 0 || v >= g.n()) throw std::invalid_argument("ball center out of range");
    if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");

    Ball b;
    b.center = v;
    b.radius = radius;
    b.member_.assign(static_cast<std::size_t>(g.n()), 0);

    std::vector<std::int32_t> dist(static_cast<std::size_t>(g.n()), -1);
    std::deque<std::int32_t> queue;
    dist[v] = 0;
    queue.push_back(v);
    while (!queue.empty()) {
        const std::int32_t u = queue.front();
        queue.pop_front();
        b.vertices.push_back(u);
        b.distance.push_back(dist[u]);
        b.member_[u] = 1;
        if (dist[u] == radius) {
            b.sphere.push_back(u);
            continue;
        }
        for (const auto& [w, id] : g.incident(u)) {
            (void)id;
            if (dist[w] == -1) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }

    for (std::int32_t id = 0; id < static_cast<std::int32_t>(g.edge_count()); ++id) {
        const Edge& e = g.edge(id);
        if (b.member_[e.u] && b.member_[e.v]) b.edges.push_back(id);
    }
    // The ball is connected by construction, so the component count is 1; kept
    // in the formula so excess stays meaningful for degenerate inputs.
    b.excess = static_cast<std::int64_t>(b.edges.size()) -
               static_cast<std::int64_t>(b.vertices.size()) + 1;
    return b;
}

namespace {

struct Dsu {
    std::vector<std::int32_t> parent;
    explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::int32_t find(std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;  // smaller id is the root, so labels are canonical
    }
};

ComponentLabelling finish_labelling(Dsu& dsu, int n) {
    ComponentLabelling c;
    c.label.assign(static_cast<std::size_t>(n), 0);
    c.size_by_label.assign(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        const std::int32_t l = dsu.find(v);
        c.label[v] = l;
        if (c.size_by_label[l]++ == 0) ++c.count;
    }
    return c;
}

}  // namespace

std::pair<std::int32_t, std::int64_t> ComponentLabelling::largest() const {
    std::int32_t best = -1;
    std::int64_t best_size = 0;
    for (std::int32_t l = 0; l < static_cast<std::int32_t>(size_by_label.size()); ++l) {
        if (size_by_label[l] > best_size) {
            best = l;
            best_size = size_by_label[l];
        }
    }
    return {best, best_size};
}

ComponentLabelling components(int n, const std::vector<Edge>& edges) {
    Dsu dsu(n);
    for (const Edge& e : edges) dsu.unite(e.u, e.v);
    return finish_labelling(dsu, n);
}

ComponentLabelling components(const Multigraph& g, const std::vector<char>& edge_member) {
    if (static_cast<std::int64_t>(edge_member.size()) != g.edge_count())
        throw std::invalid_argument("edge membership size mismatch");
    Dsu dsu(g.n());
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(g.edge_count()); ++id) {
        if (edge_member[id]) dsu.unite(g.edge(id).u, g.edge(id).v);
    }
    return finish_labelling(dsu, g.n());
}

namespace {

bool avoiding_path_dfs(const Multigraph& g, int u, int remaining,
                       std::vector<char>& blocked, std::int64_t& budget) {
    if (remaining == 0) return true;
    if (--budget <= 0) throw BudgetExceeded("path search budget exceeded");
    for (const auto& [w, id] : g.incident(u)) {
        (void)id;
        if (blocked[w]) continue;  // covers forbidden vertices and the current path
        blocked[w] = 1;
        const bool found = avoiding_path_dfs(g, w, remaining - 1, blocked, budget);
        blocked[w] = 0;
        if (found) return true;
    }
    return false;
}

}  // namespace

bool exists_avoiding_path(const Multigraph& g, int v, int length,
                          const std::vector<char>& forbidden, std::int64_t budget) {
    if (v < 0 || v >= g.n()) throw std::invalid_argument("path start out of range");
    if (length < 0) throw std::invalid_argument("path length must be >= 0");
    if (static_cast<int>(forbidden.size()) != g.n())
        throw std::invalid_argument("forbidden mask size mismatch");
    if (forbidden[v]) return false;
    if (length == 0) return true;

    std::vector<char> blocked(forbidden.begin(), forbidden.end());
    blocked[v] = 1;
    return avoiding_path_dfs(g, v, length, blocked, budget);
}

void write_graph(std::ostream& out, const Multigraph& g) {
    out << g.n() << ' ' << g.degree_cap() << ' ' << g.edge_count() << '\n';
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(g.edge_count()); ++id) {
        const Edge& e = g.edge(id);
        out << id << ' ' << e.u << ' ' << e.v << '\n';
    }
    const auto free = g.free_half_edges();
    if (!free.empty()) {
        out << "#free\n";
        for (const auto& [v, s] : free) out << v << ' ' << s << '\n';
    }
}

Multigraph read_graph(std::istream& in) {
    int n = 0, d = 0;
    std::int64_t m = 0;
    if (!(in >> n >> d >> m)) throw std::invalid_argument("bad graph header");
    if (n < 0 || d < 0 || m < 0) throw std::invalid_argument("bad graph header values");

    std::vector<Edge> edges(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        std::int64_t id = 0;
        std::int32_t u = 0, v = 0;
        if (!(in >> id >> u >> v)) throw std::invalid_argument("bad edge line");
        if (id != i) throw std::invalid_argument("edge ids must be 0..m-1 in order");
        if (u < 0 || u >= n || v < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
        edges[static_cast<std::size_t>(i)] = Edge{u, v};
    }

    std::vector<std::pair<std::int32_t, std::int32_t>> free;
    std::string tok;
    if (in >> tok) {
        if (tok != "#free") throw std::invalid_argument("unexpected trailing content in graph file");
        std::int32_t v = 0, s = 0;
        while (in >> v >> s) free.emplace_back(v, s);
    }

    // Rebuild a half-edge layout.  Degree = edge incidences plus declared free
    // slots; the (vertex, slot) lines pin down exactly which slots stay
    // unmatched, so write(read(x)) reproduces x byte for byte.  Matched slots
    // are consumed in edge-id order, which preserves edge ids.
    std::vector<std::int32_t> degree_seq(static_cast<std::size_t>(n), 0);
    for (const Edge& e : edges) {
        degree_seq[e.u] += 1;
        degree_seq[e.v] += 1;  // a self-loop consumes two slots of the same vertex
    }
    for (const auto& [v, s] : free) {
        if (v < 0 || v >= n || s < 0) throw std::invalid_argument("bad free half-edge");
        degree_seq[v] += 1;
    }
    for (const auto& [v, s] : free) {
        if (s >= degree_seq[v]) throw std::invalid_argument("free slot index out of range");
    }

    std::vector<std::int64_t> offsets(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + degree_seq[v];

    std::vector<char> is_free(static_cast<std::size_t>(offsets[n]), 0);
    for (const auto& [v, s] : free) {
        const std::int64_t h = offsets[v] + s;
        if (is_free[h]) throw std::invalid_argument("duplicate free half-edge");
        is_free[h] = 1;
    }

    std::vector<std::int64_t> cursor(offsets.begin(), offsets.end() - 1);
    auto next_slot = [&](int v) {
        std::int64_t h = cursor[v];
        while (h < offsets[v + 1] && is_free[h]) ++h;
        if (h >= offsets[v + 1]) throw std::invalid_argument("vertex has no slot left for edge");
        cursor[v] = h + 1;
        return h;
    };

    std::vector<std::int32_t> pairing(static_cast<std::size_t>(offsets[n]), -1);
    for (const Edge& e : edges) {
        const std::int64_t h1 = next_slot(e.u);
        const std::int64_t h2 = next_slot(e.v);
        pairing[h1] = static_cast<std::int32_t>(h2);
        pairing[h2] = static_cast<std::int32_t>(h1);
    }
    return Multigraph(std::move(degree_seq), std::move(pairing), d, std::move(edges));
}

void write_graph_file(const std::string& path, const Multigraph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    write_graph(out, g);
}

Multigraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    return read_graph(in);
}

}  // namespace rcpotts
