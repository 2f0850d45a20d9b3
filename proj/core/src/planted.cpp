#include "rcpotts/planted.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fstream>

#include "json.hpp"
#include "rcpotts/io.hpp"

namespace rcpotts {

std::int64_t PlantedSpec::row_sum(int i) const {
    const auto& row = blocks[static_cast<std::size_t>(i)];
    return std::accumulate(row.begin(), row.end(), std::int64_t{0});
}

void PlantedSpec::validate() const {
    if (q < 1 || d < 1 || n < 1) throw std::invalid_argument("planted spec needs q,d,n >= 1");
    if ((n * d) % 2 != 0) throw std::invalid_argument("planted spec needs n*d even");
    if (static_cast<int>(class_sizes.size()) != q)
        throw std::invalid_argument("class size vector has wrong length");
    std::int64_t total = 0;
    for (std::int64_t s : class_sizes) {
        if (s < 0) throw std::invalid_argument("negative class size");
        total += s;
    }
    if (total != n) throw std::invalid_argument("class sizes must sum to n");
    if (static_cast<int>(blocks.size()) != q)
        throw std::invalid_argument("block matrix has wrong shape");
    for (int i = 0; i < q; ++i) {
        if (static_cast<int>(blocks[i].size()) != q)
            throw std::invalid_argument("block matrix has wrong shape");
        for (int j = 0; j < q; ++j) {
            if (blocks[i][j] < 0) throw std::invalid_argument("negative block count");
            if (blocks[i][j] != blocks[j][i])
                throw std::invalid_argument("block matrix must be symmetric");
        }
        if (blocks[i][i] % 2 != 0) throw std::invalid_argument("diagonal block counts must be even");
        if (row_sum(i) != d * class_sizes[i])
            throw std::invalid_argument("block row sum must equal d * class size");
    }
}

std::string PlantedSpec::to_json() const {
    nlohmann::json j;
    j["q"] = q;
    j["d"] = d;
    j["n"] = n;
    j["class_sizes"] = class_sizes;
    j["blocks"] = blocks;
    return j.dump(2);
}

PlantedSpec PlantedSpec::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    PlantedSpec spec;
    spec.q = j.at("q").get<int>();
    spec.d = j.at("d").get<int>();
    spec.n = j.at("n").get<std::int64_t>();
    spec.class_sizes = j.at("class_sizes").get<std::vector<std::int64_t>>();
    spec.blocks = j.at("blocks").get<std::vector<std::vector<std::int64_t>>>();
    spec.validate();
    return spec;
}

namespace {

// Largest-remainder rounding of total * weights to integers summing to total.
std::vector<std::int64_t> apportion(std::int64_t total, const std::vector<double>& weights) {
    const int k = static_cast<int>(weights.size());
    std::vector<std::int64_t> out(k);
    std::vector<std::pair<double, int>> rema(k);
    std::int64_t assigned = 0;
    for (int i = 0; i < k; ++i) {
        const double target = static_cast<double>(total) * weights[i];
        out[i] = static_cast<std::int64_t>(std::floor(target));
        rema[i] = {target - std::floor(target), i};
        assigned += out[i];
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::int64_t r = 0; r < total - assigned; ++r) ++out[rema[static_cast<std::size_t>(r)].second];
    return out;
}

}  // namespace

PlantedSpec make_planted_spec(int q, int d, std::int64_t n, const std::vector<double>& nu,
                              const std::vector<std::vector<double>>& rho) {
    if (q < 1 || d < 1 || n < 1) throw std::invalid_argument("planted spec needs q,d,n >= 1");
    if ((n * d) % 2 != 0) throw std::invalid_argument("planted spec needs n*d even");
    if (static_cast<int>(nu.size()) != q || static_cast<int>(rho.size()) != q)
        throw std::invalid_argument("profile has wrong shape");

    PlantedSpec spec;
    spec.q = q;
    spec.d = d;
    spec.n = n;
    spec.class_sizes = apportion(n, nu);

    // Round block targets; the diagonal is rounded in pairs so it stays even.
    const double half_edges = static_cast<double>(n) * d;
    spec.blocks.assign(static_cast<std::size_t>(q), std::vector<std::int64_t>(static_cast<std::size_t>(q), 0));
    for (int i = 0; i < q; ++i) {
        spec.blocks[i][i] = 2 * std::llround(half_edges * rho[i][i] / 2.0);
        for (int j = i + 1; j < q; ++j) {
            const std::int64_t v = std::llround(half_edges * (rho[i][j] + rho[j][i]) / 2.0);
            spec.blocks[i][j] = v;
            spec.blocks[j][i] = v;
        }
    }

    // Deterministic repair: walk the row sums back to d*n_i while preserving
    // symmetry and diagonal parity.  Deficits are O(q) for any sane profile, so
    // the loop is short; a hard cap guards against degenerate inputs.
    auto deficit = [&](int i) { return d * spec.class_sizes[static_cast<std::size_t>(i)] - spec.row_sum(i); };
    const int cap = 1000 + 100 * q * q;
    for (int iter = 0; iter < cap; ++iter) {
        int pos = -1, neg = -1;
        std::int64_t dpos = 0, dneg = 0;
        for (int i = 0; i < q; ++i) {
            const std::int64_t di = deficit(i);
            if (di > dpos) dpos = di, pos = i;
            if (di < dneg) dneg = di, neg = i;
        }
        if (pos < 0 && neg < 0) break;

        if (pos >= 0 && neg >= 0) {
            // Transfer one half-edge slot from an over-full row to an
            // under-full one through a third class when possible.
            int via = -1;
            std::int64_t best = 0;
            for (int j = 0; j < q; ++j) {
                if (j == pos || j == neg) continue;
                if (spec.blocks[neg][j] > best) best = spec.blocks[neg][j], via = j;
            }
            if (via >= 0) {
                --spec.blocks[neg][via];
                --spec.blocks[via][neg];
                ++spec.blocks[pos][via];
                ++spec.blocks[via][pos];
            } else if (spec.blocks[neg][neg] >= 2) {
                spec.blocks[neg][neg] -= 2;
            } else if (spec.blocks[neg][pos] >= 1 && deficit(neg) <= -1 && deficit(pos) >= 1) {
                // Last resort: shrink the shared block (moves both toward zero
                // only when the negative row dominates), then regrow elsewhere.
                --spec.blocks[neg][pos];
                --spec.blocks[pos][neg];
            } else {
                throw std::runtime_error("block repair failed for this profile");
            }
        } else if (pos >= 0) {
            // All deficits nonnegative: add mass.  Prefer pairing two
            // positive rows; otherwise the deficit is even, grow the diagonal.
            int other = -1;
            for (int j = 0; j < q; ++j)
                if (j != pos && deficit(j) > 0) other = j;
            if (other >= 0) {
                ++spec.blocks[pos][other];
                ++spec.blocks[other][pos];
            } else {
                spec.blocks[pos][pos] += 2;
            }
        } else {
            // All deficits nonpositive: remove mass.
            int other = -1;
            for (int j = 0; j < q; ++j)
                if (j != neg && deficit(j) < 0 && spec.blocks[neg][j] >= 1) other = j;
            if (other >= 0) {
                --spec.blocks[neg][other];
                --spec.blocks[other][neg];
            } else if (spec.blocks[neg][neg] >= 2) {
                spec.blocks[neg][neg] -= 2;
            } else {
                throw std::runtime_error("block repair failed for this profile");
            }
        }
    }
    spec.validate();
    return spec;
}

PlantedSpec planted_spec_ordered(int q, int d, std::int64_t n, double beta) {
    const PhaseProfile profile = phase_profile(q, d, beta);
    if (!profile.ordered)
        throw std::invalid_argument("ordered profile undefined below the uniqueness threshold");
    return make_planted_spec(q, d, n, nu_ord_vector(profile), rho_ord_matrix(profile));
}

PlantedSpec planted_spec_disordered(int q, int d, std::int64_t n, double beta) {
    return make_planted_spec(q, d, n, nu_dis_vector(q), rho_dis_matrix(q, beta));
}

PlantedSample sample_planted(const PlantedSpec& spec, RngStream& rng) {
    spec.validate();
    const int q = spec.q, d = spec.d;
    const std::int64_t n = spec.n;

    // Colouring: shuffle the class multiset.
    std::vector<int> colours;
    colours.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < q; ++c)
        colours.insert(colours.end(), static_cast<std::size_t>(spec.class_sizes[c]), c + 1);
    rng.shuffle(colours);

    // Per-class half-edge lists, shuffled, then split into block buckets; a
    // uniform split plus uniform within-bucket matching is a uniform pairing
    // realizing the block counts.
    std::vector<std::vector<std::int32_t>> class_halves(static_cast<std::size_t>(q));
    for (std::int64_t v = 0; v < n; ++v) {
        auto& list = class_halves[static_cast<std::size_t>(colours[static_cast<std::size_t>(v)] - 1)];
        for (int s = 0; s < d; ++s) list.push_back(static_cast<std::int32_t>(v * d + s));
    }
    for (auto& list : class_halves) rng.shuffle(list);

    std::vector<std::int32_t> pairing(static_cast<std::size_t>(n * d), -1);
    std::vector<std::size_t> cursor(static_cast<std::size_t>(q), 0);
    auto take = [&](int c, std::int64_t count) {
        auto& list = class_halves[static_cast<std::size_t>(c)];
        auto& cur = cursor[static_cast<std::size_t>(c)];
        std::vector<std::int32_t> out(list.begin() + static_cast<std::ptrdiff_t>(cur),
                                      list.begin() + static_cast<std::ptrdiff_t>(cur + static_cast<std::size_t>(count)));
        cur += static_cast<std::size_t>(count);
        return out;
    };
    for (int i = 0; i < q; ++i) {
        // Within-class bucket: consecutive pairs of a shuffled list.
        std::vector<std::int32_t> bucket = take(i, spec.blocks[i][i]);
        for (std::size_t k = 0; k + 1 < bucket.size(); k += 2) {
            pairing[static_cast<std::size_t>(bucket[k])] = bucket[k + 1];
            pairing[static_cast<std::size_t>(bucket[k + 1])] = bucket[k];
        }
        for (int j = i + 1; j < q; ++j) {
            std::vector<std::int32_t> side_i = take(i, spec.blocks[i][j]);
            std::vector<std::int32_t> side_j = take(j, spec.blocks[j][i]);
            for (std::size_t k = 0; k < side_i.size(); ++k) {
                pairing[static_cast<std::size_t>(side_i[k])] = side_j[k];
                pairing[static_cast<std::size_t>(side_j[k])] = side_i[k];
            }
        }
    }
    for (int c = 0; c < q; ++c) assert(cursor[static_cast<std::size_t>(c)] == class_halves[static_cast<std::size_t>(c)].size());

    std::vector<std::int32_t> degree_seq(static_cast<std::size_t>(n), static_cast<std::int32_t>(d));
    return PlantedSample{Multigraph(std::move(degree_seq), std::move(pairing), d), std::move(colours)};
}

LazyPlantedGraph::LazyPlantedGraph(const PlantedSpec& spec, RngStream& rng) : spec_(spec) {
    spec_.validate();
    const int q = spec_.q, d = spec_.d;
    const std::int64_t n = spec_.n;

    std::vector<int> shuffled;
    shuffled.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < q; ++c)
        shuffled.insert(shuffled.end(), static_cast<std::size_t>(spec_.class_sizes[c]), c + 1);
    rng.shuffle(shuffled);
    colours_ = std::move(shuffled);

    partner_.assign(static_cast<std::size_t>(n * d), -1);
    m_ = spec_.blocks;
    pool_.assign(static_cast<std::size_t>(q), {});
    pool_pos_.assign(static_cast<std::size_t>(n * d), -1);
    for (std::int64_t v = 0; v < n; ++v) {
        auto& pool = pool_[static_cast<std::size_t>(colours_[static_cast<std::size_t>(v)] - 1)];
        for (int s = 0; s < d; ++s) {
            const std::int64_t h = v * d + s;
            pool_pos_[static_cast<std::size_t>(h)] = static_cast<std::int64_t>(pool.size());
            pool.push_back(h);
        }
    }
}

void LazyPlantedGraph::remove_from_pool(std::int64_t h) {
    auto& pool = pool_[static_cast<std::size_t>(colours_[static_cast<std::size_t>(vertex_of(h))] - 1)];
    const std::int64_t pos = pool_pos_[static_cast<std::size_t>(h)];
    assert(pos >= 0 && pool[static_cast<std::size_t>(pos)] == h);
    pool[static_cast<std::size_t>(pos)] = pool.back();
    pool_pos_[static_cast<std::size_t>(pool.back())] = pos;
    pool.pop_back();
    pool_pos_[static_cast<std::size_t>(h)] = -1;
}

std::int64_t LazyPlantedGraph::reveal(std::int64_t h, RngStream& rng) {
    if (revealed(h)) return partner_[static_cast<std::size_t>(h)];
    const int i = colours_[static_cast<std::size_t>(vertex_of(h))];
    auto& row = m_[static_cast<std::size_t>(i - 1)];

    // Partner class j is chosen with probability proportional to the
    // remaining block budget; conditioned on the class, the partner is
    // uniform over that class's unmatched half-edges.  This matches the
    // conditional law of the uniform pairing given the revealed prefix, so
    // adaptive reveal orders still produce the planted distribution.
    const std::int64_t total = std::accumulate(row.begin(), row.end(), std::int64_t{0});
    assert(total == static_cast<std::int64_t>(pool_[static_cast<std::size_t>(i - 1)].size()));
    std::int64_t r = rng.uniform_int(total);
    int j = 0;
    while (r >= row[static_cast<std::size_t>(j)]) r -= row[static_cast<std::size_t>(j)], ++j;

    remove_from_pool(h);
    auto& pool = pool_[static_cast<std::size_t>(j)];
    const std::int64_t pick = rng.uniform_int(static_cast<std::int64_t>(pool.size()));
    const std::int64_t hp = pool[static_cast<std::size_t>(pick)];
    remove_from_pool(hp);

    if (j + 1 == i) {
        row[static_cast<std::size_t>(j)] -= 2;
    } else {
        row[static_cast<std::size_t>(j)] -= 1;
        m_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i - 1)] -= 1;
    }
    partner_[static_cast<std::size_t>(h)] = hp;
    partner_[static_cast<std::size_t>(hp)] = h;
    ++revealed_pairs_;
    return hp;
}

Multigraph LazyPlantedGraph::finish(RngStream& rng) {
    for (std::int64_t h = 0; h < static_cast<std::int64_t>(partner_.size()); ++h)
        if (!revealed(h)) reveal(h, rng);
    std::vector<std::int32_t> pairing(partner_.size());
    for (std::size_t h = 0; h < partner_.size(); ++h)
        pairing[h] = static_cast<std::int32_t>(partner_[h]);
    std::vector<std::int32_t> degree_seq(static_cast<std::size_t>(spec_.n),
                                         static_cast<std::int32_t>(spec_.d));
    return Multigraph(std::move(degree_seq), std::move(pairing), spec_.d);
}

RevealedBall reveal_ball(LazyPlantedGraph& g, std::int64_t v, int radius, RngStream& rng) {
    RevealedBall out;
    out.center = v;
    out.radius = radius;
    std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
    dist[static_cast<std::size_t>(v)] = 0;
    out.vertices.push_back(v);
    std::size_t head = 0;
    while (head < out.vertices.size()) {
        const std::int64_t x = out.vertices[head++];
        const int dx = dist[static_cast<std::size_t>(x)];
        if (dx >= radius) continue;
        for (int s = 0; s < g.d(); ++s) {
            const std::int64_t h = g.half_edge(x, s);
            const bool fresh = !g.revealed(h);
            const std::int64_t hp = g.reveal(h, rng);
            const std::int64_t w = g.vertex_of(hp);
            if (fresh) out.edges.emplace_back(x, w);
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dx + 1;
                out.vertices.push_back(w);
            }
        }
    }
    return out;
}

int exploration_time_cap(std::int64_t n, double eps) {
    if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2)");
    return static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.5 - eps)));
}

std::int64_t exploration_collision_cap(double eps) {
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    return static_cast<std::int64_t>(std::ceil(10.0 / eps));
}

ExplorationReport explore_shattering(LazyPlantedGraph& g, std::int64_t v, int ell, double p,
                                     int t_cap, std::int64_t k_cap, RngStream& rng,
                                     bool record_steps) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p must lie in [0,1]");
    ExplorationReport rep;
    rep.start_vertex = v;
    rep.ell = ell;
    rep.t_cap = t_cap;

    const int d = g.d();
    const std::int64_t n = g.n();

    // Condition on the ball: reveal everything within distance ell up front.
    // Those matches never reappear below (reveal() is idempotent), which is
    // exactly the conditioning -- only edges matched after this point carry a
    // percolation coin.  Interior vertices end up fully matched, so every
    // later match lands on the sphere or beyond and is a fresh outside edge.
    reveal_ball(g, v, ell, rng);

    // Union-find over kept (monochromatic, coin-survived) edges; at the end
    // the sphere splits into its outside percolation components.
    std::vector<std::int64_t> dsu_parent(static_cast<std::size_t>(n));
    std::iota(dsu_parent.begin(), dsu_parent.end(), std::int64_t{0});
    auto dsu_find = [&](std::int64_t x) {
        while (dsu_parent[static_cast<std::size_t>(x)] != x) {
            dsu_parent[static_cast<std::size_t>(x)] =
                dsu_parent[static_cast<std::size_t>(dsu_parent[static_cast<std::size_t>(x)])];
            x = dsu_parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto dsu_union = [&](std::int64_t a, std::int64_t b) {
        dsu_parent[static_cast<std::size_t>(dsu_find(a))] = dsu_find(b);
    };

    // Unmatched-half-edge counts for vertices we track (ever-active ones);
    // -1 marks untracked vertices.
    std::vector<int> unmatched(static_cast<std::size_t>(n), -1);
    auto track = [&](std::int64_t u) {
        int c = 0;
        for (int r = 0; r < d; ++r)
            if (!g.revealed(g.half_edge(u, r))) ++c;
        unmatched[static_cast<std::size_t>(u)] = c;
        return c;
    };

    // Active vertex queue with lazy deletion; ever_active implements the set
    // A_{<=t} for collision counting.
    std::vector<std::int64_t> active;
    std::vector<char> in_active(static_cast<std::size_t>(n), 0);
    std::vector<char> ever_active(static_cast<std::size_t>(n), 0);
    std::size_t head = 0;
    std::int64_t live = 0;
    auto activate = [&](std::int64_t u) {
        ever_active[static_cast<std::size_t>(u)] = 1;
        ++rep.activated_vertices;
        if (unmatched[static_cast<std::size_t>(u)] < 0) track(u);
        if (unmatched[static_cast<std::size_t>(u)] > 0 && !in_active[static_cast<std::size_t>(u)]) {
            in_active[static_cast<std::size_t>(u)] = 1;
            active.push_back(u);
            ++live;
        }
    };
    auto drop_if_exhausted = [&](std::int64_t u) {
        if (in_active[static_cast<std::size_t>(u)] && unmatched[static_cast<std::size_t>(u)] == 0) {
            in_active[static_cast<std::size_t>(u)] = 0;  // removed lazily from the queue
            --live;
        }
    };
    // A match consumes one half-edge at each endpoint.
    auto consume = [&](std::int64_t u) {
        if (unmatched[static_cast<std::size_t>(u)] >= 0) {
            --unmatched[static_cast<std::size_t>(u)];
            drop_if_exhausted(u);
        }
    };

    // A_0 = the sphere.
    std::vector<std::int64_t> sphere;
    {
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        dist[static_cast<std::size_t>(v)] = 0;
        std::vector<std::int64_t> order{v};
        for (std::size_t i = 0; i < order.size(); ++i) {
            const std::int64_t x = order[i];
            if (dist[static_cast<std::size_t>(x)] >= ell) continue;
            for (int r = 0; r < d; ++r) {
                const std::int64_t w = g.vertex_of(g.partner(g.half_edge(x, r)));
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(x)] + 1;
                    order.push_back(w);
                }
            }
        }
        for (std::int64_t u : order)
            if (dist[static_cast<std::size_t>(u)] == ell) sphere.push_back(u);
    }
    rep.sphere_size = static_cast<std::int64_t>(sphere.size());
    for (std::int64_t u : sphere) activate(u);

    std::int64_t filler_cursor = 0;
    const std::int64_t total_halves = n * d;
    int t = 0;
    bool cap_recorded = false;
    auto note_cap = [&] {
        if (!cap_recorded && t >= t_cap) {
            rep.active_at_cap = live;
            cap_recorded = true;
        }
    };
    note_cap();

    while (live > 0 || t < t_cap) {
        if (live == 0) {
            // Idle step: match some unexplored pair to advance the clock;
            // nothing can activate because every ever-active vertex is
            // already fully matched here, so these edges cannot touch a
            // sphere component either.
            while (filler_cursor < total_halves && g.revealed(filler_cursor)) ++filler_cursor;
            if (filler_cursor >= total_halves) break;
            const std::int64_t h = filler_cursor;
            const std::int64_t hp = g.reveal(h, rng);
            consume(g.vertex_of(h));
            consume(g.vertex_of(hp));
            ++t;
            if (record_steps)
                rep.steps.push_back({t, h, g.vertex_of(hp),
                                     g.colour(g.vertex_of(h)) == g.colour(g.vertex_of(hp)), false,
                                     false, 0});
            note_cap();
            continue;
        }

        while (!in_active[static_cast<std::size_t>(active[head])]) ++head;
        const std::int64_t w = active[head];
        for (int r = 0; r < d; ++r) {
            const std::int64_t h = g.half_edge(w, r);
            if (g.revealed(h)) continue;
            const std::int64_t hp = g.reveal(h, rng);
            const std::int64_t z = g.vertex_of(hp);
            ++t;
            consume(w);
            consume(z);

            const bool collision = ever_active[static_cast<std::size_t>(z)] != 0;
            if (collision) ++rep.collisions;
            const bool mono = g.colour(w) == g.colour(z);
            bool survived = false;
            if (mono && rng.bernoulli(p)) {
                survived = true;
                ++rep.survivals;
                dsu_union(w, z);
                if (!ever_active[static_cast<std::size_t>(z)]) activate(z);
            }
            if (record_steps) rep.steps.push_back({t, h, z, mono, survived, collision, live});
            note_cap();
        }
        // w is fully matched now; the queue flag clears via consume().
    }
    if (!cap_recorded) rep.active_at_cap = live;  // ran out of half-edges first

    rep.steps_used = t;
    rep.terminated = live == 0;
    rep.k_observed = rep.collisions;
    rep.shattered = rep.terminated && rep.active_at_cap == 0 && rep.k_observed <= k_cap;

    std::vector<std::int64_t> roots;
    roots.reserve(sphere.size());
    for (std::int64_t u : sphere) roots.push_back(dsu_find(u));
    std::sort(roots.begin(), roots.end());
    rep.sphere_components =
        static_cast<std::int64_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
    return rep;
}

void write_exploration_csv(const std::string& path, const ExplorationReport& rep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    CsvWriter csv(out);
    csv.key_value("start_vertex", rep.start_vertex);
    csv.key_value("ell", std::int64_t{rep.ell});
    csv.key_value("t_cap", std::int64_t{rep.t_cap});
    csv.key_value("sphere_size", rep.sphere_size);
    csv.key_value("steps_used", rep.steps_used);
    csv.key_value("k_observed", rep.k_observed);
    csv.key_value("sphere_components", rep.sphere_components);
    csv.key_value("shattered", std::int64_t{rep.shattered ? 1 : 0});
    csv.row("t", "half_edge", "partner_vertex", "same_colour", "survived", "one_t", "one_t_prime",
            "active_after");
    for (const auto& s : rep.steps)
        csv.row(s.t, s.half_edge, s.partner_vertex, int(s.same_colour), int(s.survived),
                int(s.collision), int(s.survived), s.active_after);
}

}  // namespace rcpotts
