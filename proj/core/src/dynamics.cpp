#include "rcpotts/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace rcpotts {

ChainParams ChainParams::from_p(double q, double p) {
    if (!(q >= 1)) throw std::invalid_argument("chain needs q >= 1");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("chain needs p in [0,1]");
    ChainParams cp;
    cp.q = q;
    cp.p = p;
    cp.p_hat = p_hat_of_p(p, q);
    return cp;
}

ChainParams ChainParams::from_beta(double q, double beta) {
    if (!(beta > 0)) throw std::invalid_argument("chain needs beta > 0");
    return from_p(q, p_of_beta(beta));
}

Window dis_window(const PhaseProfile& profile, std::int64_t n) {
    return Window{0.0, profile.dis_window_hi(n)};
}

Window ord_window(const PhaseProfile& profile, std::int64_t n) {
    return Window{profile.ord_window_lo(n),
                  static_cast<double>(profile.d) * static_cast<double>(n)};  // above m = dn/2
}

RcChain::RcChain(const Multigraph& g, ChainParams params, InitState init)
    : RcChain(g, params,
              std::vector<char>(static_cast<std::size_t>(g.edge_count()),
                                init == InitState::AllIn ? 1 : 0)) {}

RcChain::RcChain(const Multigraph& g, ChainParams params, std::vector<char> member)
    : g_(&g), params_(params), member_(std::move(member)) {
    if (static_cast<std::int64_t>(member_.size()) != g.edge_count())
        throw std::invalid_argument("edge membership size mismatch");
    in_count_ = std::count(member_.begin(), member_.end(), char(1));
    mark_a_.assign(static_cast<std::size_t>(g.n()), 0);
    mark_b_.assign(static_cast<std::size_t>(g.n()), 0);
}

void RcChain::set_window(Window w) {
    if (!w.contains(in_count_))
        throw std::invalid_argument("current configuration lies outside the window");
    window_ = w;
}

void RcChain::set_updatable(std::vector<std::int32_t> edges) {
    if (edges.empty()) throw std::invalid_argument("updatable edge set must be nonempty");
    for (std::int32_t e : edges) {
        if (e < 0 || e >= g_->edge_count()) throw std::invalid_argument("updatable edge out of range");
    }
    updatable_ = std::move(edges);
}

void RcChain::set_connectivity_mode(ConnectivityMode mode) {
    mode_ = mode;
    if (mode_ == ConnectivityMode::LazyDsu) rebuild_dsu();
}

void RcChain::rebuild_dsu() {
    dsu_parent_.resize(static_cast<std::size_t>(g_->n()));
    std::iota(dsu_parent_.begin(), dsu_parent_.end(), 0);
    auto find = [&](std::int32_t x) {
        while (dsu_parent_[x] != x) {
            dsu_parent_[x] = dsu_parent_[dsu_parent_[x]];
            x = dsu_parent_[x];
        }
        return x;
    };
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(g_->edge_count()); ++id) {
        if (!member_[id]) continue;
        const Edge& e = g_->edge(id);
        const std::int32_t a = find(e.u), b = find(e.v);
        if (a != b) dsu_parent_[std::max(a, b)] = std::min(a, b);
    }
    dsu_deletions_ = 0;
}

bool RcChain::bfs_connected(int u, int v, std::int32_t excluded_edge) {
    if (u == v) return true;
    // Bidirectional BFS over the current configuration, skipping the excluded
    // edge.  Stamped marks avoid clearing arrays between queries.
    const std::int64_t s = ++stamp_;
    frontier_a_.clear();
    frontier_b_.clear();
    mark_a_[u] = s;
    mark_b_[v] = s;
    frontier_a_.push_back(u);
    frontier_b_.push_back(v);

    auto expand = [&](std::vector<std::int32_t>& frontier, std::vector<std::int64_t>& mine,
                      std::vector<std::int64_t>& theirs) -> int {
        next_frontier_.clear();
        for (std::int32_t x : frontier) {
            for (const auto& [w, id] : g_->incident(x)) {
                if (id == excluded_edge || !member_[id]) continue;
                if (theirs[w] == s) return 1;  // frontiers met
                if (mine[w] != s) {
                    mine[w] = s;
                    next_frontier_.push_back(w);
                }
            }
        }
        frontier.swap(next_frontier_);
        return frontier.empty() ? -1 : 0;
    };

    while (true) {
        // Expand the smaller frontier first.
        const bool a_side = frontier_a_.size() <= frontier_b_.size();
        const int r = a_side ? expand(frontier_a_, mark_a_, mark_b_)
                             : expand(frontier_b_, mark_b_, mark_a_);
        if (r == 1) return true;
        if (r == -1) return false;
    }
}

bool RcChain::connected_excluding(int u, int v, std::int32_t excluded_edge) {
    ++query_count_;
    bool result;
    if (mode_ == ConnectivityMode::LazyDsu && (excluded_edge < 0 || !member_[excluded_edge])) {
        // DSU only over-connects (deleted edges keep stale unions), so a
        // negative answer is exact; a positive one needs verification unless
        // no deletion happened since the last rebuild.
        auto find = [&](std::int32_t x) {
            while (dsu_parent_[x] != x) {
                dsu_parent_[x] = dsu_parent_[dsu_parent_[x]];
                x = dsu_parent_[x];
            }
            return x;
        };
        if (find(u) != find(v)) {
            result = false;
        } else if (dsu_deletions_ == 0) {
            result = true;
        } else {
            result = bfs_connected(u, v, excluded_edge);
        }
    } else {
        result = bfs_connected(u, v, excluded_edge);
    }
#ifndef NDEBUG
    if (query_count_ == next_check_) {
        next_check_ *= 2;
        // Independent single-source sweep.
        std::vector<char> seen(static_cast<std::size_t>(g_->n()), 0);
        std::vector<std::int32_t> stack{static_cast<std::int32_t>(u)};
        seen[u] = 1;
        bool reach = (u == v);
        while (!stack.empty() && !reach) {
            const std::int32_t x = stack.back();
            stack.pop_back();
            for (const auto& [w, id] : g_->incident(x)) {
                if (id == excluded_edge || !member_[id] || seen[w]) continue;
                seen[w] = 1;
                if (w == v) {
                    reach = true;
                    break;
                }
                stack.push_back(w);
            }
        }
        assert(reach == result && "connectivity fast path disagrees with plain BFS");
    }
#endif
    return result;
}

void RcChain::apply_insert(std::int32_t e) {
    member_[e] = 1;
    ++in_count_;
    if (mode_ == ConnectivityMode::LazyDsu) {
        auto find = [&](std::int32_t x) {
            while (dsu_parent_[x] != x) {
                dsu_parent_[x] = dsu_parent_[dsu_parent_[x]];
                x = dsu_parent_[x];
            }
            return x;
        };
        const Edge& ed = g_->edge(e);
        const std::int32_t a = find(ed.u), b = find(ed.v);
        if (a != b) dsu_parent_[std::max(a, b)] = std::min(a, b);
    }
}

void RcChain::apply_remove(std::int32_t e) {
    member_[e] = 0;
    --in_count_;
    if (mode_ == ConnectivityMode::LazyDsu) {
        ++dsu_deletions_;
        const auto threshold =
            static_cast<std::int64_t>(std::sqrt(static_cast<double>(g_->edge_count()))) + 1;
        if (dsu_deletions_ > threshold) rebuild_dsu();
    }
}

StepReport RcChain::step(RngStream& rng) {
    const std::int64_t domain = updatable_ ? static_cast<std::int64_t>(updatable_->size())
                                           : g_->edge_count();
    const std::int64_t idx = rng.uniform_int(domain);
    const double u = rng.uniform();
    return step_with(idx, u);
}

StepReport RcChain::step_with(std::int64_t edge_index, double u) {
    ++steps_;
    StepReport rep;
    const std::int32_t e = updatable_ ? (*updatable_)[static_cast<std::size_t>(edge_index)]
                                      : static_cast<std::int32_t>(edge_index);
    rep.edge = e;
    const Edge& ed = g_->edge(e);
    rep.was_cut = ed.is_loop() ? false : !connected_excluding(ed.u, ed.v, e);
    const double threshold = rep.was_cut ? params_.p_hat : params_.p;
    rep.proposed_in = u < threshold;

    const std::int64_t new_count = in_count_ - (member_[e] ? 1 : 0) + (rep.proposed_in ? 1 : 0);
    if (window_ && !window_->contains(new_count)) {
        ++rejected_;
        rep.applied = false;
        return rep;
    }
    rep.applied = true;
    if (rep.proposed_in && !member_[e]) {
        apply_insert(e);
    } else if (!rep.proposed_in && member_[e]) {
        apply_remove(e);
    }
    return rep;
}

std::vector<StepReport> grand_coupling_step(std::vector<RcChain*>& chains, RngStream& rng) {
    if (chains.empty()) throw std::invalid_argument("grand coupling needs at least one chain");
    const RcChain* first = chains.front();
    for (const RcChain* c : chains) {
        if (&c->graph() != &first->graph())
            throw std::invalid_argument("grand coupling requires a shared graph");
        const bool same_domain =
            (!c->updatable() && !first->updatable()) ||
            (c->updatable() && first->updatable() && *c->updatable() == *first->updatable());
        if (!same_domain)
            throw std::invalid_argument("grand coupling requires a shared updatable domain");
    }
    const std::int64_t domain = first->updatable()
                                    ? static_cast<std::int64_t>(first->updatable()->size())
                                    : first->graph().edge_count();
    const std::int64_t idx = rng.uniform_int(domain);
    const double u = rng.uniform();
    std::vector<StepReport> reports;
    reports.reserve(chains.size());
    for (RcChain* c : chains) reports.push_back(c->step_with(idx, u));
    return reports;
}

Trace run_chain(RcChain& chain, std::int64_t steps, RngStream& rng, const ObserverConfig& obs) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    Trace tr;
    tr.steps = steps;
    const std::int64_t stride = obs.stride > 0 ? obs.stride : std::max(1, chain.graph().n());
    tr.burn_in = obs.burn_in >= 0 ? obs.burn_in : steps / 2;
    tr.marginal_edges = obs.marginal_edges;
    tr.marginal_counts.assign(obs.marginal_edges.size(), 0);

    const std::int64_t rejected0 = chain.rejected_by_restriction();
    std::optional<Window> wdis, word;
    if (obs.profile) {
        wdis = dis_window(*obs.profile, chain.graph().n());
        word = ord_window(*obs.profile, chain.graph().n());
    }

    for (std::int64_t s = 1; s <= steps; ++s) {
        const StepReport rep = chain.step(rng);
        tr.applied += rep.applied ? 1 : 0;
        if (s > tr.burn_in && !tr.marginal_edges.empty()) {
            ++tr.marginal_samples;
            for (std::size_t i = 0; i < tr.marginal_edges.size(); ++i)
                tr.marginal_counts[i] += chain.member()[tr.marginal_edges[i]] ? 1 : 0;
        }
        if (s % stride == 0 || s == steps) {
            TraceRow row;
            row.step = s;
            row.f_size = chain.edge_in_count();
            const ComponentLabelling comp = components(chain.graph(), chain.member());
            row.components = comp.count;
            row.largest = comp.largest().second;
            if (obs.profile) {
                const bool in_dis = wdis->contains(row.f_size);
                const bool in_ord = word->contains(row.f_size);
                row.phase_label = in_dis ? 0 : (in_ord ? 1 : 2);
            }
            tr.rows.push_back(row);
        }
    }
    tr.rejected_by_restriction = chain.rejected_by_restriction() - rejected0;
    return tr;
}

MarginalEstimate ball_marginal(const Multigraph& g, ChainParams params, int v, int ell,
                               Boundary boundary, std::int32_t target_edge, std::int64_t steps,
                               int replicas, RngStream stream, int threads) {
    if (replicas < 1) throw std::invalid_argument("need at least one replica");
    const Ball b = ball(g, v, ell);
    if (std::find(b.edges.begin(), b.edges.end(), target_edge) == b.edges.end())
        throw std::invalid_argument("target edge must lie inside the ball");

    const char outside_state = boundary == Boundary::Wired ? 1 : 0;
    std::vector<double> estimates(static_cast<std::size_t>(replicas), 0.0);

    auto run_replica = [&](int r) {
        std::vector<char> member(static_cast<std::size_t>(g.edge_count()), outside_state);
        RcChain chain(g, params, std::move(member));
        chain.set_updatable(b.edges);
        RngStream rs = stream.substream("replica", static_cast<std::uint64_t>(r));
        const std::int64_t burn = steps / 2;
        std::int64_t hits = 0, samples = 0;
        for (std::int64_t s = 1; s <= steps; ++s) {
            chain.step(rs);
            if (s > burn) {
                ++samples;
                hits += chain.member()[target_edge] ? 1 : 0;
            }
        }
        estimates[static_cast<std::size_t>(r)] =
            samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
    };

    if (threads <= 1 || replicas == 1) {
        for (int r = 0; r < replicas; ++r) run_replica(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        const int workers = std::min(threads, replicas);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                int r;
                while ((r = next.fetch_add(1)) < replicas) run_replica(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    MarginalEstimate out;
    out.replicas = replicas;
    double sum = 0;
    for (double e : estimates) sum += e;
    out.mean = sum / replicas;
    if (replicas > 1) {
        double ss = 0;
        for (double e : estimates) ss += (e - out.mean) * (e - out.mean);
        out.stderr_ = std::sqrt(ss / (replicas - 1) / replicas);
    }
    return out;
}

}  // namespace rcpotts
