#include "rcpotts/diag.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace rcpotts {

int default_radius(std::int64_t n, int d) {
    if (n < 2 || d < 3) throw std::invalid_argument("radius default needs n >= 2, d >= 3");
    return static_cast<int>(std::floor(0.45 * std::log(static_cast<double>(n)) / std::log(d - 1.0)));
}

ShatterReport shatter_report(const Multigraph& g, const std::vector<char>& member, int v, int ell) {
    ShatterReport rep;
    rep.v = v;
    rep.ell = ell;

    const Ball b = ball(g, v, ell);
    std::vector<char> outside = member;
    for (std::int32_t id : b.edges) outside[static_cast<std::size_t>(id)] = 0;
    const ComponentLabelling comp = components(g, outside);

    rep.sphere_size = static_cast<std::int64_t>(b.sphere.size());
    std::vector<std::int32_t> labels;
    labels.reserve(b.sphere.size());
    for (std::int32_t s : b.sphere) labels.push_back(comp.label[static_cast<std::size_t>(s)]);
    std::sort(labels.begin(), labels.end());

    for (std::size_t i = 0; i < labels.size();) {
        std::size_t j = i;
        while (j < labels.size() && labels[j] == labels[i]) ++j;
        ++rep.components_hit;
        if (j - i >= 2) rep.nontrivial_components.emplace_back(labels[i], static_cast<std::int64_t>(j - i));
        i = j;
    }
    rep.k_min = rep.sphere_size - rep.components_hit;
    return rep;
}

WiredBoundaryReport wired_boundary(const Multigraph& g, const std::vector<char>& member, int v,
                                   int ell, std::int64_t path_budget) {
    WiredBoundaryReport rep;
    rep.v = v;
    rep.ell = ell;
    const int n = g.n();

    // Largest component C1 of (V - v, F minus v's edges); v itself stays a
    // singleton and is skipped when picking the largest.
    std::vector<char> mask_v = member;
    for (const auto& [w, id] : g.incident(v)) {
        (void)w;
        mask_v[static_cast<std::size_t>(id)] = 0;
    }
    const ComponentLabelling comp1 = components(g, mask_v);
    std::int32_t c1_label = -1;
    std::int64_t c1_size = 0;
    for (std::int32_t l = 0; l < n; ++l) {
        if (l == comp1.label[static_cast<std::size_t>(v)]) continue;
        const std::int64_t s = comp1.size_by_label[static_cast<std::size_t>(l)];
        if (s > c1_size) c1_size = s, c1_label = l;
    }
    std::vector<char> forbidden(static_cast<std::size_t>(n), 0);
    if (c1_label >= 0)
        for (std::int32_t u = 0; u < n; ++u)
            if (comp1.label[static_cast<std::size_t>(u)] == c1_label && u != v)
                forbidden[static_cast<std::size_t>(u)] = 1;

    bool avoiding = false;
    try {
        avoiding = exists_avoiding_path(g, v, ell, forbidden, path_budget);
    } catch (const BudgetExceeded&) {
        rep.budget_exceeded = true;
        return rep;
    }
    if (avoiding) return rep;  // counter-witness path; no boundary via this route
    rep.via_path_criterion = true;

    // Construction: reach set W of v in G - C1 to depth ell-1, then S = the C1
    // vertices adjacent to W.  Every escape path's first C1 vertex lands in S.
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> queue{static_cast<std::int32_t>(v)};
    dist[static_cast<std::size_t>(v)] = 0;
    std::vector<char> in_s(static_cast<std::size_t>(n), 0);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::int32_t x = queue[head];
        if (dist[static_cast<std::size_t>(x)] >= ell) continue;
        for (const auto& [w, id] : g.incident(x)) {
            (void)id;
            if (forbidden[static_cast<std::size_t>(w)]) {
                in_s[static_cast<std::size_t>(w)] = 1;
            } else if (dist[static_cast<std::size_t>(w)] < 0 &&
                       dist[static_cast<std::size_t>(x)] < ell - 1) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(x)] + 1;
                queue.push_back(w);
            }
        }
    }
    std::vector<std::int32_t> s_set;
    for (std::int32_t u = 0; u < n; ++u)
        if (in_s[static_cast<std::size_t>(u)]) s_set.push_back(u);

    // Direct verification of both defining conditions.
    // (1) the component of v in G - S stays inside the ball;
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> cv{static_cast<std::int32_t>(v)};
    visited[static_cast<std::size_t>(v)] = 1;
    const Ball b = ball(g, v, ell);
    bool cond1 = true;
    for (std::size_t head = 0; head < cv.size() && cond1; ++head) {
        for (const auto& [w, id] : g.incident(cv[head])) {
            (void)id;
            if (visited[static_cast<std::size_t>(w)] || in_s[static_cast<std::size_t>(w)]) continue;
            if (!b.contains(w)) {
                cond1 = false;
                break;
            }
            visited[static_cast<std::size_t>(w)] = 1;
            cv.push_back(w);
        }
    }
    if (!cond1) return rep;

    // (2) all of S shares one component of the F-subgraph avoiding V(C_v).
    std::vector<char> mask_far(member.size(), 0);
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(g.edge_count()); ++id) {
        if (!member[static_cast<std::size_t>(id)]) continue;
        const Edge& e = g.edge(id);
        if (!visited[static_cast<std::size_t>(e.u)] && !visited[static_cast<std::size_t>(e.v)])
            mask_far[static_cast<std::size_t>(id)] = 1;
    }
    const ComponentLabelling comp2 = components(g, mask_far);
    bool cond2 = true;
    for (std::size_t i = 1; i < s_set.size(); ++i)
        if (comp2.label[static_cast<std::size_t>(s_set[i])] !=
            comp2.label[static_cast<std::size_t>(s_set[0])])
            cond2 = false;
    if (!cond2) return rep;

    rep.exists = true;
    rep.witness = std::move(s_set);
    return rep;
}

MarginalEstimate restricted_marginal(const Multigraph& g, const PhaseProfile& profile,
                                     PhaseSide side, std::int32_t target_edge, std::int64_t steps,
                                     int replicas, RngStream stream, int threads) {
    if (replicas < 1) throw std::invalid_argument("need at least one replica");
    if (target_edge < 0 || target_edge >= g.edge_count())
        throw std::invalid_argument("target edge out of range");
    const ChainParams params = ChainParams::from_p(profile.q, profile.p);
    const Window w = side == PhaseSide::Disordered ? dis_window(profile, g.n())
                                                   : ord_window(profile, g.n());
    const InitState init = side == PhaseSide::Disordered ? InitState::AllOut : InitState::AllIn;

    std::vector<double> estimates(static_cast<std::size_t>(replicas), 0.0);
    auto run_replica = [&](int r) {
        RcChain chain(g, params, init);
        chain.set_window(w);
        RngStream rs = stream.substream("restricted", static_cast<std::uint64_t>(r));
        const std::int64_t burn = steps / 2;
        std::int64_t hits = 0, samples = 0;
        for (std::int64_t s = 1; s <= steps; ++s) {
            chain.step(rs);
            if (s > burn) {
                ++samples;
                hits += chain.member()[static_cast<std::size_t>(target_edge)] ? 1 : 0;
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
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                int r;
                while ((r = next.fetch_add(1)) < replicas) run_replica(r);
            });
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

WsmGapReport wsm_gap(const Multigraph& g, const PhaseProfile& profile, PhaseSide side, int v,
                     std::int32_t target_edge, int ell, const WsmBudgets& budgets,
                     RngStream stream) {
    const Edge& e = g.edge(target_edge);
    if (e.u != v && e.v != v) throw std::invalid_argument("target edge must be incident to v");

    WsmGapReport rep;
    rep.v = v;
    rep.target_edge = target_edge;
    rep.ell = ell;
    const ChainParams params = ChainParams::from_p(profile.q, profile.p);
    const Boundary boundary = side == PhaseSide::Disordered ? Boundary::Free : Boundary::Wired;
    rep.ball = ball_marginal(g, params, v, ell, boundary, target_edge, budgets.ball_steps,
                             budgets.replicas, stream.substream("ball"), budgets.threads);
    rep.full = restricted_marginal(g, profile, side, target_edge, budgets.full_steps,
                                   budgets.replicas, stream.substream("full"), budgets.threads);
    rep.gap = std::abs(rep.ball.mean - rep.full.mean);
    rep.stderr_ = std::hypot(rep.ball.stderr_, rep.full.stderr_);
    return rep;
}

PhaseOccupancy phase_occupancy(const Trace& trace) {
    PhaseOccupancy occ;
    std::int64_t dis = 0, ord = 0, neither = 0;
    for (const TraceRow& row : trace.rows) {
        if (row.step <= trace.burn_in || row.phase_label < 0) continue;
        ++occ.samples;
        if (row.phase_label == 0) ++dis;
        else if (row.phase_label == 1) ++ord;
        else ++neither;
    }
    if (occ.samples > 0) {
        occ.dis = static_cast<double>(dis) / static_cast<double>(occ.samples);
        occ.ord = static_cast<double>(ord) / static_cast<double>(occ.samples);
        occ.neither = static_cast<double>(neither) / static_cast<double>(occ.samples);
    }
    return occ;
}

CouplingReport coupling_time(const Multigraph& g, ChainParams params, std::int64_t t_max,
                             RngStream& rng) {
    CouplingReport rep;
    RcChain upper(g, params, InitState::AllIn);
    RcChain lower(g, params, InitState::AllOut);
    std::vector<RcChain*> chains{&upper, &lower};

    std::vector<char> differ(static_cast<std::size_t>(g.edge_count()), 1);
    std::int64_t diff = g.edge_count();
    if (diff == 0) {
        rep.coalesced = true;
        return rep;
    }
    for (std::int64_t t = 1; t <= t_max; ++t) {
        const auto reports = grand_coupling_step(chains, rng);
        const std::int32_t e = reports[0].edge;
        const bool now =
            upper.member()[static_cast<std::size_t>(e)] != lower.member()[static_cast<std::size_t>(e)];
        diff += (now ? 1 : 0) - (differ[static_cast<std::size_t>(e)] ? 1 : 0);
        differ[static_cast<std::size_t>(e)] = now ? 1 : 0;
        if (diff == 0) {
            rep.coalesced = true;
            rep.steps = t;
            return rep;
        }
    }
    rep.steps = t_max;
    rep.final_diff = diff;
    return rep;
}

}  // namespace rcpotts
