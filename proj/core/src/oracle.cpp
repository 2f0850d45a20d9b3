#include "rcpotts/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rcpotts/phase.hpp"

namespace rcpotts {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum exp(x_i)) with Kahan compensation on the mantissa sum.
double log_sum_exp(const std::vector<double>& xs) {
    double hi = kNegInf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == kNegInf) return kNegInf;
    double sum = 0, carry = 0;
    for (double x : xs) {
        if (x == kNegInf) continue;
        const double term = std::exp(x - hi) - carry;
        const double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return hi + std::log(sum);
}

void normalize(ExactDistribution& dist) {
    dist.log_z = log_sum_exp(dist.log_weight);
    dist.prob.resize(dist.log_weight.size());
    for (std::size_t i = 0; i < dist.log_weight.size(); ++i)
        dist.prob[i] = std::exp(dist.log_weight[i] - dist.log_z);
}

int component_count(int n, const Multigraph& g, std::uint32_t mask, int excluded_edge = -1) {
    std::vector<std::int32_t> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::int32_t x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    int comps = n;
    for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
        if (e == excluded_edge || !(mask >> e & 1u)) continue;
        const Edge& ed = g.edge(e);
        if (ed.is_loop()) continue;
        const std::int32_t a = find(ed.u), b = find(ed.v);
        if (a != b) {
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            --comps;
        }
    }
    return comps;
}

bool subset_connected(int n, const Multigraph& g, std::uint32_t mask, int u, int v,
                      int excluded_edge) {
    std::vector<std::int32_t> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::int32_t x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
        if (e == excluded_edge || !(mask >> e & 1u)) continue;
        const Edge& ed = g.edge(e);
        if (ed.is_loop()) continue;
        const std::int32_t a = find(ed.u), b = find(ed.v);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    return find(u) == find(v);
}

}  // namespace

ExactDistribution exact_potts(const Multigraph& g, int q, double beta) {
    if (q < 1) throw std::invalid_argument("potts needs q >= 1");
    const int n = g.n();
    double states_d = 1;
    for (int v = 0; v < n; ++v) {
        states_d *= q;
        if (states_d > 1e7) throw std::invalid_argument("potts enumeration too large (q^n > 1e7)");
    }
    const std::int64_t states = static_cast<std::int64_t>(states_d);

    ExactDistribution dist;
    dist.log_weight.resize(static_cast<std::size_t>(states));
    std::vector<int> colour(static_cast<std::size_t>(n), 0);  // 0-based digits
    for (std::int64_t idx = 0; idx < states; ++idx) {
        std::int64_t mono = 0;
        for (const Edge& e : g.edges())
            if (colour[static_cast<std::size_t>(e.u)] == colour[static_cast<std::size_t>(e.v)])
                ++mono;
        dist.log_weight[static_cast<std::size_t>(idx)] = beta * static_cast<double>(mono);
        for (int v = 0; v < n; ++v) {
            if (++colour[static_cast<std::size_t>(v)] < q) break;
            colour[static_cast<std::size_t>(v)] = 0;
        }
    }
    normalize(dist);

    dist.marginals.assign(static_cast<std::size_t>(n) * q, 0.0);
    std::fill(colour.begin(), colour.end(), 0);
    for (std::int64_t idx = 0; idx < states; ++idx) {
        for (int v = 0; v < n; ++v)
            dist.marginals[static_cast<std::size_t>(v) * q + colour[static_cast<std::size_t>(v)]] +=
                dist.prob[static_cast<std::size_t>(idx)];
        for (int v = 0; v < n; ++v) {
            if (++colour[static_cast<std::size_t>(v)] < q) break;
            colour[static_cast<std::size_t>(v)] = 0;
        }
    }
    return dist;
}

ExactDistribution exact_rc(const Multigraph& g, double q, double p) {
    if (!(q > 0)) throw std::invalid_argument("rc needs q > 0");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("rc needs p in [0,1]");
    const int m = static_cast<int>(g.edge_count());
    if (m > 23) throw std::invalid_argument("rc enumeration too large (2^m > 1e7)");
    const std::int64_t states = std::int64_t{1} << m;

    const double log_q = std::log(q);
    const double log_p = p > 0 ? std::log(p) : kNegInf;
    const double log_1p = p < 1 ? std::log1p(-p) : kNegInf;

    ExactDistribution dist;
    dist.log_weight.resize(static_cast<std::size_t>(states));
    for (std::int64_t mask = 0; mask < states; ++mask) {
        const int in = std::popcount(static_cast<std::uint64_t>(mask));
        const int comps = component_count(g.n(), g, static_cast<std::uint32_t>(mask));
        double lw = comps * log_q;
        lw += in > 0 ? in * log_p : 0.0;
        lw += (m - in) > 0 ? (m - in) * log_1p : 0.0;
        if ((in > 0 && log_p == kNegInf) || (m - in > 0 && log_1p == kNegInf)) lw = kNegInf;
        dist.log_weight[static_cast<std::size_t>(mask)] = lw;
    }
    normalize(dist);

    dist.marginals.assign(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t mask = 0; mask < states; ++mask)
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1)
                dist.marginals[static_cast<std::size_t>(e)] += dist.prob[static_cast<std::size_t>(mask)];
    return dist;
}

double exact_tv(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("tv distance needs a common support");
    double sum = 0, carry = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double term = std::abs(a[i] - b[i]) - carry;
        const double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return sum / 2;
}

std::vector<double> histogram_to_distribution(const std::vector<std::int64_t>& counts) {
    const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    if (total <= 0) throw std::invalid_argument("empty histogram");
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        out[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return out;
}

std::vector<int> potts_config_of_index(std::int64_t index, int n, int q) {
    std::vector<int> colour(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        colour[static_cast<std::size_t>(v)] = static_cast<int>(index % q) + 1;
        index /= q;
    }
    return colour;
}

std::vector<double> es_pushforward(const Multigraph& g, int q, double beta) {
    const int m = static_cast<int>(g.edge_count());
    if (m > 23) throw std::invalid_argument("pushforward too large (2^m > 1e7)");
    const ExactDistribution potts = exact_potts(g, q, beta);
    const double p = p_of_beta(beta);

    std::vector<double> out(std::size_t{1} << m, 0.0);
    const int n = g.n();
    std::vector<int> colour(static_cast<std::size_t>(n), 0);
    const std::int64_t states = static_cast<std::int64_t>(potts.prob.size());
    for (std::int64_t idx = 0; idx < states; ++idx) {
        std::uint32_t mono = 0;
        for (int e = 0; e < m; ++e) {
            const Edge& ed = g.edge(e);
            if (colour[static_cast<std::size_t>(ed.u)] == colour[static_cast<std::size_t>(ed.v)])
                mono |= 1u << e;
        }
        const double mu = potts.prob[static_cast<std::size_t>(idx)];
        const int k = std::popcount(mono);
        // All subsets of the monochromatic edges, percolated independently.
        std::uint32_t sub = mono;
        while (true) {
            const int in = std::popcount(sub);
            out[sub] += mu * std::pow(p, in) * std::pow(1 - p, k - in);
            if (sub == 0) break;
            sub = (sub - 1) & mono;
        }
        for (int v = 0; v < n; ++v) {
            if (++colour[static_cast<std::size_t>(v)] < q) break;
            colour[static_cast<std::size_t>(v)] = 0;
        }
    }
    return out;
}

TransitionCheckReport exact_transition_check(const Multigraph& g, double q, double p) {
    const int m = static_cast<int>(g.edge_count());
    if (m > 14) throw std::invalid_argument("transition check too large (2^m > 2^14)");
    const std::int64_t states = std::int64_t{1} << m;
    const double p_hat = p_hat_of_p(p, q);

    const ExactDistribution rc = exact_rc(g, q, p);
    TransitionCheckReport rep;
    rep.states = states;

    // thr[mask][e]: inclusion probability of e proposed from state `mask`.
    // The cut status of e ignores e itself, so it is shared by mask and
    // mask^e; transitions are built on the fly from it.
    auto threshold = [&](std::int64_t mask, int e) {
        const Edge& ed = g.edge(e);
        if (ed.is_loop()) return p;
        const bool cut =
            !subset_connected(g.n(), g, static_cast<std::uint32_t>(mask), ed.u, ed.v, e);
        return cut ? p_hat : p;
    };

    std::vector<double> pi_p(static_cast<std::size_t>(states), 0.0);
    for (std::int64_t mask = 0; mask < states; ++mask) {
        const double pi = rc.prob[static_cast<std::size_t>(mask)];
        for (int e = 0; e < m; ++e) {
            const double thr = threshold(mask, e);
            const std::int64_t with = mask | (std::int64_t{1} << e);
            const std::int64_t without = mask & ~(std::int64_t{1} << e);
            pi_p[static_cast<std::size_t>(with)] += pi * thr / m;
            pi_p[static_cast<std::size_t>(without)] += pi * (1 - thr) / m;
        }
    }
    for (std::int64_t mask = 0; mask < states; ++mask)
        rep.stationarity_residual =
            std::max(rep.stationarity_residual,
                     std::abs(pi_p[static_cast<std::size_t>(mask)] - rc.prob[static_cast<std::size_t>(mask)]));

    // Detailed balance across every single-edge flip.
    for (std::int64_t mask = 0; mask < states; ++mask) {
        for (int e = 0; e < m; ++e) {
            if (mask >> e & 1) continue;  // count each unordered pair once
            const std::int64_t with = mask | (std::int64_t{1} << e);
            const double thr = threshold(mask, e);
            const double forward = rc.prob[static_cast<std::size_t>(mask)] * thr / m;
            const double backward = rc.prob[static_cast<std::size_t>(with)] * (1 - thr) / m;
            rep.detailed_balance_residual =
                std::max(rep.detailed_balance_residual, std::abs(forward - backward));
        }
    }

    // Irreducibility: a flip is traversable both ways iff its inclusion
    // probability is strictly inside (0,1) (it is shared by the two states),
    // so strong connectivity reduces to reachability over such flips.
    std::vector<char> reach(static_cast<std::size_t>(states), 0);
    std::vector<std::int64_t> stack{0};
    reach[0] = 1;
    std::int64_t seen = 1;
    while (!stack.empty()) {
        const std::int64_t mask = stack.back();
        stack.pop_back();
        for (int e = 0; e < m; ++e) {
            const double thr = threshold(mask, e);
            if (!(thr > 0 && thr < 1)) continue;
            const std::int64_t to = mask ^ (std::int64_t{1} << e);
            if (!reach[static_cast<std::size_t>(to)]) {
                reach[static_cast<std::size_t>(to)] = 1;
                ++seen;
                stack.push_back(to);
            }
        }
    }
    rep.irreducible = seen == states;
    return rep;
}

double pairing_count(int k) {
    if (k % 2 != 0 || k < 0) throw std::invalid_argument("pairings need an even point count");
    double out = 1;
    for (int i = k - 1; i >= 1; i -= 2) out *= i;
    return out;
}

namespace {

void pairing_rec(std::vector<std::int32_t>& pairing, int k,
                 const std::function<void(const std::vector<std::int32_t>&)>& visit) {
    int first = -1;
    for (int i = 0; i < k; ++i)
        if (pairing[static_cast<std::size_t>(i)] < 0) {
            first = i;
            break;
        }
    if (first < 0) {
        visit(pairing);
        return;
    }
    for (int j = first + 1; j < k; ++j) {
        if (pairing[static_cast<std::size_t>(j)] >= 0) continue;
        pairing[static_cast<std::size_t>(first)] = j;
        pairing[static_cast<std::size_t>(j)] = first;
        pairing_rec(pairing, k, visit);
        pairing[static_cast<std::size_t>(first)] = -1;
        pairing[static_cast<std::size_t>(j)] = -1;
    }
}

}  // namespace

void for_each_pairing(int k, const std::function<void(const std::vector<std::int32_t>&)>& visit) {
    if (k % 2 != 0 || k < 0) throw std::invalid_argument("pairings need an even point count");
    std::vector<std::int32_t> pairing(static_cast<std::size_t>(k), -1);
    pairing_rec(pairing, k, visit);
}

}  // namespace rcpotts
