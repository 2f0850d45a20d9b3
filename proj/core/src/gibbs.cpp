#include "rcpotts/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace rcpotts {

SpinConfig make_spin_config(const Multigraph& g, std::vector<std::int32_t> colour, int q) {
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    if (static_cast<int>(colour.size()) != g.n()) throw std::invalid_argument("colour size mismatch");
    SpinConfig spin;
    spin.q = q;
    spin.colour = std::move(colour);
    spin.class_count.assign(static_cast<std::size_t>(q) + 1, 0);
    for (int v = 0; v < g.n(); ++v) {
        const int c = spin.colour[v];
        if (c < 1 || c > q) throw std::invalid_argument("colour out of range");
        ++spin.class_count[c];
    }
    spin.mono = 0;
    for (const Edge& e : g.edges()) {
        if (spin.colour[e.u] == spin.colour[e.v]) ++spin.mono;
    }
    return spin;
}

double potts_log_weight(const SpinConfig& spin, double beta) {
    if (!(beta >= 0)) throw std::invalid_argument("beta must be >= 0");
    return beta * static_cast<double>(spin.mono);
}

void recolour(const Multigraph& g, SpinConfig& spin, int v, int new_colour) {
    if (new_colour < 1 || new_colour > spin.q) throw std::invalid_argument("colour out of range");
    const int old = spin.colour[v];
    if (old == new_colour) return;
    for (const auto& [w, id] : g.incident(v)) {
        (void)id;
        if (w == v) continue;  // self-loops stay monochromatic under any recolouring
        if (spin.colour[w] == old) --spin.mono;
        if (spin.colour[w] == new_colour) ++spin.mono;
    }
    --spin.class_count[old];
    ++spin.class_count[new_colour];
    spin.colour[v] = new_colour;
}

ColourStats colour_stats(const Multigraph& g, const SpinConfig& spin) {
    ColourStats st;
    st.q = spin.q;
    st.half_edges = 2 * g.edge_count();
    st.class_count = spin.class_count;
    st.pair_count.assign(static_cast<std::size_t>(spin.q) + 1,
                         std::vector<std::int64_t>(static_cast<std::size_t>(spin.q) + 1, 0));
    for (const Edge& e : g.edges()) {
        const int ci = spin.colour[e.u];
        const int cj = spin.colour[e.v];
        st.pair_count[ci][cj] += 1;
        st.pair_count[cj][ci] += 1;  // i == j (incl. self-loops): diagonal gets 2
    }
    st.nu.assign(static_cast<std::size_t>(spin.q) + 1, 0.0);
    const double n = static_cast<double>(spin.colour.size());
    for (int c = 1; c <= spin.q; ++c) st.nu[c] = static_cast<double>(st.class_count[c]) / n;
    st.rho.assign(static_cast<std::size_t>(spin.q) + 1,
                  std::vector<double>(static_cast<std::size_t>(spin.q) + 1, 0.0));
    if (st.half_edges > 0) {
        for (int i = 1; i <= spin.q; ++i)
            for (int j = 1; j <= spin.q; ++j)
                st.rho[i][j] = static_cast<double>(st.pair_count[i][j]) /
                               static_cast<double>(st.half_edges);
    }
    return st;
}

PhaseMembership phase_membership(const std::vector<double>& nu_empirical,
                                 const PhaseProfile& profile, double theta) {
    const int q = profile.q;
    if (static_cast<int>(nu_empirical.size()) != q)
        throw std::invalid_argument("nu_empirical must have q entries");
    if (!(theta > 0)) throw std::invalid_argument("theta must be > 0");

    PhaseMembership out;
    out.dis_distance = 0;
    for (double x : nu_empirical) out.dis_distance += std::abs(x - 1.0 / q);

    if (profile.ordered) {
        const double a = profile.ordered->nu1;
        // L1 separation between nu_dis and any relabelling of nu_ord is 2(a - 1/q);
        // ambiguity is impossible only when theta is below half of that.
        const double separation = 2 * (a - 1.0 / q);
        if (theta >= separation / 2)
            throw std::invalid_argument("theta too large: membership would be ambiguous");

        const double other = profile.ordered->nu_other;
        double sum_abs_other = 0;
        for (double x : nu_empirical) sum_abs_other += std::abs(x - other);
        out.ord_distance = std::numeric_limits<double>::infinity();
        for (int c = 0; c < q; ++c) {
            const double dist =
                sum_abs_other - std::abs(nu_empirical[c] - other) + std::abs(nu_empirical[c] - a);
            if (dist < out.ord_distance) {
                out.ord_distance = dist;
                out.dominant_colour = c + 1;
            }
        }
    } else {
        out.ord_distance = std::numeric_limits<double>::infinity();
    }

    if (out.dis_distance <= theta) {
        out.label = PhaseLabel::Disordered;
        out.dominant_colour = 0;
    } else if (out.ord_distance <= theta) {
        out.label = PhaseLabel::OrderedDominant;
    } else {
        out.label = PhaseLabel::Neither;
        out.dominant_colour = 0;
    }
    return out;
}

std::vector<char> percolate(const Multigraph& g, const SpinConfig& spin, double p,
                            RngStream& rng) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p must be in [0,1]");
    std::vector<char> member(static_cast<std::size_t>(g.edge_count()), 0);
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(g.edge_count()); ++id) {
        const Edge& e = g.edge(id);
        if (spin.colour[e.u] == spin.colour[e.v] && rng.bernoulli(p)) member[id] = 1;
    }
    return member;
}

SpinConfig colour_components(const Multigraph& g, const std::vector<char>& edge_member, int q,
                             RngStream& rng) {
    const ComponentLabelling comp = components(g, edge_member);
    std::vector<std::int32_t> colour_of_label(static_cast<std::size_t>(g.n()), 0);
    // Assign colours in canonical label order so the result depends only on the
    // stream state, not on traversal details.
    for (int l = 0; l < g.n(); ++l) {
        if (comp.size_by_label[l] > 0)
            colour_of_label[l] = static_cast<std::int32_t>(rng.uniform_int(q)) + 1;
    }
    std::vector<std::int32_t> colour(static_cast<std::size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v) colour[v] = colour_of_label[comp.label[v]];
    return make_spin_config(g, std::move(colour), q);
}

void write_spins(std::ostream& out, const SpinConfig& spin) {
    out << spin.colour.size() << ' ' << spin.q << '\n';
    for (std::int32_t c : spin.colour) out << c << '\n';
}

SpinConfig read_spins(std::istream& in, const Multigraph& g) {
    std::int64_t n = 0;
    int q = 0;
    if (!(in >> n >> q)) throw std::invalid_argument("bad spin header");
    if (n != g.n()) throw std::invalid_argument("spin count does not match graph");
    std::vector<std::int32_t> colour(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        if (!(in >> colour[static_cast<std::size_t>(i)])) throw std::invalid_argument("bad spin line");
    }
    return make_spin_config(g, std::move(colour), q);
}

void write_spins_file(const std::string& path, const SpinConfig& spin) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    write_spins(out, spin);
}

}  // namespace rcpotts
