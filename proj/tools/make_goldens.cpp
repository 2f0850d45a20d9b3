// Regenerates the fixture graphs and their golden random-cluster weight
// tables under data/.  Log weights are evaluated in long double and written
// with the shortest round-trip formatter, so reruns are byte-identical.
//
// Usage: make_goldens [data_dir]

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rcpotts/graph.hpp"
#include "rcpotts/io.hpp"
#include "rcpotts/version.hpp"

namespace fs = std::filesystem;
using namespace rcpotts;

namespace {

Multigraph from_edges(int n, int degree_cap, const std::vector<std::pair<int, int>>& edges) {
    std::ostringstream os;
    os << n << ' ' << degree_cap << ' ' << edges.size() << '\n';
    for (std::size_t i = 0; i < edges.size(); ++i)
        os << i << ' ' << edges[i].first << ' ' << edges[i].second << '\n';
    std::istringstream is(os.str());
    return read_graph(is);
}

struct Fixture {
    std::string name;
    Multigraph graph;
};

std::vector<Fixture> fixture_set() {
    std::vector<Fixture> out;
    out.push_back({"single_edge", from_edges(2, 1, {{0, 1}})});
    out.push_back({"self_loop", from_edges(1, 2, {{0, 0}})});
    out.push_back({"parallel2", from_edges(2, 2, {{0, 1}, {0, 1}})});
    out.push_back({"path3", from_edges(4, 2, {{0, 1}, {1, 2}, {2, 3}})});
    out.push_back({"triangle", from_edges(3, 2, {{0, 1}, {1, 2}, {0, 2}})});
    out.push_back({"k4", from_edges(4, 3, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})});
    out.push_back({"cycle6", from_edges(6, 2,
                                        {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}})});
    // 8-edge subgraph of the Petersen graph: the outer 5-cycle plus three spokes.
    out.push_back({"petersen8", from_edges(8, 3,
                                           {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},
                                            {0, 5}, {1, 6}, {2, 7}})});
    return out;
}

std::string golden_name(const std::string& fixture, int q, double p) {
    std::string ps = p == 0.3 ? "03" : p == 0.7 ? "07" : "xx";
    return fixture + "_q" + std::to_string(q) + "_p" + ps + ".csv";
}

// Unnormalized log pi(F) = c(F) ln q + |F| ln p + (|E|-|F|) ln(1-p), evaluated
// in long double and narrowed at the end.
void write_golden(const fs::path& path, const std::string& fixture, const Multigraph& g, int q,
                  double p) {
    const int m = static_cast<int>(g.edge_count());
    const long double lq = std::log(static_cast<long double>(q));
    const long double lp = std::log(static_cast<long double>(p));
    const long double l1p = std::log(1.0L - static_cast<long double>(p));

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    CsvWriter csv(out);
    csv.key_value("version", kVersion);
    csv.key_value("fixture", fixture);
    csv.key_value("q", static_cast<std::int64_t>(q));
    csv.key_value("p", p);
    csv.key_value("edges", static_cast<std::int64_t>(m));
    csv.row("index", "log_weight");

    std::vector<Edge> subset;
    for (std::int64_t mask = 0; mask < (std::int64_t{1} << m); ++mask) {
        subset.clear();
        int k = 0;
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) {
                subset.push_back(g.edge(e));
                ++k;
            }
        const int c = components(g.n(), subset).count;
        const long double lw = c * lq + k * lp + (m - k) * l1p;
        csv.row(mask, static_cast<double>(lw));
    }
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path data = argc > 1 ? fs::path(argv[1]) : fs::path("data");
    fs::create_directories(data / "fixtures");
    fs::create_directories(data / "golden");

    for (const Fixture& fx : fixture_set()) {
        const fs::path gpath = data / "fixtures" / (fx.name + ".graph");
        std::ofstream gout(gpath);
        write_graph(gout, fx.graph);
        gout.close();
        for (int q : {2, 3})
            for (double p : {0.3, 0.7})
                write_golden(data / "golden" / golden_name(fx.name, q, p), fx.name, fx.graph, q,
                             p);
        std::cout << fx.name << ": n=" << fx.graph.n() << " m=" << fx.graph.edge_count() << '\n';
    }
    std::cout << "wrote fixtures and goldens under " << data << '\n';
    return 0;
}
