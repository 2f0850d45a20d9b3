#pragma once

#include <array>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "rcpotts/graph.hpp"

namespace testutil {

inline std::string data_dir() { return RCPOTTS_DATA_DIR; }

inline rcpotts::Multigraph load_fixture(const std::string& name) {
    return rcpotts::read_graph_file(data_dir() + "/fixtures/" + name + ".graph");
}

inline const std::array<const char*, 8>& fixture_names() {
    static const std::array<const char*, 8> names = {
        "single_edge", "self_loop", "parallel2", "path3",
        "triangle",    "k4",        "cycle6",    "petersen8"};
    return names;
}

// Upper-tail p-value of the chi-square distribution.
inline double chi2_pvalue(double stat, double dof) {
    if (stat <= 0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

// Pearson statistic against expected counts; entries with expected < 1e-12
// must have zero observations.
inline double chi2_stat(const std::vector<double>& expected,
                        const std::vector<std::int64_t>& observed) {
    double stat = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] < 1e-12) {
            if (observed[i] != 0) return 1e18;
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expected[i];
        stat += diff * diff / expected[i];
    }
    return stat;
}

}  // namespace testutil
