#include <cmath>
#include <optional>

#include "doctest.h"
#include "helpers.hpp"
#include "rcpotts/phase.hpp"

using namespace rcpotts;
using doctest::Approx;

TEST_SUITE("phase") {

TEST_CASE("beta/p conversions invert each other") {
    for (double beta : {0.1, 0.7, 1.3424540464535257, 2.5}) {
        CHECK(beta_of_p(p_of_beta(beta)) == Approx(beta).epsilon(1e-14));
        CHECK(p_hat_of_beta(beta, 3.0) ==
              Approx(std::expm1(beta) / (std::expm1(beta) + 3.0)).epsilon(1e-14));
        CHECK(p_hat_of_p(p_of_beta(beta), 3.0) ==
              Approx(p_hat_of_beta(beta, 3.0)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(require_valid_qd(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(require_valid_qd(3, 2), std::invalid_argument);
}

TEST_CASE("order/disorder threshold matches the extended-precision reference") {
    for (int q = 3; q <= 10; ++q)
        for (int d = 3; d <= 10; ++d)
            CHECK(beta_c(q, d) == Approx(extended::beta_c_ref(q, d)).epsilon(1e-12));
    // closed form ln((q-2)/((q-1)^{1-2/d}-1)) at two pinned points
    CHECK(beta_c(3, 3) == Approx(1.3473773483293841).epsilon(1e-13));
    CHECK(beta_c(4, 4) == Approx(1.0050525387423812).epsilon(1e-13));
    // 40-digit rendering is stable and starts with the double value
    CHECK(extended::beta_c_digits(3, 3, 20).substr(0, 12) == std::string("1.3473773483"));
}

TEST_CASE("uniqueness thresholds order correctly") {
    for (int q = 3; q <= 10; ++q) {
        for (int d = 3; d <= 10; ++d) {
            const double bu = beta_u(q, d);
            const double bc = beta_c(q, d);
            const double bup_alt = beta_u_prime_alt(q, d);
            CHECK(bu < bc);
            CHECK(bc < bup_alt);
            // the alt form is where p_hat crosses the tree percolation threshold
            CHECK(p_hat_of_beta(bup_alt, q) == Approx(1.0 / (d - 1)).epsilon(1e-14));
            CHECK(beta_u_prime(q, d) == Approx(std::log1p(double(q) / (d - 1))).epsilon(1e-14));
            // minimization and bisection agree on beta_u
            CHECK(bu == Approx(beta_u_by_bisection(q, d)).epsilon(1e-9));
        }
    }
    // q=3, d=3 has the closed form ln(1 + 2*sqrt(2))
    CHECK(beta_u(3, 3) == Approx(std::log(1 + 2 * std::sqrt(2.0))).epsilon(1e-11));
}

TEST_CASE("t-equation solver finds the ordered branch") {
    for (int q = 3; q <= 10; ++q) {
        for (int d = 3; d <= 10; ++d) {
            const double bc = beta_c(q, d);
            const double t = solve_t(q, d, bc);
            // at criticality the root has the closed form (q-1)^{2/d}
            CHECK(t == Approx(std::pow(q - 1.0, 2.0 / d)).epsilon(1e-9));
            CHECK(t_equation_rhs(q, d, t) == Approx(std::expm1(bc)).epsilon(1e-9));
            // first ordered colour fraction is (q-1)/q at criticality
            const PhaseProfile pr = phase_profile(q, d, bc);
            REQUIRE(pr.ordered.has_value());
            CHECK(pr.ordered->nu1 == Approx((q - 1.0) / q).epsilon(1e-9));
        }
    }
    CHECK(solve_t(3, 3, beta_c(3, 3)) == Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-12));
    CHECK(solve_t(4, 4, beta_c(4, 4)) == Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(solve_t(5, 4, beta_c(5, 4)) == Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(solve_t(3, 3, 0.9 * beta_u(3, 3)), std::domain_error);
    CHECK(solve_t(3, 3, beta_c(3, 3)) == Approx(extended::solve_t_ref(3, 3, beta_c(3, 3))));
}

TEST_CASE("lower t-branch exists only between the thresholds") {
    const int q = 3, d = 3;
    const double mid = 0.5 * (beta_u(q, d) + beta_u_prime_alt(q, d));
    const auto lower = solve_t_lower_branch(q, d, mid);
    REQUIRE(lower.has_value());
    CHECK(*lower > 1.0);
    CHECK(*lower < solve_t(q, d, mid));
    CHECK(t_equation_rhs(q, d, *lower) == Approx(std::expm1(mid)).epsilon(1e-9));
    CHECK_FALSE(solve_t_lower_branch(q, d, beta_u_prime_alt(q, d) + 0.05).has_value());
}

TEST_CASE("colour vectors and pair matrices are consistent") {
    for (int q : {3, 4, 7}) {
        for (int d : {3, 4, 5}) {
            const double bc = beta_c(q, d);
            const PhaseProfile pr = phase_profile(q, d, bc);

            const auto nu_d = nu_dis_vector(q);
            for (double x : nu_d) CHECK(x == Approx(1.0 / q).epsilon(1e-14));

            const auto nu_o = nu_ord_vector(pr);
            double nu_sum = 0;
            for (double x : nu_o) nu_sum += x;
            CHECK(nu_sum == Approx(1.0).epsilon(1e-12));
            CHECK(nu_o[0] > nu_o[1]);

            // pair-fraction rows sum to the matching colour fraction
            const auto rho_o = rho_ord_matrix(pr);
            double total = 0;
            for (int i = 0; i < q; ++i) {
                double row = 0;
                for (int j = 0; j < q; ++j) {
                    row += rho_o[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    CHECK(rho_o[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                          Approx(rho_o[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]));
                }
                CHECK(row == Approx(nu_o[static_cast<std::size_t>(i)]).epsilon(1e-10));
                total += row;
            }
            CHECK(total == Approx(1.0).epsilon(1e-10));

            const auto rho_d = rho_dis_matrix(q, bc);
            double row0 = 0;
            for (int j = 0; j < q; ++j) row0 += rho_d[0][static_cast<std::size_t>(j)];
            CHECK(row0 == Approx(1.0 / q).epsilon(1e-12));
            CHECK(rho_d[0][0] > rho_d[0][1]);  // ferromagnetic tilt

            // ordered phase is denser than disordered at criticality
            CHECK(pr.m_ord_c > pr.m_dis_c);
            CHECK(pr.rho_gap == Approx(pr.m_ord_c - pr.m_dis_c));
        }
    }
}

TEST_CASE("phase profile pins the critical window constants") {
    const PhaseProfile pr = phase_profile(3, 3, beta_c(3, 3));
    CHECK(pr.m_dis_c == Approx(0.730417).epsilon(1e-5));
    CHECK(pr.m_ord_c == Approx(0.806756).epsilon(1e-5));
    CHECK(pr.rho_gap == Approx(0.076339).epsilon(1e-4));
    CHECK(pr.p == Approx(p_of_beta(pr.beta)));
    const std::int64_t n = 1000;
    CHECK(pr.dis_window_hi(n) == Approx(n * (pr.m_dis_c + pr.rho_gap / 4)));
    CHECK(pr.ord_window_lo(n) == Approx(n * (pr.m_ord_c - pr.rho_gap / 4)));
    CHECK(pr.dis_window_hi(n) < pr.ord_window_lo(n));

    // ordered data appears exactly when beta reaches beta_u
    CHECK_FALSE(phase_profile(3, 3, 0.99 * beta_u(3, 3)).ordered.has_value());
    CHECK(phase_profile(3, 3, 1.01 * beta_u(3, 3)).ordered.has_value());
}

TEST_CASE("branching process solution satisfies its fixed point") {
    // subcritical: certain extinction
    const GWSolution sub = gw_solution(3, 0.4);
    CHECK_FALSE(sub.supercritical);
    CHECK(sub.phi == 1.0);
    CHECK(sub.chi == 0.0);

    // d=3, p=0.75: 9 phi^2 - 10 phi + 1 = 0, smallest root 1/9
    const GWSolution g3 = gw_solution(3, 0.75);
    CHECK(g3.supercritical);
    CHECK(g3.phi == Approx(1.0 / 9).epsilon(1e-12));
    CHECK(g3.phi_hat == Approx(std::pow(g3.phi, 1.0 / 2)).epsilon(1e-11));
    CHECK(g3.chi == Approx(1 - std::pow(0.75 * g3.phi + 0.25, 3)).epsilon(1e-12));

    for (double p : {0.6, 0.8, 0.95}) {
        for (int d : {3, 4, 5, 7}) {
            const GWSolution s = gw_solution(d, p);
            if (!s.supercritical) continue;
            CHECK(s.phi == Approx(std::pow(1 - p + p * s.phi, d - 1)).epsilon(1e-11));
            CHECK(s.phi < 1.0);
            CHECK(s.phi_hat == Approx(std::pow(s.phi, (d - 2.0) / (d - 1.0))).epsilon(1e-9));
        }
    }
    CHECK(gw_solution(3, 1.0).phi == 0.0);
    CHECK(gw_solution(3, 1.0).chi == 1.0);
    CHECK_THROWS_AS(gw_solution(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gw_solution(3, 1.5), std::invalid_argument);
}

TEST_CASE("ordered-phase percolation parameters at the pinned point") {
    const OrderedPercolationParams op = ordered_percolation_params(3, 3, beta_c(3, 3));
    CHECK(op.p1 == Approx(0.613512).epsilon(1e-5));
    CHECK(op.phi1 == Approx(0.396850).epsilon(1e-5));
    CHECK(op.R == Approx(0.657963).epsilon(1e-5));
    CHECK(op.R_upper == Approx(0.793701).epsilon(1e-5));
    CHECK(op.A == Approx(0.929438).epsilon(1e-5));

    for (int q : {3, 5, 8}) {
        for (int d : {3, 4, 6}) {
            const double bc = beta_c(q, d);
            const OrderedPercolationParams o = ordered_percolation_params(q, d, bc);
            const double t = o.t;
            // two derivations of the class-1 retention probability agree
            const PhaseProfile pr = phase_profile(q, d, bc);
            CHECK(o.p1 == Approx(pr.p * pr.ordered->rho11 / pr.ordered->nu1).epsilon(1e-12));
            CHECK(o.p1 ==
                  Approx(std::pow(t, d - 1) * (t - 1) / (std::pow(t, d) - t)).epsilon(1e-10));
            CHECK(o.phi1 == Approx(1.0 / std::pow(t, d - 1)).epsilon(1e-9));
            CHECK(o.phi1 == Approx(gw_solution(d, o.p1).phi).epsilon(1e-9));
            CHECK(o.phi_hat1 == Approx(std::pow(o.phi1, (d - 2.0) / (d - 1.0))).epsilon(1e-9));
            CHECK(o.R <= o.R_upper + 1e-12);
            CHECK(o.R_upper ==
                  Approx((t + q - 1) / (std::pow(t, d - 1) + q - 1)).epsilon(1e-12));
            CHECK(o.A < 1.0);
            CHECK(o.A > 0.0);
        }
    }
}

TEST_CASE("geometric-decay certificate distinguishes small and huge q") {
    const OrderedDecayReport small = ordered_decay_check(3, 3, beta_c(3, 3));
    CHECK_FALSE(small.holds);
    CHECK(small.lhs == Approx(small.sqrt_phi_hat1 + small.R));
    CHECK(small.rhs == Approx(std::pow(2.0, -5.0)));

    const int big_q = 15 * 15 * 15 * 15 * 15;  // q large relative to d
    const OrderedDecayReport big = ordered_decay_check(big_q, 3, beta_c(big_q, 3));
    CHECK(big.holds);
    CHECK(big.lhs < big.rhs);
}

}  // TEST_SUITE
