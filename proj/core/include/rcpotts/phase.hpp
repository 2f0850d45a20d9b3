#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcpotts {

// Ferromagnetic q-state Potts / random-cluster phase quantities on random
// d-regular graphs.  Everything here is deterministic arithmetic; q >= 3 and
// d >= 3 unless stated otherwise.
//
// Conventions:
//   p      = 1 - e^{-beta}
//   p_hat  = p / ((1-p) q + p) = (e^beta - 1) / (q + e^beta - 1)
//   beta_c = ln( (q-2) / ((q-1)^{1-2/d} - 1) )
//   t-equation: e^beta - 1 = (t-1)(t^{d-1}+q-1)/(t^{d-1}-t), t > 1
//   nu_ord = (a, (1-a)/(q-1), ...), a = t^d/(t^d+q-1), t the largest root
//
// Two uniqueness-style thresholds are exposed:
//   beta_u_prime      = ln(1 + q/(d-1))
//   beta_u_prime_alt  = ln(1 + q/(d-2))
// The _alt form is the one consistent with the rest of the theory: it is the
// beta at which p_hat crosses the (d-1)-ary tree percolation threshold
// (p_hat(beta_u_prime_alt) = 1/(d-1) exactly), it bounds beta_c from above,
// and it is where the t-equation's smaller branch merges into t = 1.  All
// ordering checks and preconditions in this library use the _alt form; the
// plain form is kept because both normalizations circulate.

double p_of_beta(double beta);
double beta_of_p(double p);
double p_hat_of_p(double p, double q);
double p_hat_of_beta(double beta, double q);

void require_valid_qd(int q, int d);  // throws std::invalid_argument unless q>=3, d>=3

double beta_c(int q, int d);
double beta_u_prime(int q, int d);
double beta_u_prime_alt(int q, int d);

// Right-hand side of the t-equation, g(t) = (t-1)(t^{d-1}+q-1)/(t^{d-1}-t).
double t_equation_rhs(int q, int d, double t);

// Infimum over t>1 of ln(1+g(t)); the ordered fixed point exists iff
// beta >= beta_u.  Computed by bracketed 1-d minimization; cross-checkable
// against solvability bisection (see beta_u_by_bisection).
double beta_u(int q, int d);
double beta_u_by_bisection(int q, int d);

// Largest root t>1 of the t-equation.  Throws std::domain_error for
// beta < beta_u.  The smaller branch root (when distinct) is exposed for
// diagnostics; std::nullopt when beta > beta_u_prime_alt (branch has merged
// into t=1) or when the two roots coincide at beta_u.
double solve_t(int q, int d, double beta);
std::optional<double> solve_t_lower_branch(int q, int d, double beta);

double m_dis(int q, int d, double beta);

struct GWSolution {
    int d = 0;
    double p = 0;
    bool supercritical = false;  // p > 1/(d-1)
    double phi = 1;      // extinction probability: smallest root of phi = (1-p+p*phi)^{d-1}
    double chi = 0;      // survival probability from a degree-d root: 1 - (p*phi+1-p)^d
    double phi_hat = 1;  // (1-p+p*phi)^{d-2} = phi^{(d-2)/(d-1)}
};

// Galton-Watson process with Binomial(d-1, p) offspring; p in [0,1], d >= 2.
GWSolution gw_solution(int d, double p);

struct OrderedPhase {
    double t = 0;         // largest root of the t-equation
    double a = 0;         // nu_ord[1] = t^d/(t^d+q-1)
    double nu1 = 0;       // == a
    double nu_other = 0;  // (1-a)/(q-1)
    // Collapsed edge statistics (rho_ord has four distinct entries by symmetry).
    double rho11 = 0;  // colour (1,1)
    double rho1j = 0;  // (1,j), j != 1
    double rhojj = 0;  // (j,j), j != 1
    double rhojk = 0;  // (j,k), j != k, both != 1
    double x = 0;      // t^{d-1}/(t^{d-1}+q-1)
    double m_ord = 0;  // expected percolated edges per vertex in the ordered phase
};

struct PhaseProfile {
    int q = 0, d = 0;
    double beta = 0, p = 0, p_hat = 0;
    double beta_c = 0, beta_u = 0, beta_u_prime = 0, beta_u_prime_alt = 0;
    double m_dis = 0;  // at beta
    // Window constants (evaluated at beta_c regardless of beta):
    double m_dis_c = 0, m_ord_c = 0, rho_gap = 0;
    std::optional<OrderedPhase> ordered;  // present iff beta >= beta_u

    // Edge-count windows for n vertices: disordered means |F| <= dis_window_hi,
    // ordered means |F| >= ord_window_lo.
    double dis_window_hi(std::int64_t n) const { return n * (m_dis_c + rho_gap / 4); }
    double ord_window_lo(std::int64_t n) const { return n * (m_ord_c - rho_gap / 4); }
};

PhaseProfile phase_profile(int q, int d, double beta);

// Expanded per-colour vectors/matrices (q entries; guarded against huge q).
std::vector<double> nu_dis_vector(int q);
std::vector<double> nu_ord_vector(const PhaseProfile& profile);
std::vector<std::vector<double>> rho_dis_matrix(int q, double beta);
std::vector<std::vector<double>> rho_ord_matrix(const PhaseProfile& profile);

struct OrderedPercolationParams {
    double t = 0;
    double p1 = 0;        // p * rho_ord_11 / nu_ord_1 == t^{d-1}(t-1)/(t^d-t)
    double phi1 = 0;      // extinction prob at p1 == 1/t^{d-1}
    double phi_hat1 = 0;  // == phi1^{(d-2)/(d-1)}
    double chi1 = 0;      // giant-component density of colour class 1
    double R = 0;         // 1 - rho_ord_i1/nu_ord_i for i != 1
    double R_upper = 0;   // (t+q-1)/(t^{d-1}+q-1), algebraic upper bound on R
    double A = 0;         // max_i { 1 - (1-sqrt(phi_hat1)) rho_ord_i1/nu_ord_i }
};

OrderedPercolationParams ordered_percolation_params(int q, int d, double beta);

struct OrderedDecayReport {
    double sqrt_phi_hat1 = 0;
    double R = 0;
    double lhs = 0;  // sqrt_phi_hat1 + R
    double rhs = 0;  // (d-1)^{-5}
    bool holds = false;
};

// Sufficient condition for geometric path decay in the ordered phase:
// sqrt(phi_hat1) + R < (d-1)^{-5}.
OrderedDecayReport ordered_decay_check(int q, int d, double beta);

// Extended-precision reference path (50 significant digits internally);
// used to pin golden values and to validate the double implementation.
namespace extended {
double beta_c_ref(int q, int d);
double beta_u_ref(int q, int d);
double solve_t_ref(int q, int d, double beta);
std::string beta_c_digits(int q, int d, int digits);
}  // namespace extended

}  // namespace rcpotts
