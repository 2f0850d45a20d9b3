#include "rcpotts/phase.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <type_traits>

namespace rcpotts {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

template <class Real>
Real expm1_g(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
        return std::expm1(x);
    } else {
        return exp(x) - 1;  // 50-digit type: naive form is plenty accurate
    }
}

template <class Real>
Real log1p_g(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
        return std::log1p(x);
    } else {
        return log(1 + x);
    }
}

// g(t) = (t-1)(t^{d-1}+q-1)/(t^{d-1}-t) for t > 1.
template <class Real>
Real g_rhs(int q, int d, const Real& t) {
    using std::pow;
    const Real s = pow(t, d - 1);
    return (t - 1) * (s + (q - 1)) / (s - t);
}

template <class Real>
Real g_rhs_derivative(int q, int d, const Real& t) {
    using std::pow;
    const Real s = pow(t, d - 1);
    const Real N = (t - 1) * (s + (q - 1));
    const Real D = s - t;
    const Real Np = (s + (q - 1)) + (t - 1) * (d - 1) * s / t;
    const Real Dp = (d - 1) * s / t - 1;
    return (Np * D - N * Dp) / (D * D);
}

// Geometric scan of u = t-1 followed by golden-section refinement; returns the
// minimizing t.  g decreases from q/(d-2) at t->1+, has one interior minimum,
// then grows like t.
template <class Real>
Real argmin_g(int q, int d) {
    using std::pow;
    const int probes_per_decade = 64;
    double best_u = 1e-9;
    Real best_g = g_rhs(q, d, Real(1) + Real(best_u));
    for (int dec = -9; dec < 9; ++dec) {
        for (int k = 0; k < probes_per_decade; ++k) {
            const double u = std::pow(10.0, dec + static_cast<double>(k) / probes_per_decade);
            const Real val = g_rhs(q, d, Real(1) + Real(u));
            if (val < best_g) {
                best_g = val;
                best_u = u;
            }
        }
    }
    // Bracket one grid step to each side, then golden-section.
    const double step = std::pow(10.0, 1.0 / probes_per_decade);
    Real lo = Real(1) + Real(best_u / step / step);
    Real hi = Real(1) + Real(best_u * step * step);
    const Real invphi = (sqrt(Real(5)) - 1) / 2;
    Real x1 = hi - invphi * (hi - lo);
    Real x2 = lo + invphi * (hi - lo);
    Real f1 = g_rhs(q, d, x1);
    Real f2 = g_rhs(q, d, x2);
    const int iters = std::is_same_v<Real, double> ? 120 : 400;
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = g_rhs(q, d, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = g_rhs(q, d, x2);
        }
    }
    return (lo + hi) / 2;
}

template <class Real>
Real beta_c_impl(int q, int d) {
    using std::log;
    using std::pow;
    const Real denom = pow(Real(q - 1), 1 - Real(2) / d) - 1;
    return log(Real(q - 2) / denom);
}

template <class Real>
Real beta_u_impl(int q, int d) {
    const Real tstar = argmin_g<Real>(q, d);
    return log1p_g(g_rhs(q, d, tstar));
}

// Largest root of g(t) = expm1(beta): bisection on the increasing branch
// beyond the minimizer, then Newton polish.
template <class Real>
Real solve_t_impl(int q, int d, const Real& beta) {
    using std::pow;
    const Real y = expm1_g(beta);
    const Real tstar = argmin_g<Real>(q, d);
    const Real gmin = g_rhs(q, d, tstar);
    if (y < gmin) throw std::domain_error("no ordered solution: beta < beta_u");

    Real lo = tstar;
    Real hi = tstar < 2 ? Real(4) : 2 * tstar;
    int guard = 0;
    while (g_rhs(q, d, hi) < y) {
        hi *= 2;
        if (++guard > 2000) throw std::runtime_error("t bracket expansion failed");
    }
    for (int i = 0; i < (std::is_same_v<Real, double> ? 200 : 400); ++i) {
        const Real mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        if (g_rhs(q, d, mid) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Real t = (lo + hi) / 2;
    for (int i = 0; i < 8; ++i) {
        const Real f = g_rhs(q, d, t) - y;
        const Real fp = g_rhs_derivative(q, d, t);
        if (fp == 0) break;
        const Real step = f / fp;
        const Real nt = t - step;
        if (nt > tstar) t = nt;
    }
    return t;
}

double pow_int_neg(int base, int e) { return std::pow(static_cast<double>(base), -e); }

}  // namespace

double p_of_beta(double beta) {
    if (!(beta >= 0)) throw std::invalid_argument("beta must be >= 0");
    return -std::expm1(-beta);
}

double beta_of_p(double p) {
    if (!(p >= 0 && p < 1)) throw std::invalid_argument("p must be in [0,1)");
    return -std::log1p(-p);
}

double p_hat_of_p(double p, double q) {
    if (!(p >= 0 && p <= 1) || !(q >= 1)) throw std::invalid_argument("p_hat needs p in [0,1], q >= 1");
    return p / ((1 - p) * q + p);
}

double p_hat_of_beta(double beta, double q) {
    const double em1 = std::expm1(beta);
    return em1 / (q + em1);
}

void require_valid_qd(int q, int d) {
    if (q < 3 || d < 3) throw std::invalid_argument("phase quantities need q >= 3 and d >= 3");
}

double beta_c(int q, int d) {
    require_valid_qd(q, d);
    return beta_c_impl<double>(q, d);
}

double beta_u_prime(int q, int d) {
    require_valid_qd(q, d);
    return std::log1p(static_cast<double>(q) / (d - 1));
}

double beta_u_prime_alt(int q, int d) {
    require_valid_qd(q, d);
    return std::log1p(static_cast<double>(q) / (d - 2));
}

double t_equation_rhs(int q, int d, double t) {
    require_valid_qd(q, d);
    if (!(t > 1)) throw std::invalid_argument("t-equation needs t > 1");
    return g_rhs<double>(q, d, t);
}

double beta_u(int q, int d) {
    require_valid_qd(q, d);
    return beta_u_impl<double>(q, d);
}

double beta_u_by_bisection(int q, int d) {
    require_valid_qd(q, d);
    // Stationarity route: bisect g'(t) = 0 between a grid bracket, then
    // beta_u = log1p(g(t)).  Independent of the golden-section minimizer.
    // The derivative's numerator scales like u^2 near t = 1+u against a
    // ~1e-16 absolute noise floor, so probing below u ~ 1e-6 reads noise;
    // the stationary point sits at u ~ 1/d, far above the start.
    const int probes_per_decade = 64;
    double prev_u = 1e-6;
    double prev_gp = g_rhs_derivative<double>(q, d, 1 + prev_u);
    double lo = -1, hi = -1;
    for (int dec = -6; dec < 9 && lo < 0; ++dec) {
        for (int k = 0; k < probes_per_decade; ++k) {
            const double u = std::pow(10.0, dec + static_cast<double>(k) / probes_per_decade);
            const double gp = g_rhs_derivative<double>(q, d, 1 + u);
            if (prev_gp < 0 && gp >= 0) {
                lo = prev_u;
                hi = u;
                break;
            }
            prev_u = u;
            prev_gp = gp;
        }
    }
    if (lo < 0) throw std::runtime_error("no stationary point bracket found");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g_rhs_derivative<double>(q, d, 1 + mid) < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::log1p(g_rhs<double>(q, d, 1 + 0.5 * (lo + hi)));
}

double solve_t(int q, int d, double beta) {
    require_valid_qd(q, d);
    if (!(beta > 0)) throw std::invalid_argument("beta must be > 0");
    return solve_t_impl<double>(q, d, beta);
}

std::optional<double> solve_t_lower_branch(int q, int d, double beta) {
    require_valid_qd(q, d);
    const double y = std::expm1(beta);
    if (y >= static_cast<double>(q) / (d - 2)) return std::nullopt;  // merged into t = 1
    const double tstar = argmin_g<double>(q, d);
    const double gmin = g_rhs<double>(q, d, tstar);
    if (y <= gmin) return std::nullopt;  // below or at the fold point
    // Decreasing branch on (1, tstar].
    double lo = 1 + 1e-13, hi = tstar;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g_rhs<double>(q, d, mid) > y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double m_dis(int q, int d, double beta) {
    require_valid_qd(q, d);
    const double em1 = std::expm1(beta);
    return (d / 2.0) * em1 / (em1 + q);
    // note: e^beta + q - 1 == em1 + q
}

GWSolution gw_solution(int d, double p) {
    if (d < 2) throw std::invalid_argument("gw_solution needs d >= 2");
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("gw_solution needs p in [0,1]");
    GWSolution out;
    out.d = d;
    out.p = p;
    out.supercritical = p * (d - 1) > 1;
    if (!out.supercritical) {
        out.phi = 1;
        out.chi = 0;
        out.phi_hat = 1;
        return out;
    }
    // Smallest fixed point of f(phi) = (1-p+p*phi)^{d-1} on [0,1).
    auto f = [&](double phi) { return std::pow(1 - p + p * phi, d - 1) - phi; };
    double lo = 0, hi = 1 - 1e-15;
    if (f(lo) <= 0) {
        out.phi = 0;  // p == 1
    } else {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (f(mid) > 0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        double phi = 0.5 * (lo + hi);
        for (int i = 0; i < 6; ++i) {
            const double base = 1 - p + p * phi;
            const double grad = (d - 1) * p * std::pow(base, d - 2) - 1;
            if (grad == 0) break;
            const double next = phi - (std::pow(base, d - 1) - phi) / grad;
            if (next > 0 && next < 1) phi = next;
        }
        out.phi = phi;
    }
    out.chi = 1 - std::pow(p * out.phi + 1 - p, d);
    out.phi_hat = std::pow(1 - p + p * out.phi, d - 2);
    return out;
}

namespace {

OrderedPhase ordered_phase_at(int q, int d, double beta) {
    OrderedPhase op;
    op.t = solve_t_impl<double>(q, d, beta);
    const double td = std::pow(op.t, d);
    op.a = td / (td + (q - 1));
    op.nu1 = op.a;
    op.nu_other = (1 - op.a) / (q - 1);

    const double gamma = static_cast<double>(d - 1) / d;
    const double eb = std::exp(beta);
    const double A1 = std::pow(op.nu1, gamma);
    const double Ao = std::pow(op.nu_other, gamma);
    const double W = eb * (A1 * A1 + (q - 1) * Ao * Ao) + 2 * (q - 1) * A1 * Ao +
                     static_cast<double>(q - 1) * (q - 2) * Ao * Ao;
    op.rho11 = eb * A1 * A1 / W;
    op.rho1j = A1 * Ao / W;
    op.rhojj = eb * Ao * Ao / W;
    op.rhojk = Ao * Ao / W;

    const double td1 = std::pow(op.t, d - 1);
    op.x = td1 / (td1 + (q - 1));
    const double em1 = std::expm1(beta);
    const double s = op.x * op.x + (1 - op.x) * (1 - op.x) / (q - 1);
    op.m_ord = (d / 2.0) * em1 * s / (1 + em1 * s);
    return op;
}

}  // namespace

PhaseProfile phase_profile(int q, int d, double beta) {
    require_valid_qd(q, d);
    if (!(beta > 0)) throw std::invalid_argument("beta must be > 0");
    PhaseProfile pr;
    pr.q = q;
    pr.d = d;
    pr.beta = beta;
    pr.p = p_of_beta(beta);
    pr.p_hat = p_hat_of_beta(beta, q);
    pr.beta_c = beta_c_impl<double>(q, d);
    pr.beta_u = beta_u_impl<double>(q, d);
    pr.beta_u_prime = beta_u_prime(q, d);
    pr.beta_u_prime_alt = beta_u_prime_alt(q, d);
    pr.m_dis = m_dis(q, d, beta);
    pr.m_dis_c = m_dis(q, d, pr.beta_c);
    const OrderedPhase at_c = ordered_phase_at(q, d, pr.beta_c);
    pr.m_ord_c = at_c.m_ord;
    pr.rho_gap = pr.m_ord_c - pr.m_dis_c;
    if (beta >= pr.beta_u) pr.ordered = ordered_phase_at(q, d, beta);
    return pr;
}

std::vector<double> nu_dis_vector(int q) {
    require_valid_qd(q, 3);
    return std::vector<double>(static_cast<std::size_t>(q), 1.0 / q);
}

std::vector<double> nu_ord_vector(const PhaseProfile& profile) {
    if (!profile.ordered) throw std::invalid_argument("no ordered phase at this beta");
    if (profile.q > 100000) throw std::invalid_argument("q too large to expand vectors");
    std::vector<double> nu(static_cast<std::size_t>(profile.q), profile.ordered->nu_other);
    nu[0] = profile.ordered->nu1;
    return nu;
}

std::vector<std::vector<double>> rho_dis_matrix(int q, double beta) {
    require_valid_qd(q, 3);
    if (q > 10000) throw std::invalid_argument("q too large to expand matrices");
    const double eb = std::exp(beta);
    const double W = q * (eb + q - 1);
    std::vector<std::vector<double>> rho(static_cast<std::size_t>(q),
                                         std::vector<double>(static_cast<std::size_t>(q), 1.0 / W));
    for (int i = 0; i < q; ++i) rho[i][i] = eb / W;
    return rho;
}

std::vector<std::vector<double>> rho_ord_matrix(const PhaseProfile& profile) {
    if (!profile.ordered) throw std::invalid_argument("no ordered phase at this beta");
    if (profile.q > 10000) throw std::invalid_argument("q too large to expand matrices");
    const int q = profile.q;
    const OrderedPhase& op = *profile.ordered;
    std::vector<std::vector<double>> rho(static_cast<std::size_t>(q),
                                         std::vector<double>(static_cast<std::size_t>(q), op.rhojk));
    for (int i = 1; i < q; ++i) {
        rho[0][i] = rho[i][0] = op.rho1j;
        rho[i][i] = op.rhojj;
    }
    rho[0][0] = op.rho11;
    return rho;
}

OrderedPercolationParams ordered_percolation_params(int q, int d, double beta) {
    require_valid_qd(q, d);
    const PhaseProfile pr = phase_profile(q, d, beta);
    if (!pr.ordered) throw std::domain_error("no ordered solution: beta < beta_u");
    const OrderedPhase& op = *pr.ordered;

    OrderedPercolationParams out;
    out.t = op.t;
    out.p1 = pr.p * op.rho11 / op.nu1;
    const GWSolution gw = gw_solution(d, out.p1);
    out.phi1 = gw.phi;
    out.phi_hat1 = gw.phi_hat;
    out.chi1 = gw.chi;

    const double t = op.t;
    const double td = std::pow(t, d);
    const double td1 = std::pow(t, d - 1);
    out.R = (td * t + (q - 2) * td - (q - 1) * t) / ((td - t) * (td1 + (q - 1)));
    out.R_upper = (t + q - 1) / (td1 + (q - 1));

    const double shrink = 1 - std::sqrt(out.phi_hat1);
    const double cand1 = 1 - shrink * (op.rho11 / op.nu1);
    const double cand2 = 1 - shrink * (op.rho1j / op.nu_other);
    out.A = std::max(cand1, cand2);
    return out;
}

OrderedDecayReport ordered_decay_check(int q, int d, double beta) {
    const OrderedPercolationParams pp = ordered_percolation_params(q, d, beta);
    OrderedDecayReport rep;
    rep.sqrt_phi_hat1 = std::sqrt(pp.phi_hat1);
    rep.R = pp.R;
    rep.lhs = rep.sqrt_phi_hat1 + rep.R;
    rep.rhs = pow_int_neg(d - 1, 5);
    rep.holds = rep.lhs < rep.rhs;
    return rep;
}

namespace extended {

double beta_c_ref(int q, int d) {
    require_valid_qd(q, d);
    return beta_c_impl<Float50>(q, d).convert_to<double>();
}

double beta_u_ref(int q, int d) {
    require_valid_qd(q, d);
    return beta_u_impl<Float50>(q, d).convert_to<double>();
}

double solve_t_ref(int q, int d, double beta) {
    require_valid_qd(q, d);
    return solve_t_impl<Float50>(q, d, Float50(beta)).convert_to<double>();
}

std::string beta_c_digits(int q, int d, int digits) {
    require_valid_qd(q, d);
    std::ostringstream os;
    os.precision(digits);
    os << beta_c_impl<Float50>(q, d);
    return os.str();
}

}  // namespace extended

}  // namespace rcpotts
