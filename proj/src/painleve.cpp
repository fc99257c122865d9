#include "spiked/painleve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "spiked/airy.hpp"
#include "spiked/errors.hpp"

namespace spiked {

namespace {

using ld = long double;
constexpr int kOrder = 24;

// Large-negative-s expansion q = sqrt(t/2) (1 + sum c_k t^{-3k}), t = -s.
constexpr std::array<double, 5> kAsym{-0.125, -0.5703125, -10.4072265625, -424.5690002441406, -30692.611476898193};

std::pair<double, double> q_asymptotic(double s) {
    const double t = -s;
    double S = 1.0, dS = 0.0;
    for (std::size_t k = 1; k <= kAsym.size(); ++k) {
        const double e = -3.0 * static_cast<double>(k);
        S += kAsym[k - 1] * std::pow(t, e);
        dS += e * kAsym[k - 1] * std::pow(t, e - 1.0);
    }
    const double root = std::sqrt(0.5 * t);
    const double dq_dt = S / (4.0 * root) + root * dS;
    return {root * S, -dq_dt};
}

struct StepResult {
    ld q, p;        // q and q' at the new point
    ld int_q;       // int over the step of q
    ld int_q2;      // int over the step of q^2
    ld int_lin_q2;  // int over the step of (t - s_new) q^2
};

// One Taylor step from s0 to s0 - h (h > 0).
StepResult taylor_step(ld s0, ld q0, ld p0, ld h) {
    std::array<ld, kOrder + 1> a{}, r{}, c{};
    a[0] = q0;
    a[1] = p0;
    for (int k = 0; k + 2 <= kOrder; ++k) {
        r[k] = 0;
        for (int i = 0; i <= k; ++i) r[k] += a[i] * a[k - i];
        c[k] = 0;
        for (int i = 0; i <= k; ++i) c[k] += r[i] * a[k - i];
        const ld prev = k >= 1 ? a[k - 1] : 0.0L;
        a[k + 2] = (s0 * a[k] + prev + 2.0L * c[k]) / static_cast<ld>((k + 1) * (k + 2));
    }
    for (int k = kOrder - 1; k <= kOrder; ++k) {
        r[k] = 0;
        for (int i = 0; i <= k; ++i) r[k] += a[i] * a[k - i];
    }
    const ld tau = -h;
    StepResult out{0, 0, 0, 0, 0};
    ld pw = 1.0L;  // tau^k
    for (int k = 0; k <= kOrder; ++k) {
        const ld pw1 = pw * tau;  // tau^{k+1}
        out.q += a[k] * pw;
        if (k >= 1) out.p += static_cast<ld>(k) * a[k] * (pw / tau);
        out.int_q -= a[k] * pw1 / static_cast<ld>(k + 1);
        out.int_q2 -= r[k] * pw1 / static_cast<ld>(k + 1);
        // int_{-h}^0 (tau + h) tau^k
        out.int_lin_q2 += r[k] * (-(pw1 * tau) / static_cast<ld>(k + 2) - h * pw1 / static_cast<ld>(k + 1));
        pw = pw1;
    }
    return out;
}

double hermite5(double t, double h, double f0, double d0, double dd0, double f1, double d1, double dd1) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double H0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double H1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double H2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    const double H3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    const double H4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double H5 = 0.5 * (t3 - 2.0 * t4 + t5);
    return H0 * f0 + h * H1 * d0 + h * h * H2 * dd0 + H3 * f1 + h * H4 * d1 + h * h * H5 * dd1;
}

struct Locate {
    std::size_t i;
    double t;
};

Locate locate(const PainleveTable& tb, double x, const char* where) {
    if (std::isnan(x) || x < tb.s_min || x > tb.s_max) {
        std::ostringstream os;
        os << where << ": s = " << x << " outside the table range [" << tb.s_min << ", " << tb.s_max
           << "]; extrapolation is not supported";
        throw InputError(os.str());
    }
    const double r = (x - tb.s_min) / tb.h;
    std::size_t i = static_cast<std::size_t>(r);
    if (i >= tb.size() - 1) i = tb.size() - 2;
    return {i, r - static_cast<double>(i)};
}

double qpp(double s, double q) { return s * q + 2.0 * q * q * q; }

void validate_grid(double s_min, double s_max, double h) {
    if (!std::isfinite(s_min) || !std::isfinite(s_max) || !std::isfinite(h)) {
        throw InputError("solve_hastings_mcleod: non-finite grid parameters");
    }
    if (s_max < 8.0) throw InputError("solve_hastings_mcleod: s_max must be >= 8");
    if (s_max > 40.0) throw InputError("solve_hastings_mcleod: s_max must be <= 40");
    if (s_min > -10.0) throw InputError("solve_hastings_mcleod: s_min must be <= -10");
    if (!(h > 0.0) || h > 0.01) throw InputError("solve_hastings_mcleod: step must be in (0, 0.01]");
    const double m = (s_max - s_min) / h;
    if (std::abs(m - std::round(m)) > 1e-8 * m) throw InputError("solve_hastings_mcleod: (s_max - s_min)/h must be integral");
}

// Fills log_E, log_F, E, F, J from q on the grid, given the tails at s_max.
void fill_integrals_gauss(PainleveTable& tb, std::size_t from_index, ld int_q, ld J, ld u) {
    // cells below from_index: composite Gauss on the quintic interpolant of q
    for (std::size_t i = from_index; i-- > 0;) {
        const double a = tb.s[i];
        const double b = tb.s[i + 1];
        auto qf = [&](double x) {
            const double t = (x - a) / tb.h;
            return hermite5(t, tb.h, tb.q[i], tb.q_prime[i], qpp(tb.s[i], tb.q[i]), tb.q[i + 1], tb.q_prime[i + 1],
                            qpp(tb.s[i + 1], tb.q[i + 1]));
        };
        using G = boost::math::quadrature::gauss<double, 10>;
        const double iq = G::integrate(qf, a, b);
        const double iq2 = G::integrate([&](double x) { const double v = qf(x); return v * v; }, a, b);
        const double ilin = G::integrate([&](double x) { const double v = qf(x); return (x - a) * v * v; }, a, b);
        u = u + static_cast<ld>(tb.h) * J + ilin;
        J += iq2;
        int_q += iq;
        tb.J[i] = static_cast<double>(J);
        tb.log_E[i] = static_cast<double>(-int_q);
        tb.log_F[i] = static_cast<double>(-u);
    }
}

}  // namespace

PainleveTable solve_hastings_mcleod(double s_min, double s_max, double h, double s_join) {
    validate_grid(s_min, s_max, h);
    if (!(s_join <= 0.0) || s_join < s_min - h) throw InputError("solve_hastings_mcleod: s_join must lie in [s_min, 0]");
    PainleveTable tb;
    tb.s_min = s_min;
    tb.s_max = s_max;
    tb.h = h;
    tb.s_join = s_join;
    const std::size_t m = static_cast<std::size_t>(std::llround((s_max - s_min) / h));
    const std::size_t n = m + 1;
    tb.s.resize(n);
    for (std::size_t i = 0; i < n; ++i) tb.s[i] = s_min + static_cast<double>(i) * h;
    tb.s[m] = s_max;
    tb.q.assign(n, 0.0);
    tb.q_prime.assign(n, 0.0);
    tb.E.assign(n, 0.0);
    tb.F.assign(n, 0.0);
    tb.log_E.assign(n, 0.0);
    tb.log_F.assign(n, 0.0);
    tb.J.assign(n, 0.0);

    ld q, p;
    airy_long(static_cast<ld>(s_max), q, p);
    // tails of q ~ Ai beyond s_max
    const double ai = static_cast<double>(q), aip = static_cast<double>(p);
    ld int_q = airy_tail_integral(s_max);
    ld J = static_cast<ld>(aip) * aip - static_cast<ld>(s_max) * ai * ai;
    ld u = (2.0L * s_max * s_max * ai * ai - 2.0L * s_max * aip * aip - static_cast<ld>(ai) * aip) / 3.0L;

    tb.q[m] = ai;
    tb.q_prime[m] = aip;
    tb.J[m] = static_cast<double>(J);
    tb.log_E[m] = static_cast<double>(-int_q);
    tb.log_F[m] = static_cast<double>(-u);

    const ld hl = static_cast<ld>(h);
    std::size_t i = m;
    while (i > 0 && tb.s[i - 1] >= s_join - 1e-12) {
        const ld s0 = static_cast<ld>(s_max) - static_cast<ld>(m - i) * hl;
        const StepResult whole = taylor_step(s0, q, p, hl);
        const StepResult h1 = taylor_step(s0, q, p, hl / 2);
        const StepResult h2 = taylor_step(s0 - hl / 2, h1.q, h1.p, hl / 2);
        const double err = static_cast<double>(std::fabs(whole.q - h2.q) / (std::fabs(h2.q) + 1e-300L));
        tb.max_step_error = std::max(tb.max_step_error, err);
        if (err > 1e-12) {
            std::ostringstream os;
            os << "solve_hastings_mcleod: step-doubling error " << err << " at s = " << static_cast<double>(s0)
               << "; reduce the step";
            throw NumericalError(os.str());
        }
        // combine the two half steps
        const ld lin = h1.int_lin_q2 + h2.int_lin_q2 + (hl / 2) * h1.int_q2;
        u = u + hl * J + lin;
        J += h1.int_q2 + h2.int_q2;
        int_q += h1.int_q + h2.int_q;
        q = h2.q;
        p = h2.p;
        if (!(std::fabs(q) <= 1e6L)) {
            std::ostringstream os;
            os << "solve_hastings_mcleod: |q| exceeded 1e6 near s = " << static_cast<double>(s0 - hl)
               << " (blow-up: step too large or the solution left the Hastings-McLeod branch)";
            throw NumericalError(os.str());
        }
        --i;
        tb.q[i] = static_cast<double>(q);
        tb.q_prime[i] = static_cast<double>(p);
        tb.J[i] = static_cast<double>(J);
        tb.log_E[i] = static_cast<double>(-int_q);
        tb.log_F[i] = static_cast<double>(-u);
    }
    // below s_join: expansion for q, quadrature for the integrals
    for (std::size_t k = 0; k < i; ++k) {
        const auto [qa, pa] = q_asymptotic(tb.s[k]);
        tb.q[k] = qa;
        tb.q_prime[k] = pa;
    }
    fill_integrals_gauss(tb, i, int_q, J, u);

    for (std::size_t k = 0; k < n; ++k) {
        if (!(tb.q[k] > 0.0)) {
            std::ostringstream os;
            os << "solve_hastings_mcleod: q is not positive at s = " << tb.s[k];
            throw NumericalError(os.str());
        }
        tb.E[k] = std::exp(tb.log_E[k]);
        tb.F[k] = std::exp(tb.log_F[k]);
    }
    return tb;
}

double PainleveTable::q_at(double x) const {
    const Locate l = locate(*this, x, "PainleveTable::q_at");
    const std::size_t i = l.i;
    return hermite5(l.t, h, q[i], q_prime[i], qpp(s[i], q[i]), q[i + 1], q_prime[i + 1], qpp(s[i + 1], q[i + 1]));
}

double PainleveTable::q_prime_at(double x) const {
    const Locate l = locate(*this, x, "PainleveTable::q_prime_at");
    const std::size_t i = l.i;
    auto q3 = [&](std::size_t k) { return q[k] + s[k] * q_prime[k] + 6.0 * q[k] * q[k] * q_prime[k]; };
    return hermite5(l.t, h, q_prime[i], qpp(s[i], q[i]), q3(i), q_prime[i + 1], qpp(s[i + 1], q[i + 1]), q3(i + 1));
}

double PainleveTable::log_E_at(double x) const {
    const Locate l = locate(*this, x, "PainleveTable::log_E_at");
    const std::size_t i = l.i;
    return hermite5(l.t, h, log_E[i], q[i], q_prime[i], log_E[i + 1], q[i + 1], q_prime[i + 1]);
}

double PainleveTable::log_F_at(double x) const {
    const Locate l = locate(*this, x, "PainleveTable::log_F_at");
    const std::size_t i = l.i;
    return hermite5(l.t, h, log_F[i], J[i], -q[i] * q[i], log_F[i + 1], J[i + 1], -q[i + 1] * q[i + 1]);
}

double PainleveTable::E_at(double x) const { return std::exp(log_E_at(x)); }
double PainleveTable::F_at(double x) const { return std::exp(log_F_at(x)); }

void write_painleve_csv(const PainleveTable& table, std::ostream& out) {
    out << "s,q,q_prime,E,F\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.s[i] << ',' << table.q[i] << ',' << table.q_prime[i] << ',' << table.E[i] << ',' << table.F[i]
            << '\n';
    }
}

PainleveTable read_painleve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("s,q,q_prime,E,F", 0) != 0) {
        throw InputError("read_painleve_csv: missing header s,q,q_prime,E,F");
    }
    PainleveTable tb;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::array<double, 5> v{};
        for (std::size_t k = 0; k < 5; ++k) {
            std::string cell;
            if (!std::getline(row, cell, ',')) throw InputError("read_painleve_csv: short row");
            v[k] = std::stod(cell);
        }
        tb.s.push_back(v[0]);
        tb.q.push_back(v[1]);
        tb.q_prime.push_back(v[2]);
        tb.E.push_back(v[3]);
        tb.F.push_back(v[4]);
    }
    if (tb.s.size() < 3) throw InputError("read_painleve_csv: too few rows");
    tb.s_min = tb.s.front();
    tb.s_max = tb.s.back();
    tb.h = (tb.s_max - tb.s_min) / static_cast<double>(tb.s.size() - 1);
    tb.s_join = tb.s_min;
    for (std::size_t i = 1; i < tb.s.size(); ++i) {
        if (std::abs(tb.s[i] - tb.s[i - 1] - tb.h) > 1e-9 * std::max(1.0, std::abs(tb.s[i]))) {
            throw InputError("read_painleve_csv: grid is not uniform and increasing");
        }
    }
    const std::size_t n = tb.s.size();
    tb.log_E.resize(n);
    tb.log_F.resize(n);
    tb.J.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(tb.E[i] > 0.0) || !(tb.F[i] > 0.0)) throw InputError("read_painleve_csv: E and F must be positive");
        tb.log_E[i] = std::log(tb.E[i]);
        tb.log_F[i] = std::log(tb.F[i]);
    }
    // J = int_s^inf q^2, rebuilt from the Airy tail and the interpolant of q
    const AiryEval a = airy(tb.s_max);
    double J = a.ai_prime * a.ai_prime - tb.s_max * a.ai * a.ai;
    tb.J[n - 1] = J;
    for (std::size_t i = n - 1; i-- > 0;) {
        const double lo = tb.s[i];
        auto qf = [&](double x) {
            const double t = (x - lo) / tb.h;
            return hermite5(t, tb.h, tb.q[i], tb.q_prime[i], qpp(tb.s[i], tb.q[i]), tb.q[i + 1], tb.q_prime[i + 1],
                            qpp(tb.s[i + 1], tb.q[i + 1]));
        };
        J += boost::math::quadrature::gauss<double, 10>::integrate([&](double x) { const double v = qf(x); return v * v; },
                                                                  lo, tb.s[i + 1]);
        tb.J[i] = J;
    }
    return tb;
}

double tw_goe_cdf(const PainleveTable& table, double s) {
    return std::exp(0.5 * (table.log_E_at(s) + table.log_F_at(s)));
}

namespace {

using Mat2 = std::array<double, 4>;  // row-major

constexpr double kForwardLimit = 1.0;

Mat2 lax_matrix(double s, double q, double qp, double w) {
    return {q * q, -w * q - qp, -w * q + qp, w * w - s - q * q};
}

// exp of a real 2x2 matrix via its trace and the square of its traceless part.
Mat2 expm2(const Mat2& m) {
    const double tr = 0.5 * (m[0] + m[3]);
    const Mat2 n{m[0] - tr, m[1], m[2], m[3] - tr};
    const double delta = n[0] * n[0] + n[1] * n[2];  // n^2 = delta I
    double c, sc;  // cosh(r), sinh(r)/r (or the trigonometric pair)
    if (delta > 0.0) {
        const double r = std::sqrt(delta);
        c = std::cosh(r);
        sc = r > 1e-8 ? std::sinh(r) / r : 1.0 + delta / 6.0;
    } else {
        const double r = std::sqrt(-delta);
        c = std::cos(r);
        sc = r > 1e-8 ? std::sin(r) / r : 1.0 + delta / 6.0;
    }
    const double e = std::exp(tr);
    return {e * (c + sc * n[0]), e * sc * n[1], e * sc * n[2], e * (c + sc * n[3])};
}

}  // namespace

namespace {

constexpr double kLaxStep = 0.005;

// Propagates (f, g) from wa to wb with q, q' frozen; f, g are returned divided by
// exp(log_scale).
void propagate(double s, double q, double qp, double wa, double wb, double& f, double& g, double& log_scale) {
    const std::size_t steps = static_cast<std::size_t>(std::ceil(std::abs(wb - wa) / kLaxStep));
    if (steps == 0) return;
    const double dw = (wb - wa) / static_cast<double>(steps);
    const double g1 = 0.5 - std::sqrt(3.0) / 6.0, g2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double c2 = std::sqrt(3.0) * dw * dw / 12.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double w0 = wa + static_cast<double>(k) * dw;
        const Mat2 A1 = lax_matrix(s, q, qp, w0 + g1 * dw);
        const Mat2 A2 = lax_matrix(s, q, qp, w0 + g2 * dw);
        // Omega = dw/2 (A1 + A2) + sqrt(3) dw^2 / 12 [A2, A1]
        const Mat2 comm{A2[0] * A1[0] + A2[1] * A1[2] - (A1[0] * A2[0] + A1[1] * A2[2]),
                        A2[0] * A1[1] + A2[1] * A1[3] - (A1[0] * A2[1] + A1[1] * A2[3]),
                        A2[2] * A1[0] + A2[3] * A1[2] - (A1[2] * A2[0] + A1[3] * A2[2]),
                        A2[2] * A1[1] + A2[3] * A1[3] - (A1[2] * A2[1] + A1[3] * A2[3])};
        Mat2 omega;
        for (std::size_t j = 0; j < 4; ++j) omega[j] = 0.5 * dw * (A1[j] + A2[j]) + c2 * comm[j];
        const Mat2 e = expm2(omega);
        const double nf = e[0] * f + e[1] * g;
        const double ng = e[2] * f + e[3] * g;
        f = nf;
        g = ng;
        const double norm = std::max(std::abs(f), std::abs(g));
        if (!std::isfinite(norm)) throw NumericalError("lax_propagate: overflow inside a step; use a smaller |w|");
        if (norm > 1e100 || (norm < 1e-100 && norm > 0.0)) {
            log_scale += std::log(norm);
            f /= norm;
            g /= norm;
        }
    }
}

std::pair<double, double> rescale(double f, double g, double log_scale, double w) {
    if (log_scale > 700.0) {
        std::ostringstream os;
        os << "lax_propagate: solution magnitude exp(" << log_scale << ") exceeds double range at w = " << w
           << "; use log-domain propagation or a smaller |w|";
        throw NumericalError(os.str());
    }
    const double scale = std::exp(log_scale);
    return {f * scale, g * scale};
}

}  // namespace

std::pair<double, double> lax_propagate_from(const PainleveTable& table, double s, double w, double f0, double g0) {
    if (!std::isfinite(w)) throw InputError("lax_propagate: w must be finite");
    const double q = table.q_at(s);
    const double qp = table.q_prime_at(s);
    double f = f0, g = g0, log_scale = 0.0;
    propagate(s, q, qp, 0.0, w, f, g, log_scale);
    return rescale(f, g, log_scale, w);
}

std::pair<double, double> lax_propagate(const PainleveTable& table, double s, double w) {
    if (!std::isfinite(w)) throw InputError("lax_propagate: w must be finite");
    const double E = table.E_at(s);
    if (w <= kForwardLimit) return lax_propagate_from(table, s, w, E, E);
    // (E, E) spans the solution that is subdominant as w -> +inf. Forward propagation
    // amplifies any error by ~exp(w^3/3 - s w), so recover that solution backward from a
    // point W where the other mode is negligible, then fix its scale at w = 0.
    const double q = table.q_at(s);
    const double qp = table.q_prime_at(s);
    double W = w;
    auto separation = [&](double top) {
        return (top * top * top - w * w * w) / 3.0 - (s + 2.0 * q * q) * (top - w);
    };
    while (separation(W) < 45.0) W += 0.25;
    double f = 1.0, g = q / W, log_scale = 0.0;
    propagate(s, q, qp, W, w, f, g, log_scale);
    const double fw = f, gw = g, log_w = log_scale;
    propagate(s, q, qp, w, 0.0, f, g, log_scale);
    // least-squares scale onto (E, E)
    const double c = E * (f + g) / (f * f + g * g);
    const double log_c = std::log(std::abs(c)) - log_scale + log_w;
    const double sign = c < 0.0 ? -1.0 : 1.0;
    return rescale(sign * fw, sign * gw, log_c, w);
}

double spiked_edge_cdf(const PainleveTable& table, double s, double w) {
    const auto [f, g] = lax_propagate(table, s, w);
    const double logE = table.log_E_at(s);
    const double logF = table.log_F_at(s);
    const double eh = std::exp(0.5 * logE);
    const double ehm = std::exp(-0.5 * logE);
    const double v = 0.5 * ((f + g) * ehm + (f - g) * eh) * std::exp(0.5 * logF);
    if (v < 0.0) {
        if (v >= -1e-9) return 0.0;
        std::ostringstream os;
        os << "spiked_edge_cdf: negative value " << v << " at s = " << s << ", w = " << w;
        throw NumericalError(os.str());
    }
    return v;
}

ResidualGrid pde_residual_general(const std::vector<double>& x, const std::vector<double>& w,
                                  const std::vector<double>& values, double c_ww, double c_w) {
    const std::size_t nx = x.size(), nw = w.size();
    if (nx < 3 || nw < 3) throw InputError("pde_residual: need at least 3 nodes per axis");
    if (values.size() != nx * nw) throw InputError("pde_residual: values size must be x.size() * w.size()");
    const double hx = (x.back() - x.front()) / static_cast<double>(nx - 1);
    const double hw = (w.back() - w.front()) / static_cast<double>(nw - 1);
    if (!(hx > 0.0) || !(hw > 0.0)) throw InputError("pde_residual: grids must be increasing");
    for (std::size_t i = 1; i < nx; ++i) {
        if (std::abs(x[i] - x[i - 1] - hx) > 1e-9 * std::max(1.0, std::abs(x[i]))) throw InputError("pde_residual: x grid not uniform");
    }
    for (std::size_t j = 1; j < nw; ++j) {
        if (std::abs(w[j] - w[j - 1] - hw) > 1e-9 * std::max(1.0, std::abs(w[j]))) throw InputError("pde_residual: w grid not uniform");
    }
    ResidualGrid out;
    if (hx > 0.1 || hw > 0.1) {
        std::ostringstream os;
        os << "grid steps (" << hx << ", " << hw << ") exceed 0.1; central differences are not meaningful";
        out.warning = os.str();
    }
    out.x.assign(x.begin() + 1, x.end() - 1);
    out.w.assign(w.begin() + 1, w.end() - 1);
    out.residual.resize((nx - 2) * (nw - 2));
    auto at = [&](std::size_t i, std::size_t j) { return values[i * nw + j]; };
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        for (std::size_t j = 1; j + 1 < nw; ++j) {
            const double fx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * hx);
            const double fw = (at(i, j + 1) - at(i, j - 1)) / (2.0 * hw);
            const double fww = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (hw * hw);
            const double r = fx + c_ww * fww + c_w * (x[i] - w[j] * w[j]) * fw;
            out.residual[(i - 1) * (nw - 2) + (j - 1)] = r;
            out.max_abs = std::max(out.max_abs, std::abs(r));
        }
    }
    return out;
}

ResidualGrid pde_residual(const std::vector<double>& x, const std::vector<double>& w,
                          const std::vector<double>& values, double beta) {
    if (!(beta > 0.0)) throw InputError("pde_residual: beta must be positive");
    return pde_residual_general(x, w, values, 2.0 / beta, 1.0);
}

EdgeDistribution edge_distribution(const PainleveTable& table, double w, double x_min, double x_max, double step) {
    if (!(step > 0.0) || !(x_max >= x_min)) throw InputError("edge_distribution: need step > 0 and x_max >= x_min");
    if (!table.contains(x_min) || !table.contains(x_max)) throw InputError("edge_distribution: range outside the table");
    EdgeDistribution d;
    d.w = w;
    const std::size_t m = static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9));
    d.x.resize(m + 1);
    d.values.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        d.x[i] = std::min(x_max, x_min + static_cast<double>(i) * step);
        d.values[i] = spiked_edge_cdf(table, d.x[i], w);
        if (d.values[i] > 1.0 + 1e-9) throw NumericalError("edge_distribution: value above 1");
        if (i > 0 && d.values[i] < d.values[i - 1] - 1e-9) {
            throw NumericalError("edge_distribution: not monotone in x");
        }
    }
    return d;
}

std::vector<double> reflect_w(const std::vector<double>& values, std::size_t nx, std::size_t nw) {
    if (values.size() != nx * nw) throw InputError("reflect_w: size mismatch");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nw; ++j) out[i * nw + j] = values[i * nw + (nw - 1 - j)];
    }
    return out;
}

}  // namespace spiked
