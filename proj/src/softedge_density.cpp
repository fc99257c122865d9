#include "spiked/softedge_density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/airy.hpp>

#include "spiked/airy.hpp"
#include "spiked/errors.hpp"
#include "spiked/quadrature.hpp"

namespace spiked {

namespace {

constexpr double kGridHi = 20.0;
constexpr double kCell = 0.05;

double ai(double x) { return boost::math::airy_ai(x); }
double aip(double x) { return boost::math::airy_ai_prime(x); }

template <class F>
double gauss10(F&& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

void require_nonpositive_w(double w, const char* where) {
    if (std::isnan(w)) throw InputError(std::string(where) + ": w is NaN");
    if (w > 0.0) {
        std::ostringstream os;
        os << where << ": w = " << w
           << " > 0 is outside the supported domain (the kernel formula diverges); "
              "estimate the density by Monte Carlo instead";
        throw InputError(os.str());
    }
}

// Phi(y) = int_{-inf}^y e^{p(s-y)} Ai(s) ds
double phi_start(double p, double y) {
    if (p == 0.0) return 1.0 - airy_tail_integral(y);
    const double exponent = p * p * p / 3.0 - p * y;
    if (exponent < 12.0) {
        // int_R e^{pt} Ai(t) dt = e^{p^3/3}; the tail integrand peaks near t = p^2
        const double upper = std::min(40.0, std::max(y, p * p) + 15.0);
        const double tail = integrate_panels([p, y](double t) { return std::exp(p * (t - y)) * ai(t); }, y, upper, 0.5);
        return std::exp(exponent) - tail;
    }
    const double depth = 37.0 / p;
    return integrate_panels([p, y](double s) { return std::exp(p * (s - y)) * ai(s); }, y - depth, y, 0.25);
}

// Phi(y) from Phi(a), a <= y, exactly up to quadrature of a smooth integrand.
double phi_step(double p, double a, double phi_a, double y) {
    if (y == a) return phi_a;
    return std::exp(-p * (y - a)) * phi_a + gauss10([p, y](double r) { return std::exp(-p * (y - r)) * ai(r); }, a, y);
}

struct CellIntegrals {
    double s2 = 0.0;
    double s3 = 0.0;
};

// int_a^b Ai' Phi and int_a^b AiInt (Ai - p Phi), with b - a <= kCell.
CellIntegrals cell_integrals(double p, double a, double phi_a, double b) {
    CellIntegrals c;
    if (b <= a) return c;
    c.s2 = gauss10([&](double y) { return aip(y) * phi_step(p, a, phi_a, y); }, a, b);
    c.s3 = gauss10([&](double y) { return airy_tail_integral(y) * (ai(y) - p * phi_step(p, a, phi_a, y)); }, a, b);
    return c;
}

// Same over an arbitrary interval, split into cells.
CellIntegrals span_integrals(double p, double a, double phi_a, double b) {
    CellIntegrals total;
    const std::size_t m = static_cast<std::size_t>(std::ceil((b - a) / kCell));
    double lo = a;
    double phi_lo = phi_a;
    for (std::size_t i = 0; i < m; ++i) {
        const double hi = (i + 1 == m) ? b : a + static_cast<double>(i + 1) * (b - a) / static_cast<double>(m);
        const CellIntegrals c = cell_integrals(p, lo, phi_lo, hi);
        total.s2 += c.s2;
        total.s3 += c.s3;
        phi_lo = phi_step(p, lo, phi_lo, hi);
        lo = hi;
    }
    return total;
}

double combine(double X, double w, const CellIntegrals& s) {
    return 0.5 * airy_kernel_diagonal_closed_form(X) - 0.5 * s.s2 - 0.25 * w * s.s3;
}

}  // namespace

double density_species_y(double X) {
    if (std::isnan(X) || X < -10.0) throw InputError("density_species_y: requires X >= -10");
    if (X > 40.0) return 0.0;
    return 0.5 * airy_kernel_diagonal_closed_form(X) - 0.25 * airy(X).ai * airy_tail_integral(X);
}

double goe_soft_edge_density(double X) {
    if (std::isnan(X) || X < -25.0) throw InputError("goe_soft_edge_density: requires X >= -25");
    if (X > 40.0) return 0.0;
    return airy_kernel_diagonal_closed_form(X) + 0.5 * airy(X).ai * (1.0 - airy_tail_integral(X));
}

BlindDensityCurve::BlindDensityCurve(double w, double x_min, BlindDomain domain)
    : w_(w), p_(-0.5 * w), x_min_(x_min), step_(kCell) {
    if (domain == BlindDomain::kConvergent) {
        require_nonpositive_w(w, "BlindDensityCurve");
    } else if (!std::isfinite(w) || std::abs(w) > 12.0) {
        throw InputError("BlindDensityCurve: continued evaluation needs |w| <= 12");
    }
    if (std::isnan(x_min) || x_min < -20.0) throw InputError("BlindDensityCurve: x_min must be >= -20");
    const double hi = std::max(kGridHi, x_min + kCell);
    const std::size_t m = static_cast<std::size_t>(std::ceil((hi - x_min) / kCell));
    phi_.resize(m + 1);
    s2_.assign(m + 1, 0.0);
    s3_.assign(m + 1, 0.0);
    if (p_ >= 0.0) {
        phi_[0] = phi_start(p_, x_min);
        for (std::size_t i = 0; i < m; ++i) {
            phi_[i + 1] = phi_step(p_, x_min + static_cast<double>(i) * kCell, phi_[i],
                                   x_min + static_cast<double>(i + 1) * kCell);
        }
    } else {
        // Phi = e^{p^3/3 - p y} - T(y) with T(y) = int_y^inf e^{p(t-y)} Ai(t) dt; the
        // forward recursion amplifies by e^{|p| h} per cell, so T is built right to left.
        const double top = x_min + static_cast<double>(m) * kCell;
        double T = integrate_panels([this, top](double t) { return std::exp(p_ * (t - top)) * ai(t); }, top,
                                    std::min(40.0, top + 15.0), 0.5);
        for (std::size_t i = m + 1; i-- > 0;) {
            const double y = x_min + static_cast<double>(i) * kCell;
            if (i < m) {
                T = std::exp(p_ * kCell) * T +
                    gauss10([this, y](double t) { return std::exp(p_ * (t - y)) * ai(t); }, y, y + kCell);
            }
            phi_[i] = std::exp(p_ * p_ * p_ / 3.0 - p_ * y) - T;
        }
    }
    // Ai'(y) and AiInt(y) Ai(y) are below 1e-25 past y = 20, so the tails start at zero.
    for (std::size_t i = m; i-- > 0;) {
        const double a = x_min + static_cast<double>(i) * kCell;
        const CellIntegrals c = cell_integrals(p_, a, phi_[i], a + kCell);
        s2_[i] = s2_[i + 1] + c.s2;
        s3_[i] = s3_[i + 1] + c.s3;
    }
}

double BlindDensityCurve::phi(double X) const {
    if (std::isnan(X) || X < x_min_) throw InputError("BlindDensityCurve: X below x_min");
    const double r = (X - x_min_) / step_;
    const std::size_t k = std::min(static_cast<std::size_t>(r), phi_.size() - 1);
    return phi_step(p_, x_min_ + static_cast<double>(k) * step_, phi_[k], X);
}

double BlindDensityCurve::operator()(double X) const {
    if (std::isnan(X) || X < x_min_) throw InputError("BlindDensityCurve: X below x_min");
    if (X > 40.0) return 0.0;
    const double r = (X - x_min_) / step_;
    const std::size_t k = static_cast<std::size_t>(r);
    if (k + 1 >= phi_.size()) {
        // beyond the table everything is below 1e-25 but stay consistent
        const CellIntegrals s = span_integrals(p_, X, phi_start(p_, X), std::min(40.0, X + 8.0));
        return combine(X, w_, s);
    }
    const double node = x_min_ + static_cast<double>(k) * step_;
    const double phi_x = phi_step(p_, node, phi_[k], X);
    const CellIntegrals c = cell_integrals(p_, X, phi_x, node + step_);
    return combine(X, w_, {s2_[k + 1] + c.s2, s3_[k + 1] + c.s3});
}

BlindDensityCurve spiked_blind_density(double w_edge, double x_min) {
    if (!std::isfinite(w_edge) || std::abs(w_edge) > 6.0) throw InputError("spiked_blind_density: needs |w| <= 6");
    return BlindDensityCurve(-2.0 * w_edge, x_min, BlindDomain::kContinued);
}

double density_blind(double X, double w) {
    require_nonpositive_w(w, "density_blind");
    if (std::isnan(X) || X < -8.0) throw InputError("density_blind: requires X >= -8");
    if (X > 40.0) return 0.0;
    const double p = -0.5 * w;
    const CellIntegrals s = span_integrals(p, X, phi_start(p, X), std::max(kGridHi, std::min(40.0, X + 8.0)));
    return combine(X, w, s);
}

double airy_kernel_dy(double X, double Y) {
    const double lo = std::min(X, Y);
    const double hi = std::max(X, Y);
    const double upper = std::min(std::max(9.0 - lo, 8.0), 40.0 - hi);
    if (upper <= 0.0) return 0.0;
    return integrate_panels([X, Y](double u) { return ai(u + X) * aip(u + Y); }, 0.0, upper, 0.5);
}

double density_blind_direct(double X, double w) {
    require_nonpositive_w(w, "density_blind_direct");
    if (std::isnan(X) || X < -8.0) throw InputError("density_blind_direct: requires X >= -8");
    const double depth = (w == 0.0) ? 40.0 : std::log(1e10) / (-0.5 * w);
    const double t_lo = X - depth;
    auto weight = [X, w](double t) { return std::exp(0.5 * w * (X - t)); };

    const double term2 = integrate_panels([&](double t) { return weight(t) * airy_kernel_dy(t, X); }, t_lo, X, 0.5);

    double term3 = 0.0;
    if (w != 0.0) {
        // int_X^inf du d/dt K(u, t) = int_0^inf Ai'(v + t) AiInt(v + X) dv
        auto inner = [X](double t) {
            const double upper = std::min(std::max(9.0 - std::min(t, X), 8.0), 40.0 - std::max(t, X));
            if (upper <= 0.0) return 0.0;
            return integrate_panels([t, X](double v) { return aip(v + t) * airy_tail_integral(v + X); }, 0.0, upper,
                                    0.5);
        };
        term3 = integrate_panels([&](double t) { return weight(t) * inner(t); }, t_lo, X, 0.5);
    }
    return 0.5 * airy_kernel_diagonal_closed_form(X) - 0.5 * term2 - 0.25 * w * term3;
}

}  // namespace spiked
