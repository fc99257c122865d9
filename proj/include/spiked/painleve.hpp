#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace spiked {

/// Hastings-McLeod solution of q'' = s q + 2 q^3, q ~ Ai(s), tabulated on a uniform grid
/// (stored with s increasing), together with
///   E(s) = exp(-int_s^inf q),   F(s) = exp(-int_s^inf (t - s) q^2),   J(s) = int_s^inf q^2.
/// Immutable once built; all queries interpolate with quintic Hermite polynomials that use
/// the exact derivatives available from the equation.
struct PainleveTable {
    double s_min = 0.0;
    double s_max = 0.0;
    double h = 0.0;
    /// Below this point q comes from the large-negative-s expansion (see solve_hastings_mcleod).
    double s_join = 0.0;
    std::vector<double> s;
    std::vector<double> q;
    std::vector<double> q_prime;
    std::vector<double> E;
    std::vector<double> F;
    std::vector<double> log_E;
    std::vector<double> log_F;
    std::vector<double> J;
    /// Largest local error estimate seen by step doubling.
    double max_step_error = 0.0;

    std::size_t size() const noexcept { return s.size(); }
    bool contains(double x) const noexcept { return x >= s_min && x <= s_max; }

    /// Interpolated values; throw InputError outside [s_min, s_max].
    double q_at(double x) const;
    double q_prime_at(double x) const;
    double log_E_at(double x) const;
    double log_F_at(double x) const;
    double E_at(double x) const;
    double F_at(double x) const;
};

/// Integrates backward from s_max with initial data (Ai, Ai') using a 24th-order Taylor
/// stepper in long double with step-doubling error estimates. The backward problem
/// amplifies perturbations roughly like exp(0.94 |s|^{3/2}) for s < 0, so below s_join the
/// table switches to the expansion sqrt(-s/2)(1 + 1/(8s^3) - 73/(128 s^6) + ...), whose
/// error there is below 1e-9. The E, F integrals start from the Airy tails at s_max.
/// Requires s_max >= 8, s_min <= -10, h <= 0.01 and (s_max - s_min)/h integral.
/// Throws NumericalError if |q| exceeds 1e6.
PainleveTable solve_hastings_mcleod(double s_min = -12.0, double s_max = 12.0, double h = 0.005,
                                    double s_join = -8.0);

/// CSV with header s,q,q_prime,E,F (17 significant digits). Reading rebuilds the derived
/// columns from these five.
void write_painleve_csv(const PainleveTable& table, std::ostream& out);
PainleveTable read_painleve_csv(std::istream& in);

/// sqrt(E(s) F(s)).
double tw_goe_cdf(const PainleveTable& table, double s);

/// Solution at w of d/dw (f, g) = A(w) (f, g) with q, q' frozen at s and f = g = E(s) at
/// w = 0, where A = [[q^2, -w q - q'], [-w q + q', w^2 - s - q^2]]. Fourth-order Magnus
/// steps of size <= 0.005 with exact 2x2 exponentials. For w <= 1 the system is integrated
/// forward from w = 0. For w > 1 forward integration amplifies rounding by about
/// exp(w^3/3 - s w), so the solution is taken as the mode that is subdominant as w grows:
/// it is integrated backward from a point W with (W^3 - w^3)/3 - (s + 2q^2)(W - w) >= 45 and
/// fitted to (E, E) at w = 0. Throws NumericalError if the solution leaves double range.
std::pair<double, double> lax_propagate(const PainleveTable& table, double s, double w);
/// Same system from an arbitrary initial vector at w = 0 (used for linearity checks).
std::pair<double, double> lax_propagate_from(const PainleveTable& table, double s, double w, double f0, double g0);

/// (1/2)((f + g) E^{-1/2} + (f - g) E^{1/2}) F^{1/2}; values in [-1e-9, 0) are clamped to 0,
/// more negative values raise NumericalError.
double spiked_edge_cdf(const PainleveTable& table, double s, double w);

/// F^box(.; w) tabulated on a uniform x grid.
struct EdgeDistribution {
    double w = 0.0;
    std::vector<double> x;
    std::vector<double> values;
};
/// Tabulates spiked_edge_cdf on [x_min, x_max] with the given step (x_max included when it
/// falls on the grid). Throws InputError for an empty or out-of-table range and
/// NumericalError if the values decrease by more than 1e-9 or leave [-1e-9, 1 + 1e-9].
EdgeDistribution edge_distribution(const PainleveTable& table, double w, double x_min, double x_max, double step);

/// Central-difference residual of dF/dx + (2/beta) d2F/dw2 + (x - w^2) dF/dw on a uniform
/// grid. values is row-major with index [i * w.size() + j] for (x[i], w[j]).
struct ResidualGrid {
    std::vector<double> x;  // interior x nodes
    std::vector<double> w;  // interior w nodes
    std::vector<double> residual;
    double max_abs = 0.0;
    std::string warning;  // non-empty when the grid is too coarse to be meaningful
};
ResidualGrid pde_residual(const std::vector<double>& x, const std::vector<double>& w,
                          const std::vector<double>& values, double beta);
/// The same field read with w -> -w (values reflected along the w axis, grid unchanged).
std::vector<double> reflect_w(const std::vector<double>& values, std::size_t nx, std::size_t nw);
/// Residual of dF/dx + c_ww d2F/dw2 + c_w (x - w^2) dF/dw, for diagnosing scale conventions.
ResidualGrid pde_residual_general(const std::vector<double>& x, const std::vector<double>& w,
                                  const std::vector<double>& values, double c_ww, double c_w);

}  // namespace spiked
