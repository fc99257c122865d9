#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "spiked/airy.hpp"
#include "spiked/errors.hpp"
#include "spiked/painleve.hpp"

using namespace spiked;

namespace {

const PainleveTable& table() {
    static const PainleveTable t = solve_hastings_mcleod();
    return t;
}

}  // namespace

TEST_CASE("Hastings-McLeod: boundary behaviour and positivity") {
    const PainleveTable& t = table();
    CHECK(t.q_at(8.0) / airy(8.0).ai == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(t.q_at(t.s_max) / airy(t.s_max).ai == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.E_at(t.s_max) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.F_at(t.s_max) == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.q[i] > 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t.s[i] > 0.0) CHECK(t.q[i] < t.q[i - 1]);
        CHECK(t.E[i] >= t.E[i - 1]);
        CHECK(t.F[i] >= t.F[i - 1]);
        CHECK(t.E[i] <= 1.0);
        CHECK(t.F[i] <= 1.0);
    }
    CHECK(t.max_step_error < 1e-12);
}

TEST_CASE("Hastings-McLeod: q(0) under step halving") {
    const double q0 = table().q_at(0.0);
    const PainleveTable fine = solve_hastings_mcleod(-12.0, 12.0, 0.0025);
    CHECK(std::abs(fine.q_at(0.0) - q0) < 1e-11);
    // the usual four-digit quotation 0.3673 is 0.36706... rounded loosely
    CHECK(std::abs(q0 - 0.3673) < 5e-4);
    CHECK(q0 == doctest::Approx(0.36706155).epsilon(1e-8));
}

TEST_CASE("Hastings-McLeod: large negative s follows sqrt(-s/2)") {
    const PainleveTable& t = table();
    for (double s : {-12.0, -10.0, -8.5}) CHECK(t.q_at(s) == doctest::Approx(std::sqrt(-s / 2.0)).epsilon(1e-3));
    // the Taylor part continues smoothly through the join
    const double h = 1e-3;
    CHECK(t.q_at(t.s_join + h) - t.q_at(t.s_join - h) == doctest::Approx(2.0 * h * t.q_prime_at(t.s_join)).epsilon(1e-6));
}

TEST_CASE("Hastings-McLeod: arguments") {
    CHECK_THROWS_AS(solve_hastings_mcleod(-12.0, 6.0), InputError);
    CHECK_THROWS_AS(solve_hastings_mcleod(-8.0, 12.0), InputError);
    CHECK_THROWS_AS(solve_hastings_mcleod(-12.0, 12.0, 0.02), InputError);
    CHECK_THROWS_AS(table().q_at(13.0), InputError);
    CHECK_THROWS_AS(tw_goe_cdf(table(), -13.0), InputError);
}

TEST_CASE("Tracy-Widom GOE cdf") {
    const PainleveTable& t = table();
    CHECK(tw_goe_cdf(t, t.s_max) == doctest::Approx(1.0).epsilon(1e-6));
    double prev = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double f = tw_goe_cdf(t, t.s[i]);
        CHECK(f >= prev);
        CHECK(f * f == doctest::Approx(t.E[i] * t.F[i]).epsilon(1e-12));
        prev = f;
    }
    double lo = -3.0, hi = 0.0;
    for (int k = 0; k < 60; ++k) {
        const double m = 0.5 * (lo + hi);
        (tw_goe_cdf(t, m) < 0.5 ? lo : hi) = m;
    }
    CHECK(lo == doctest::Approx(-1.27).epsilon(0.01));
    // mean = s_max - int F over the table (the mass below s_min is negligible)
    double integral = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        integral += 0.5 * (t.s[i] - t.s[i - 1]) * (tw_goe_cdf(t, t.s[i]) + tw_goe_cdf(t, t.s[i - 1]));
    }
    CHECK(t.s_max - integral == doctest::Approx(-1.2065).epsilon(1e-3));
}

TEST_CASE("Lax system: initial value, linearity and the q = 0 reduction") {
    const PainleveTable& t = table();
    for (double s : {-3.0, 0.0, 2.0}) {
        const auto [f, g] = lax_propagate(t, s, 0.0);
        CHECK(f == t.E_at(s));
        CHECK(g == t.E_at(s));
    }
    for (double s : {-2.0, 1.0}) {
        for (double w : {-2.0, 0.7}) {
            const auto a = lax_propagate_from(t, s, w, 1.0, 0.0);
            const auto b = lax_propagate_from(t, s, w, 0.0, 1.0);
            const auto c = lax_propagate_from(t, s, w, 0.3, -2.0);
            CHECK(std::abs(c.first - (0.3 * a.first - 2.0 * b.first)) < 1e-10 * (1.0 + std::abs(c.first)));
            CHECK(std::abs(c.second - (0.3 * a.second - 2.0 * b.second)) < 1e-10 * (1.0 + std::abs(c.second)));
        }
    }
    // at s = 12 the coefficients reduce to f' = -w q f ~ 0, g' = (w^2 - s) g
    const double s = 12.0;
    for (double w : {-1.0, 0.5, 2.0}) {
        const auto [f, g] = lax_propagate_from(t, s, w, 1.0, 1.0);
        CHECK(f == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(g == doctest::Approx(std::exp(w * w * w / 3.0 - s * w)).epsilon(1e-8));
    }
}

TEST_CASE("Lax system: forward and subdominant routes agree above w = 1") {
    const PainleveTable& t = table();
    for (double s : {-2.0, 0.0, 1.5}) {
        for (double w : {1.2, 1.8}) {
            const double E = t.E_at(s);
            const auto forward = lax_propagate_from(t, s, w, E, E);
            const auto chosen = lax_propagate(t, s, w);
            CHECK(chosen.first == doctest::Approx(forward.first).epsilon(1e-8));
            CHECK(chosen.second == doctest::Approx(forward.second).epsilon(1e-8));
        }
    }
}

TEST_CASE("spiked edge cdf") {
    const PainleveTable& t = table();
    for (std::size_t i = 0; i < t.size(); i += 7) {
        CHECK(std::abs(spiked_edge_cdf(t, t.s[i], 0.0) - tw_goe_cdf(t, t.s[i])) < 1e-10);
    }
    for (double w : {-2.0, -1.0, 1.0, 2.0, 4.0}) {
        double prev = -1.0;
        for (double x = -6.0; x <= 6.0; x += 0.05) {
            const double f = spiked_edge_cdf(t, x, w);
            CHECK(f >= -1e-9);
            CHECK(f <= 1.0 + 1e-9);
            CHECK(f >= prev - 1e-9);
            prev = f;
        }
    }
    // stronger spikes (w -> -inf) push the largest eigenvalue out
    CHECK(spiked_edge_cdf(t, 0.0, -8.0) < 1e-2);
    // monotone in w at fixed x
    CHECK(spiked_edge_cdf(t, -1.0, -1.0) < spiked_edge_cdf(t, -1.0, 0.0));
    CHECK(spiked_edge_cdf(t, -1.0, 0.0) < spiked_edge_cdf(t, -1.0, 1.0));
}

TEST_CASE("edge distribution curves") {
    const EdgeDistribution d = edge_distribution(table(), -1.0, -8.0, 8.0, 0.1);
    CHECK(d.x.size() == 161);
    CHECK(d.values.front() < 1e-6);
    CHECK(d.values.back() > 0.9999);
    for (std::size_t i = 0; i < d.x.size(); i += 10) CHECK(d.values[i] == spiked_edge_cdf(table(), d.x[i], -1.0));
    for (std::size_t i = 1; i < d.values.size(); ++i) CHECK(d.values[i] >= d.values[i - 1] - 1e-9);
    CHECK_THROWS_AS(edge_distribution(table(), 0.0, -20.0, 0.0, 0.1), InputError);
}

TEST_CASE("table CSV round trip") {
    std::stringstream io;
    write_painleve_csv(table(), io);
    std::string header;
    std::getline(std::stringstream(io.str()), header);
    CHECK(header == "s,q,q_prime,E,F");
    const PainleveTable back = read_painleve_csv(io);
    REQUIRE(back.size() == table().size());
    for (double s : {-11.3, -4.0, 0.0, 3.7, 11.9}) {
        CHECK(back.q_at(s) == doctest::Approx(table().q_at(s)).epsilon(1e-14));
        CHECK(tw_goe_cdf(back, s) == doctest::Approx(tw_goe_cdf(table(), s)).epsilon(1e-12));
        CHECK(spiked_edge_cdf(back, s, -1.0) == doctest::Approx(spiked_edge_cdf(table(), s, -1.0)).epsilon(1e-10));
    }
    std::stringstream bad("s,q,q_prime,E,F\n0,1,2\n");
    CHECK_THROWS_AS(read_painleve_csv(bad), InputError);
}

TEST_CASE("pde residual on synthetic fields") {
    std::vector<double> x, w;
    for (int i = 0; i <= 20; ++i) x.push_back(-1.0 + 0.05 * i);
    for (int j = 0; j <= 16; ++j) w.push_back(-0.4 + 0.05 * j);
    std::vector<double> ones(x.size() * w.size(), 1.0), lin(x.size() * w.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) lin[i * w.size() + j] = x[i];
    }
    const ResidualGrid r0 = pde_residual(x, w, ones, 4.0);
    CHECK(r0.max_abs == 0.0);
    CHECK(r0.warning.empty());
    const ResidualGrid r1 = pde_residual(x, w, lin, 4.0);
    for (double v : r1.residual) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r1.x.size() == x.size() - 2);
    CHECK(r1.w.size() == w.size() - 2);

    const std::vector<double> coarse_x{0.0, 0.5, 1.0}, coarse_w{0.0, 0.5, 1.0};
    const std::vector<double> field(9, 1.0);
    CHECK_FALSE(pde_residual(coarse_x, coarse_w, field, 4.0).warning.empty());

    const std::vector<double> twice = reflect_w(reflect_w(lin, x.size(), w.size()), x.size(), w.size());
    CHECK(twice == lin);
}
