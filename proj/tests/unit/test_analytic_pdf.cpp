#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "spiked/analytic_pdf.hpp"
#include "spiked/errors.hpp"
#include "spiked/rng.hpp"
#include "spiked/sampling.hpp"
#include "support.hpp"

using namespace spiked;

namespace {

SpectrumSample spectrum(std::vector<double> v) {
    SpectrumSample s;
    s.values = std::move(v);
    return s;
}

// Strictly decreasing positive configuration with gaps of at least 0.3.
SpectrumSample random_config(std::size_t N, std::mt19937_64& gen, double spread = 4.0) {
    std::uniform_real_distribution<double> u(0.3, spread);
    std::vector<double> v(N);
    double t = 0.2;
    for (std::size_t i = N; i-- > 0;) v[i] = (t += u(gen));
    return spectrum(v);
}

// 1F1(beta/2; N beta/2; c x) as the Dirichlet(beta/2, ..., beta/2) average of exp(c sum u_j x_j), N = 2.
double dirichlet_average_n2(double beta, double c, double x1, double x2) {
    const double a = 0.5 * beta;
    // t = sin^2(theta) removes the endpoint singularities of the Beta weight
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    const double norm = std::tgamma(2.0 * a) / (std::tgamma(a) * std::tgamma(a));
    return norm * gk.integrate(
                      [&](double th) {
                          const double s = std::sin(th), c2 = std::cos(th), t = s * s;
                          return 2.0 * std::exp(c * (t * x1 + (1.0 - t) * x2)) * std::pow(s * c2, 2.0 * a - 1.0);
                      },
                      0.0, 0.5 * std::numbers::pi, 15, 1e-15);
}

// The same average at N = 3, beta = 4 (weights u1 u2 u3, no endpoint singularity).
double dirichlet_average_n3_beta4(double c, const SpectrumSample& x) {
    using G = boost::math::quadrature::gauss<double, 30>;
    const double norm = std::tgamma(6.0);
    return norm * G::integrate(
                      [&](double u1) {
                          return G::integrate(
                              [&](double s) {
                                  const double u2 = s * (1.0 - u1), u3 = 1.0 - u1 - u2;
                                  return std::exp(c * (u1 * x[0] + u2 * x[1] + u3 * x[2])) * u1 * u2 * u3 * (1.0 - u1);
                              },
                              0.0, 1.0);
                      },
                      0.0, 1.0);
}

}  // namespace

TEST_CASE("hyp1f1: normalization and one variable") {
    std::mt19937_64 gen(1);
    for (double beta : {1.0, 2.0, 4.0, 2.7}) {
        const SpectrumSample x = random_config(3, gen);
        CHECK(hyp1f1_spiked(beta, 3, 0.0, x) == doctest::Approx(1.0).epsilon(1e-10));
        for (double c : {-1.3, 0.4, 2.0}) {
            const SpectrumSample one = spectrum({1.7});
            CHECK(hyp1f1_spiked(beta, 1, c, one) == doctest::Approx(std::exp(c * 1.7)).epsilon(1e-10));
        }
    }
}

TEST_CASE("hyp1f1 equals the Dirichlet average of exp(c u.x)") {
    std::mt19937_64 gen(2);
    for (double beta : {1.0, 3.0, 4.0}) {
        for (int rep = 0; rep < 5; ++rep) {
            const SpectrumSample x = random_config(2, gen);
            const double c = std::uniform_real_distribution<double>(-1.5, 1.5)(gen);
            CHECK(hyp1f1_spiked(beta, 2, c, x) ==
                  doctest::Approx(dirichlet_average_n2(beta, c, x[0], x[1])).epsilon(1e-9));
        }
    }
    for (int rep = 0; rep < 5; ++rep) {
        const SpectrumSample x = random_config(3, gen);
        const double c = std::uniform_real_distribution<double>(-1.0, 1.0)(gen);
        CHECK(hyp1f1_spiked(4.0, 3, c, x) == doctest::Approx(dirichlet_average_n3_beta4(c, x)).epsilon(1e-9));
    }
}

TEST_CASE("hyp1f1 Kummer reflection at N = 2") {
    // with a = beta/2 and c = beta: 1F1(a; c; x) = e^{sum x} 1F1(c - a; c; -x) and c - a = a
    std::mt19937_64 gen(3);
    for (double beta : {1.0, 2.0, 4.0, 5.5}) {
        for (int rep = 0; rep < 5; ++rep) {
            const SpectrumSample x = random_config(2, gen);
            const double c = std::uniform_real_distribution<double>(-2.0, 2.0)(gen);
            CHECK(hyp1f1_spiked(beta, 2, c, x) ==
                  doctest::Approx(std::exp(c * (x[0] + x[1])) * hyp1f1_spiked(beta, 2, -c, x)).epsilon(1e-7));
        }
    }
}

TEST_CASE("hyp1f1 at beta = 2 matches the residue sum") {
    std::mt19937_64 gen(4);
    for (std::size_t N : {2u, 3u, 5u}) {
        for (int rep = 0; rep < 10; ++rep) {
            const SpectrumSample x = random_config(N, gen);
            const double c = std::uniform_real_distribution<double>(-1.0, 1.0)(gen);
            CHECK(hyp1f1_spiked(2.0, N, c, x) == doctest::Approx(hyp1f1_residue_beta2(c, x)).epsilon(1e-8));
        }
    }
}

TEST_CASE("residue sum: closed forms, quadrature and conditioning") {
    CHECK(hyp1f1_residue_beta2(0.7, spectrum({2.0})) == doctest::Approx(std::exp(1.4)));
    CHECK(hyp1f1_residue_beta2(0.0, spectrum({3.0, 1.0})) == doctest::Approx(1.0));
    CHECK(hyp1f1_residue_beta2(1e-6, spectrum({3.0, 1.0})) == doctest::Approx(1.0).epsilon(1e-5));
    boost::math::quadrature::gauss_kronrod<double, 31> gk;
    for (double c : {-2.0, -0.3, 0.8, 1.9}) {
        const double q = gk.integrate([&](double t) { return std::exp(c * (3.2 * t + 0.9 * (1.0 - t))); }, 0.0, 1.0);
        CHECK(hyp1f1_residue_beta2(c, spectrum({3.2, 0.9})) == doctest::Approx(q).epsilon(1e-9));
    }
    CHECK_THROWS_AS(hyp1f1_residue_beta2(1.0, spectrum({2.0, 2.0 - 1e-12})), NumericalError);
}

TEST_CASE("spiked_pdf: b = 1 and N = 1 reductions") {
    std::mt19937_64 gen(5);
    const SpikeConfig null_cfg{2.0, 5.0, 3, {1.0}};
    std::vector<double> ratios;
    for (int rep = 0; rep < 10; ++rep) {
        const SpectrumSample l = random_config(3, gen);
        ratios.push_back(spiked_pdf(null_cfg, l) / std::exp(log_spiked_prefactor(null_cfg, l.values)));
    }
    for (double r : ratios) CHECK(r == doctest::Approx(ratios[0]).epsilon(1e-8));

    const SpikeConfig one{4.0, 2.5, 1, {1.8}};
    ratios.clear();
    for (double l : {0.5, 1.7, 4.0, 9.0}) {
        const double expected = std::pow(l, 0.5 * 4.0 * 2.5 - 1.0) * std::exp(-l / (2.0 * 1.8));
        ratios.push_back(spiked_pdf(one, spectrum({l})) / expected);
    }
    for (double r : ratios) CHECK(r == doctest::Approx(ratios[0]).epsilon(1e-8));
}

TEST_CASE("spiked_pdf over the kernel hypergeometric is constant") {
    std::mt19937_64 gen(6);
    struct Case {
        double beta;
        std::size_t N;
        double n;
    };
    for (const Case& k : {Case{2.0, 3, 4.0}, Case{4.0, 3, 3.5}, Case{1.0, 4, 5.0}}) {
        const SpikeConfig cfg{k.beta, k.n, k.N, {2.3}};
        const double c = 0.5 * (1.0 - 1.0 / 2.3);
        std::vector<double> r;
        for (int rep = 0; rep < 15; ++rep) {
            const SpectrumSample l = random_config(k.N, gen);
            r.push_back(log_spiked_pdf(cfg, l) - log_spiked_prefactor(cfg, l.values) -
                        std::log(hyp1f1_spiked(k.beta, k.N, c, l)));
        }
        for (double v : r) CHECK(v == doctest::Approx(r[0]).epsilon(1e-7));
    }
}

TEST_CASE("spiked_pdf at beta = 2, N = 3 equals 2 pi times the residue oracle") {
    std::mt19937_64 gen(7);
    const double b = 1.6;
    const SpikeConfig cfg{2.0, 4.0, 3, {b}};
    const double mu = (b - 1.0) / (2.0 * b);
    for (int rep = 0; rep < 5; ++rep) {
        const SpectrumSample l = random_config(3, gen);
        // (1/2 pi i) int e^{w} prod (w - mu l_j)^{-1} dw = sum of residues = hyp1f1 at c = mu over (N-1)!
        const double residues = hyp1f1_residue_beta2(mu, l) / 2.0;
        const double expected = 2.0 * std::numbers::pi * std::exp(log_spiked_prefactor(cfg, l.values)) * residues;
        CHECK(spiked_pdf(cfg, l) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("log and product domains agree") {
    std::mt19937_64 gen(8);
    const SpikeConfig cfg{4.0, 5.0, 3, {2.0}};
    for (int rep = 0; rep < 10; ++rep) {
        const SpectrumSample l = random_config(3, gen);
        CHECK(std::log(spiked_pdf(cfg, l)) == doctest::Approx(log_spiked_pdf(cfg, l)).epsilon(1e-10));
        Rng rng(9, 0, rep);
        const InterlacedPair p = sample_secular_pair(cfg, rng);
        CHECK(std::log(joint_pdf(cfg, p)) == doctest::Approx(log_joint_pdf(cfg, p)).epsilon(1e-10));
    }
}

TEST_CASE("joint pdf: support and beta = 2 factors") {
    const SpikeConfig cfg{2.0, 4.0, 2, {1.5}};
    InterlacedPair bad{spectrum({3.0, 1.0}), spectrum({4.0})};
    CHECK(joint_pdf(cfg, bad) == 0.0);
    InterlacedPair p{spectrum({3.0, 1.0}), spectrum({2.0})};
    InterlacedPair q{spectrum({3.0, 1.0}), spectrum({2.9})};
    // with beta = 2 the |x - y| factors vanish: dependence on y is only e^{-(1 - 1/b) y / 2}
    CHECK(joint_pdf(cfg, p) / joint_pdf(cfg, q) == doctest::Approx(std::exp(-(1.0 - 1.0 / 1.5) * (2.0 - 2.9) / 2.0)));
}

TEST_CASE("joint pdf marginalized over y is proportional to spiked_pdf (N = 2)") {
    std::mt19937_64 gen(10);
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double beta : {3.0, 4.0}) {
        const SpikeConfig cfg{beta, 3.0, 2, {2.2}};
        std::vector<double> r;
        for (int rep = 0; rep < 6; ++rep) {
            const SpectrumSample x = random_config(2, gen);
            const double m = ts.integrate(
                [&](double y) { return joint_pdf(cfg, InterlacedPair{x, spectrum({y})}); }, x[1], x[0]);
            r.push_back(m / spiked_pdf(cfg, x));
        }
        for (double v : r) CHECK(v == doctest::Approx(r[0]).epsilon(1e-5));
    }
}

TEST_CASE("Dixon-Anderson conditional density") {
    const SpectrumSample x2 = spectrum({3.0, 1.0});
    CHECK(da_conditional_pdf(2.0, x2, spectrum({1.7})) == doctest::Approx(0.5));
    CHECK(da_conditional_pdf(2.0, x2, spectrum({3.5})) == 0.0);

    boost::math::quadrature::tanh_sinh<double> ts;
    for (double beta : {1.0, 4.0, 6.0}) {
        const double total = ts.integrate([&](double y) { return da_conditional_pdf(beta, x2, spectrum({y})); }, 1.0, 3.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }

    // product form written out independently at N = 3, beta = 4
    const SpectrumSample x3 = spectrum({6.0, 4.0, 2.0});
    const SpectrumSample y = spectrum({5.0, 3.0});
    double direct = std::tgamma(6.0) / std::pow(std::tgamma(2.0), 3.0) * (5.0 - 3.0);
    direct /= std::pow((6.0 - 4.0) * (6.0 - 2.0) * (4.0 - 2.0), 3.0);
    for (double yi : y.values) {
        for (double xj : x3.values) direct *= std::abs(yi - xj);
    }
    CHECK(da_conditional_pdf(4.0, x3, y) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::exp(log_da_conditional_pdf(4.0, x3, y)) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("hard-edge gap: closed forms and Monte Carlo") {
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(hard_edge_gap(0.0, ones) == 1.0);
    CHECK(hard_edge_gap(0.8, ones) == doctest::Approx(std::exp(-0.8 * 3.0 / 2.0)));

    const std::vector<double> spikes{1.0, 2.0, 3.0, 4.0};
    const SpikeConfig cfg{2.0, SpikeConfig::hard_edge_n(2.0, 4), 4, spikes};
    const std::size_t n = 100000;
    std::size_t survive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(13, 0, i);
        if (sample_multi_spike(cfg, rng).values.back() > 0.3) ++survive;
    }
    const double p = hard_edge_gap(0.3, spikes);
    CHECK(std::abs(static_cast<double>(survive) / n - p) < 3.0 * std::sqrt(p * (1.0 - p) / n));
}
