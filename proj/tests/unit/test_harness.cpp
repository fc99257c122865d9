#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "spiked/errors.hpp"
#include "spiked/harness.hpp"
#include "spiked/rng.hpp"
#include "support.hpp"

using namespace spiked;
using spiked::testing::column;

namespace {

// sup |F_a - F_b| evaluated at every sample point, O(n m)
double brute_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    auto ecdf = [](const std::vector<double>& v, double x) {
        return static_cast<double>(std::count_if(v.begin(), v.end(), [x](double y) { return y <= x; })) /
               static_cast<double>(v.size());
    };
    for (const auto* v : {&a, &b}) {
        for (double x : *v) d = std::max(d, std::abs(ecdf(a, x) - ecdf(b, x)));
    }
    return d;
}

std::vector<double> uniforms(std::size_t n, std::uint64_t seed, std::uint64_t index) {
    Rng rng(seed, 0, index);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform();
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("Kolmogorov survival function") {
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(kolmogorov_survival(1.9495) == doctest::Approx(0.001).epsilon(2e-3));
    // the small-lambda theta series and the alternating series agree across the switch
    for (double lambda : {0.6, 0.8, 0.99}) {
        double alt = 0.0, sign = 1.0;
        for (int k = 1; k <= 400; ++k) {
            alt += sign * std::exp(-2.0 * k * k * lambda * lambda);
            sign = -sign;
        }
        CHECK(kolmogorov_survival(lambda) == doctest::Approx(2.0 * alt).epsilon(1e-10));
    }
    double prev = 1.0;
    for (double l = 0.05; l < 3.0; l += 0.05) {
        CHECK(kolmogorov_survival(l) <= prev);
        prev = kolmogorov_survival(l);
    }
}

TEST_CASE("two-sample KS statistic") {
    const std::vector<double> a = uniforms(50, 1, 0);
    const KSResult same = ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    std::vector<double> shifted(a);
    for (double& x : shifted) x += 2.0;
    const KSResult disjoint = ks_two_sample(a, shifted);
    CHECK(disjoint.statistic == 1.0);
    CHECK(disjoint.p_value < 1e-10);

    for (std::uint64_t r = 0; r < 20; ++r) {
        std::vector<double> x = uniforms(37, 2, r), y = uniforms(53, 3, r);
        // coarse rounding creates ties within and across samples
        for (double& v : x) v = std::round(v * 20.0) / 20.0;
        for (double& v : y) v = std::round(v * 20.0 + 0.3) / 20.0;
        std::sort(y.begin(), y.end());
        const KSResult ks = ks_two_sample(x, y);
        CHECK(ks.statistic == doctest::Approx(brute_two_sample(x, y)).epsilon(1e-14));
        CHECK(ks.n == 37);
        CHECK(ks.m == 53);
    }

    std::vector<double> unsorted(a);
    std::swap(unsorted[3], unsorted[4]);
    CHECK_THROWS_AS(ks_two_sample(unsorted, a), InputError);
    CHECK_THROWS_AS(ks_two_sample(std::vector<double>(a.begin(), a.begin() + 9), a), InputError);
}

TEST_CASE("one-sample KS statistic") {
    for (std::uint64_t r = 0; r < 10; ++r) {
        const std::vector<double> a = uniforms(40, 4, r);
        const KSResult ks = ks_one_sample(a, [](double x) { return x; });
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            d = std::max({d, (i + 1.0) / 40.0 - a[i], a[i] - i / 40.0});
        }
        CHECK(ks.statistic == doctest::Approx(d).epsilon(1e-14));
        CHECK(ks.m == 0);
    }
    const std::vector<double> a = uniforms(40, 4, 0);
    CHECK_THROWS_AS(ks_one_sample(a, [](double x) { return 1.0 - x; }), InputError);
    CHECK_THROWS_AS(ks_one_sample(a, [](double x) { return 2.0 * x; }), InputError);
}

TEST_CASE("KS p-values are calibrated under the null") {
    int one = 0, two = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        const std::vector<double> a = uniforms(200, 5, r), b = uniforms(150, 6, r);
        if (ks_one_sample(a, [](double x) { return x; }).p_value < 0.01) ++one;
        if (ks_two_sample(a, b).p_value < 0.01) ++two;
    }
    // expected 10 rejections, binomial sd ~3.1
    CHECK(one >= 1);
    CHECK(one <= 22);
    CHECK(two >= 1);
    CHECK(two <= 22);
}

TEST_CASE("parallel_for visits each index once and propagates errors") {
    for (std::size_t threads : {1u, 3u, 0u}) {
        std::vector<std::atomic<int>> hits(97);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
        for (auto& h : hits) CHECK(h.load() == 1);
    }
    CHECK_THROWS_AS(parallel_for(10, 2,
                                 [](std::size_t i) {
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    parallel_for(0, 4, [](std::size_t) { FAIL("called"); });
}

TEST_CASE("construction names") {
    for (Construction c : {Construction::kBidiagonal, Construction::kSecular, Construction::kPencil,
                           Construction::kMultiSpike, Construction::kSao}) {
        CHECK(parse_construction(construction_name(c)) == c);
    }
    CHECK_THROWS_AS(parse_construction("lanczos"), InputError);
}

TEST_CASE("sample_batch: ordering, determinism, rejection") {
    const SpikeConfig cfg{2.0, 6.0, 4, {1.0}};
    const SpikeConfig multi{2.0, 6.0, 4, {1.0, 2.0, 0.5, 3.0}};
    for (Construction c : {Construction::kBidiagonal, Construction::kSecular, Construction::kPencil,
                           Construction::kMultiSpike}) {
        const SpikeConfig& use = c == Construction::kMultiSpike ? multi : cfg;
        const auto one = sample_batch(c, use, 64, 11, {.threads = 1});
        const auto three = sample_batch(c, use, 64, 11, {.threads = 3});
        CHECK(one == three);
        for (const auto& s : one) {
            CHECK(std::is_sorted(s.begin(), s.end(), std::greater<>()));
        }
    }
    CHECK(sample_batch(Construction::kSecular, cfg, 8, 11) != sample_batch(Construction::kSecular, cfg, 8, 12));
    CHECK_THROWS_AS(sample_batch(Construction::kSao, cfg, 8, 11), InputError);
    CHECK_THROWS_AS(sample_batch(Construction::kSecular, SpikeConfig{0.0, 6.0, 4, {1.0}}, 8, 11), InputError);
}

TEST_CASE("KS detects a shifted spike") {
    const SpikeConfig a{2.0, 6.0, 6, {1.0}}, b{2.0, 6.0, 6, {1.5}};
    const auto sa = sample_batch(Construction::kSecular, a, 10000, 21);
    const auto sb = sample_batch(Construction::kSecular, b, 10000, 22);
    CHECK(ks_two_sample(column(sa, 0), column(sb, 0)).p_value < 1e-3);
}

TEST_CASE("equivalence suite") {
    const SpikeConfig cfg{2.0, 6.0, 4, {1.0}};
    EquivalenceOptions opt;
    opt.batch.threads = 1;
    const SuiteReport r1 = equivalence_suite(cfg, 4000, 31, opt);
    CHECK(r1.pass());
    // 3 pairs x (3 top + 3 bottom + pooled)
    CHECK(r1.comparisons.size() == 21);
    opt.batch.threads = 2;
    const SuiteReport r2 = equivalence_suite(cfg, 4000, 31, opt);
    CHECK(r1.to_json().dump() == r2.to_json().dump());
}

TEST_CASE("hard-edge suite") {
    const SuiteReport r = hardedge_suite(2.0, {1.0, 2.0, 0.5}, 20000, 41);
    CHECK(r.pass());
    CHECK(r.to_json()["suite"] == r.suite);
}

TEST_CASE("edge scalings") {
    CHECK(spike_for_w(0.0, 200) == 2.0);
    CHECK(spike_for_w(1.0, 8) == doctest::Approx(2.0 - std::cbrt(2.0) / 2.0));
    CHECK(spiked_soft_edge_scale(16.0 * 27.0, 27) == 0.0);
    CHECK(spiked_soft_edge_scale(16.0 * 2.0 + 8.0, 2) == doctest::Approx(1.0));
}

TEST_CASE("CSV writers") {
    std::ostringstream s;
    write_samples_csv(s, {{3.0, 1.0 / 3.0}, {2.0, 1.0}});
    CHECK(s.str() == "lambda_1,lambda_2\n3,0.33333333333333331\n2,1\n");
    std::ostringstream c;
    const std::vector<double> x{0.5, 1.0}, y{0.25, 0.1};
    write_curve_csv(c, "x", "F", x, y);
    CHECK(c.str() == "x,F\n0.5,0.25\n1,0.10000000000000001\n");
    CHECK_THROWS_AS(write_text_file("/nonexistent-dir/out.txt", "x"), InputError);
}
