#include "spiked/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "spiked/errors.hpp"
#include "spiked/pencil.hpp"
#include "spiked/rng.hpp"
#include "spiked/softedge_density.hpp"
#include "spiked/tridiagonal.hpp"

namespace spiked {

namespace {

void require_sorted(std::span<const double> a, const char* where) {
    if (a.size() < 10) throw InputError(std::string(where) + ": need at least 10 values");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i])) throw InputError(std::string(where) + ": NaN in sample");
        if (i > 0 && a[i] < a[i - 1]) throw InputError(std::string(where) + ": sample is not sorted ascending");
    }
}

double ks_pvalue(double d, double effective_n) {
    const double root = std::sqrt(effective_n);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.0) {
        // 1 - sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2 / (8 lambda^2))
        const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double sum = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double term = std::exp(-static_cast<double>((2 * k - 1) * (2 * k - 1)) * c);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KSResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    require_sorted(a, "ks_two_sample");
    require_sorted(b, "ks_two_sample");
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    KSResult r;
    r.statistic = d;
    r.n = a.size();
    r.m = b.size();
    r.p_value = ks_pvalue(d, n * m / (n + m));
    return r;
}

KSResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf) {
    require_sorted(a, "ks_one_sample");
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    double prev = -1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        if (!(f >= -1e-9 && f <= 1.0 + 1e-9)) {
            std::ostringstream os;
            os << "ks_one_sample: cdf(" << a[i] << ") = " << f << " is outside [0, 1]";
            throw InputError(os.str());
        }
        if (f < prev - 1e-12) {
            std::ostringstream os;
            os << "ks_one_sample: cdf is not monotone near " << a[i];
            throw InputError(os.str());
        }
        prev = std::max(prev, f);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    KSResult r;
    r.statistic = std::clamp(d, 0.0, 1.0);
    r.n = a.size();
    r.p_value = ks_pvalue(r.statistic, n);
    return r;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

std::string_view construction_name(Construction c) {
    switch (c) {
        case Construction::kBidiagonal: return "bidiagonal";
        case Construction::kSecular: return "secular";
        case Construction::kPencil: return "pencil";
        case Construction::kMultiSpike: return "multispike";
        case Construction::kSao: return "sao";
    }
    return "unknown";
}

Construction parse_construction(std::string_view name) {
    for (Construction c : {Construction::kBidiagonal, Construction::kSecular, Construction::kPencil,
                           Construction::kMultiSpike, Construction::kSao}) {
        if (construction_name(c) == name) return c;
    }
    throw InputError("unknown construction '" + std::string(name) +
                     "' (expected bidiagonal, secular, pencil, multispike or sao)");
}

namespace {

template <class F>
void tagged(std::string_view tag, F&& f) {
    try {
        f();
    } catch (const InputError& e) {
        throw InputError("[" + std::string(tag) + "] " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError("[" + std::string(tag) + "] " + e.what());
    }
}

std::vector<double> draw_one(Construction c, const SpikeConfig& cfg, Rng& rng, const BatchOptions& opt) {
    switch (c) {
        case Construction::kBidiagonal: return spectrum_from_bidiagonal(sample_bidiagonal(cfg, rng)).values;
        case Construction::kSecular: return sample_secular_pair(cfg, rng, opt.zero_scale).x.values;
        case Construction::kPencil: return pencil_eigenvalues(sample_pencil(cfg, rng, opt.pencil_factor)).first.values;
        case Construction::kMultiSpike: return sample_multi_spike(cfg, rng).values;
        case Construction::kSao: break;
    }
    throw InputError("sample_batch: use sample_sao_batch for the stochastic Airy operator");
}

std::function<double(double)> clamped_cdf(std::function<double(double)> f, double lo, double hi) {
    return [f = std::move(f), lo, hi](double s) {
        if (s < lo) return 0.0;
        if (s > hi) return 1.0;
        return f(s);
    };
}

}  // namespace

std::vector<std::vector<double>> sample_batch(Construction c, const SpikeConfig& cfg, std::size_t n_samples,
                                              std::uint64_t seed, const BatchOptions& opt) {
    const std::string_view tag = construction_name(c);
    std::vector<std::vector<double>> out(n_samples);
    tagged(tag, [&] {
        cfg.validate();
        if (c == Construction::kSao) throw InputError("sample_batch: use sample_sao_batch for the stochastic Airy operator");
        const std::uint64_t stream = hash_tag(tag);
        parallel_for(n_samples, opt.threads, [&](std::size_t i) {
            Rng rng(seed, stream, i);
            out[i] = draw_one(c, cfg, rng, opt);
        });
    });
    return out;
}

std::vector<std::vector<double>> sample_sao_batch(const RobinSAOConfig& cfg, std::size_t n_samples, std::uint64_t seed,
                                                  std::size_t threads) {
    std::vector<std::vector<double>> out(n_samples);
    tagged("sao", [&] {
        cfg.intervals();
        const std::uint64_t stream = hash_tag("sao");
        parallel_for(n_samples, threads, [&](std::size_t i) {
            Rng rng(seed, stream, i);
            out[i] = sample_stochastic_airy(cfg, rng);
        });
    });
    return out;
}

bool SuiteReport::pass() const noexcept {
    return !comparisons.empty() &&
           std::all_of(comparisons.begin(), comparisons.end(), [](const Comparison& c) { return c.pass; });
}

namespace {

nlohmann::json comparison_json(const Comparison& c) {
    nlohmann::json j;
    j["name"] = c.name;
    j["statistic"] = c.statistic;
    j["p_value"] = std::isnan(c.p_value) ? nlohmann::json(nullptr) : nlohmann::json(c.p_value);
    j["threshold"] = c.threshold;
    j["pass"] = c.pass;
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

}  // namespace

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["parameters"] = parameters;
    j["pass"] = pass();
    j["comparisons"] = nlohmann::json::array();
    for (const auto& c : comparisons) j["comparisons"].push_back(comparison_json(c));
    if (!diagnostics.empty()) {
        j["diagnostics"] = nlohmann::json::array();
        for (const auto& c : diagnostics) j["diagnostics"].push_back(comparison_json(c));
    }
    return j;
}

Comparison ks_comparison(std::string name, const KSResult& ks, double level) {
    Comparison c;
    c.name = std::move(name);
    c.statistic = ks.statistic;
    c.p_value = ks.p_value;
    c.threshold = level;
    c.pass = ks.p_value >= level;
    c.detail = {{"n", ks.n}, {"m", ks.m}};
    return c;
}

// ---------------------------------------------------------------------------------------
// Equivalence

namespace {

nlohmann::json config_json(const SpikeConfig& cfg) {
    return {{"beta", cfg.beta}, {"n", cfg.n}, {"N", cfg.N}, {"spikes", cfg.spikes}};
}

std::vector<double> column(const std::vector<std::vector<double>>& samples, std::size_t idx) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.at(idx));
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<double> pooled(const std::vector<std::vector<double>>& samples) {
    std::vector<double> v;
    for (const auto& s : samples) v.insert(v.end(), s.begin(), s.end());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

SuiteReport equivalence_suite(const SpikeConfig& cfg, std::size_t n_samples, std::uint64_t seed,
                              const EquivalenceOptions& opt) {
    cfg.validate();
    cfg.spike();
    if (opt.order_stats == 0) throw InputError("equivalence_suite: order_stats must be positive");
    const std::array<Construction, 3> kinds{Construction::kBidiagonal, Construction::kSecular, Construction::kPencil};
    std::array<std::vector<std::vector<double>>, 3> samples;
    for (std::size_t k = 0; k < kinds.size(); ++k) samples[k] = sample_batch(kinds[k], cfg, n_samples, seed, opt.batch);

    const std::size_t N = cfg.N;
    const std::size_t r = std::min(opt.order_stats, N);
    std::vector<std::pair<std::string, std::size_t>> marginals;  // (label, index into decreasing list)
    for (std::size_t j = 0; j < r; ++j) marginals.emplace_back("top" + std::to_string(j + 1), j);
    for (std::size_t j = 0; j < r; ++j) marginals.emplace_back("bottom" + std::to_string(j + 1), N - 1 - j);
    const std::size_t per_pair = marginals.size() + 1;
    const double level = opt.alpha / static_cast<double>(3 * per_pair);

    SuiteReport rep;
    rep.suite = "equivalence";
    rep.seed = seed;
    rep.parameters = config_json(cfg);
    rep.parameters["samples"] = n_samples;
    rep.parameters["alpha"] = opt.alpha;
    rep.parameters["bonferroni_level"] = level;
    rep.parameters["zero_mass_scale"] = opt.batch.zero_scale == ZeroMassScale::kChiSquare ? "chi-square" : "printed";
    rep.parameters["pencil_spike_factor"] = opt.batch.pencil_factor == PencilSpikeFactor::kLinear ? "b" : "sqrt(b)";
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
            const std::string pair = std::string(construction_name(kinds[a])) + "/" + std::string(construction_name(kinds[b]));
            for (const auto& [label, idx] : marginals) {
                rep.comparisons.push_back(
                    ks_comparison(pair + ":" + label, ks_two_sample(column(samples[a], idx), column(samples[b], idx)), level));
            }
            rep.comparisons.push_back(ks_comparison(pair + ":pooled", ks_two_sample(pooled(samples[a]), pooled(samples[b])), level));
        }
    }
    if (!rep.pass() && !opt.dump_dir.empty()) {
        for (std::size_t k = 0; k < 3; ++k) {
            std::ostringstream os;
            write_samples_csv(os, samples[k]);
            write_text_file(opt.dump_dir + "/equivalence_" + std::string(construction_name(kinds[k])) + ".csv", os.str());
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------------------
// Hard edge

SuiteReport hardedge_suite(double beta, const std::vector<double>& spikes, std::size_t n_samples, std::uint64_t seed,
                           const std::vector<double>& s_values, std::size_t threads) {
    SpikeConfig cfg;
    cfg.beta = beta;
    cfg.N = spikes.size();
    cfg.spikes = spikes;
    cfg.n = SpikeConfig::hard_edge_n(beta, cfg.N);
    cfg.validate();
    if (n_samples < 10) throw InputError("hardedge_suite: need at least 10 samples");
    double rate = 0.0;
    for (double b : spikes) rate += 1.0 / (2.0 * b);

    BatchOptions opt;
    opt.threads = threads;
    const auto samples = sample_batch(Construction::kMultiSpike, cfg, n_samples, seed, opt);
    std::vector<double> mins;
    mins.reserve(n_samples);
    for (const auto& s : samples) mins.push_back(s.back());
    std::sort(mins.begin(), mins.end());

    SuiteReport rep;
    rep.suite = "hardedge";
    rep.seed = seed;
    rep.parameters = config_json(cfg);
    rep.parameters["samples"] = n_samples;
    rep.parameters["law"] = "P(lambda_min > s) = exp(-s sum 1/(2 b_j))";
    const double total = static_cast<double>(n_samples);
    for (double s : s_values) {
        const double survive = static_cast<double>(mins.end() - std::upper_bound(mins.begin(), mins.end(), s));
        const double freq = survive / total;
        const double p0 = std::exp(-s * rate);
        const double se = std::sqrt(p0 * (1.0 - p0) / total);
        Comparison c;
        std::ostringstream name;
        name << "survival(s=" << s << ")";
        c.name = name.str();
        c.statistic = se > 0.0 ? std::abs(freq - p0) / se : 0.0;
        c.threshold = 3.0;
        c.pass = c.statistic <= 3.0;
        c.detail = {{"s", s}, {"empirical", freq}, {"exact", p0}, {"standard_error", se}};
        rep.comparisons.push_back(std::move(c));
    }
    rep.comparisons.push_back(ks_comparison(
        "ks:lambda_min", ks_one_sample(mins, [rate](double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-s * rate); }),
        1e-3));
    return rep;
}

// ---------------------------------------------------------------------------------------
// Soft edge

double spiked_soft_edge_scale(double lambda, std::size_t N) {
    const double n = static_cast<double>(N);
    return (lambda - 16.0 * n) / (4.0 * std::cbrt(4.0 * n));
}

double spike_for_w(double w, std::size_t N) {
    return 2.0 - std::cbrt(2.0) * w / std::cbrt(static_cast<double>(N));
}

namespace {

SpikeConfig quaternion_pair_config(std::size_t N, double b) {
    SpikeConfig cfg;
    cfg.beta = 4.0;
    cfg.N = N;
    cfg.n = SpikeConfig::hard_edge_n(4.0, N);
    cfg.spikes = {b};
    cfg.validate();
    return cfg;
}

// Scaled largest eigenvalues of the beta = 4 pair at spike b, sorted.
std::vector<double> spiked_top_scaled(std::size_t N, double b, std::size_t n_samples, std::uint64_t seed,
                                      std::string_view tag, std::size_t threads) {
    const SpikeConfig cfg = quaternion_pair_config(N, b);
    std::vector<double> out(n_samples);
    const std::uint64_t stream = hash_tag(tag);
    tagged("secular-top", [&] {
        parallel_for(n_samples, threads, [&](std::size_t i) {
            Rng rng(seed, stream, i);
            out[i] = spiked_soft_edge_scale(sample_secular_pair_top(cfg, 1, rng).x[0], N);
        });
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SuiteReport softedge_w0_suite(const PainleveTable& table, std::size_t n_samples, std::uint64_t seed,
                              std::size_t n_goe, std::size_t n_spiked, double alpha, std::size_t threads) {
    if (n_goe < 2 || n_spiked < 2) throw InputError("softedge_w0_suite: sizes must be at least 2");
    auto cdf = clamped_cdf([&table](double s) { return tw_goe_cdf(table, s); }, table.s_min, table.s_max);

    std::vector<double> goe(n_samples);
    const double ng = static_cast<double>(n_goe);
    const std::uint64_t stream = hash_tag("goe-tridiagonal");
    parallel_for(n_samples, threads, [&](std::size_t i) {
        Rng rng(seed, stream, i);
        const double top = tridiag_top_eigenvalues(sample_hermite_tridiagonal(1.0, n_goe, rng), 1)[0];
        goe[i] = std::sqrt(2.0) * std::pow(ng, 1.0 / 6.0) * (top - std::sqrt(2.0 * ng - 1.0));
    });
    std::sort(goe.begin(), goe.end());
    const auto spiked = spiked_top_scaled(n_spiked, 2.0, n_samples, seed, "softedge-w0", threads);

    SuiteReport rep;
    rep.suite = "softedge-w0";
    rep.seed = seed;
    rep.parameters = {{"samples", n_samples}, {"goe_N", n_goe}, {"spiked_N", n_spiked}, {"spiked_b", 2.0},
                      {"alpha", alpha}};
    rep.comparisons.push_back(ks_comparison("goe-top-vs-tw-goe", ks_one_sample(goe, cdf), alpha));
    rep.comparisons.push_back(ks_comparison("beta4-spiked-b2-vs-tw-goe", ks_one_sample(spiked, cdf), alpha));
    return rep;
}

SuiteReport softedge_w_suite(const PainleveTable& table, const std::vector<double>& w_values, std::size_t N,
                             std::size_t n_samples, std::uint64_t seed, double alpha, std::size_t threads) {
    SuiteReport rep;
    rep.suite = "softedge-w";
    rep.seed = seed;
    rep.parameters = {{"samples", n_samples}, {"N", N}, {"w", w_values}, {"alpha", alpha}};
    for (double w : w_values) {
        const double b = spike_for_w(w, N);
        if (!(b > 0.0)) throw InputError("softedge_w_suite: w too large for this N (spike would be <= 0)");
        std::ostringstream tag;
        tag << "softedge-w:" << w;
        const auto top = spiked_top_scaled(N, b, n_samples, seed, tag.str(), threads);
        auto cdf = clamped_cdf([&table, w](double s) { return spiked_edge_cdf(table, s, w); }, table.s_min,
                               table.s_max);
        std::ostringstream name;
        name << "w=" << w;
        Comparison c = ks_comparison(name.str(), ks_one_sample(top, cdf), alpha);
        c.detail["b"] = b;
        rep.comparisons.push_back(std::move(c));
    }
    return rep;
}

// ---------------------------------------------------------------------------------------
// Blind density

SuiteReport density_blind_suite(double w, std::size_t N, std::size_t n_draws, std::uint64_t seed, double x_lo,
                                double x_hi, double bin_width, std::size_t threads,
                                std::vector<HistogramBin>* histogram) {
    if (!(x_hi > x_lo) || !(bin_width > 0.0)) throw InputError("density_blind_suite: bad histogram window");
    if (x_lo < -8.0) throw InputError("density_blind_suite: window must start at or above -8");
    SuiteReport rep;
    rep.suite = "density-blind";
    rep.seed = seed;
    rep.parameters = {{"w", w}, {"N", N}, {"draws", n_draws}, {"window", {x_lo, x_hi}}, {"bin_width", bin_width}};

    {
        const BlindDensityCurve c0(0.0, -8.0);
        double worst = 0.0, at = 0.0;
        for (int i = 0; i <= 160; ++i) {
            const double X = -6.0 + 0.05 * i;
            const double err = std::abs(c0(X) - goe_soft_edge_density(X));
            if (err > worst) {
                worst = err;
                at = X;
            }
        }
        Comparison c;
        c.name = "w=0 curve vs GOE closed form on [-6,2]";
        c.statistic = worst;
        c.threshold = 1e-4;
        c.pass = worst <= 1e-4;
        c.detail = {{"worst_at", at}};
        rep.comparisons.push_back(std::move(c));
    }

    const BlindDensityCurve curve = spiked_blind_density(w, -8.0);
    std::optional<BlindDensityCurve> literal;
    if (w <= 0.0) literal.emplace(w, -8.0);
    std::size_t literal_failures = 0;
    double literal_worst = 0.0;
    const double b = spike_for_w(w, N);
    const SpikeConfig cfg = quaternion_pair_config(N, b);
    const std::size_t k = std::min<std::size_t>(24, N - 1);
    const std::size_t bins = static_cast<std::size_t>(std::llround((x_hi - x_lo) / bin_width));
    if (bins == 0 || std::abs(static_cast<double>(bins) * bin_width - (x_hi - x_lo)) > 1e-9) {
        throw InputError("density_blind_suite: window length must be a multiple of the bin width");
    }
    std::vector<std::vector<std::size_t>> per_draw(n_draws, std::vector<std::size_t>(bins, 0));
    const std::uint64_t stream = hash_tag("density-blind");
    tagged("secular-top", [&] {
        parallel_for(n_draws, threads, [&](std::size_t i) {
            Rng rng(seed, stream, i);
            const InterlacedPair p = sample_secular_pair_top(cfg, k, rng);
            for (const SpectrumSample* sp : {&p.x, &p.y}) {
                if (spiked_soft_edge_scale(sp->values.back(), N) >= x_lo) {
                    throw NumericalError("density_blind_suite: too few top eigenvalues drawn to cover the window");
                }
                for (double v : sp->values) {
                    const double X = spiked_soft_edge_scale(v, N);
                    if (X < x_lo || X >= x_hi) continue;
                    per_draw[i][std::min(bins - 1, static_cast<std::size_t>((X - x_lo) / bin_width))]++;
                }
            }
        });
    });
    std::vector<HistogramBin> hist(bins);
    const double draws = static_cast<double>(n_draws);
    for (std::size_t j = 0; j < bins; ++j) {
        HistogramBin& h = hist[j];
        h.lo = x_lo + static_cast<double>(j) * bin_width;
        h.hi = h.lo + bin_width;
        for (const auto& d : per_draw) h.count += d[j];
        h.density = static_cast<double>(h.count) / (draws * bin_width);
        h.sigma = std::sqrt(static_cast<double>(h.count)) / (draws * bin_width);
        // bin average of the curve, 5-point Gauss-Legendre
        static constexpr std::array<double, 5> nodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                                     0.5384693101056831, 0.9061798459386640};
        static constexpr std::array<double, 5> weights{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                       0.4786286704993665, 0.2369268850561891};
        const auto bin_average = [&](const BlindDensityCurve& f) {
            double avg = 0.0;
            for (std::size_t q = 0; q < 5; ++q) avg += weights[q] * f(0.5 * (h.lo + h.hi) + 0.5 * bin_width * nodes[q]);
            return 0.5 * avg;
        };
        h.expected = bin_average(curve);
        if (literal) {
            const double e = bin_average(*literal);
            const double dev = std::abs(h.density - e);
            literal_worst = std::max(literal_worst, dev);
            if (dev > 0.05 * e + 3.0 * h.sigma) ++literal_failures;
        }
        Comparison c;
        std::ostringstream name;
        name << "bin[" << h.lo << "," << h.hi << ")";
        c.name = name.str();
        const double tol = 0.05 * h.expected + 3.0 * h.sigma;
        c.statistic = std::abs(h.density - h.expected);
        c.threshold = tol;
        c.pass = c.statistic <= tol;
        c.detail = {{"count", h.count}, {"empirical", h.density}, {"analytic", h.expected}, {"sigma", h.sigma}};
        rep.comparisons.push_back(std::move(c));
    }
    if (literal) {
        Comparison c;
        c.name = "histogram vs kernel formula with parameter w itself (bins outside 5% + 3 sigma)";
        c.statistic = static_cast<double>(literal_failures);
        c.threshold = 0.0;
        c.pass = literal_failures == 0;
        c.detail = {{"worst_abs_deviation", literal_worst}};
        rep.diagnostics.push_back(std::move(c));
    }
    rep.parameters["spike_b"] = b;
    rep.parameters["kernel_parameter"] = -2.0 * w;
    rep.parameters["top_values_per_species"] = k;
    if (histogram) *histogram = std::move(hist);
    return rep;
}

// ---------------------------------------------------------------------------------------
// PDE residual

namespace {

struct Field {
    std::vector<double> x, w, values;
};

std::vector<double> uniform_grid(double lo, double hi, double h) {
    const std::size_t m = static_cast<std::size_t>(std::llround((hi - lo) / h));
    std::vector<double> g(m + 1);
    for (std::size_t i = 0; i <= m; ++i) g[i] = lo + static_cast<double>(i) * h;
    return g;
}

Field edge_field(const PainleveTable& table, double x_lo, double x_hi, double w_lo, double w_hi, double h,
                 double x_scale, double w_scale) {
    Field f;
    f.x = uniform_grid(x_lo, x_hi, h);
    f.w = uniform_grid(w_lo, w_hi, h);
    f.values.resize(f.x.size() * f.w.size());
    const std::size_t nw = f.w.size();
    parallel_for(f.x.size(), 0, [&](std::size_t i) {
        for (std::size_t j = 0; j < nw; ++j) f.values[i * nw + j] = spiked_edge_cdf(table, x_scale * f.x[i], w_scale * f.w[j]);
    });
    return f;
}

}  // namespace

SuiteReport pde_residual_suite(const PainleveTable& table, double h, double tol, double x_lo, double x_hi, double w_lo,
                               double w_hi) {
    if (!(h > 0.0) || h > 0.1) throw InputError("pde_residual_suite: step must be in (0, 0.1]");
    SuiteReport rep;
    rep.suite = "pde-residual";
    rep.parameters = {{"beta", 4.0}, {"x", {x_lo, x_hi}}, {"w", {w_lo, w_hi}}, {"step", h}, {"tolerance", tol}};

    std::array<double, 2> best{};
    std::array<std::array<double, 2>, 2> by_sign{};
    for (int level = 0; level < 2; ++level) {
        const double step = level == 0 ? h : 0.5 * h;
        const Field f = edge_field(table, x_lo, x_hi, w_lo, w_hi, step, 1.0, 1.0);
        const double plus = pde_residual(f.x, f.w, f.values, 4.0).max_abs;
        const double minus = pde_residual(f.x, f.w, reflect_w(f.values, f.x.size(), f.w.size()), 4.0).max_abs;
        by_sign[level] = {plus, minus};
        best[level] = std::min(plus, minus);
        if (level == 0) {
            Comparison d;
            d.name = "residual with d2/dw2 and d/dw coefficients 1/2, 1/2 (+w)";
            d.statistic = pde_residual_general(f.x, f.w, f.values, 0.5, 0.5).max_abs;
            d.threshold = tol;
            d.pass = d.statistic < tol;
            rep.diagnostics.push_back(std::move(d));
        }
    }
    Comparison c;
    c.name = "min over w sign conventions of max |residual|";
    c.statistic = best[0];
    c.threshold = tol;
    c.pass = best[0] < tol;
    c.detail = {{"plus_w", by_sign[0][0]}, {"minus_w", by_sign[0][1]}};
    rep.comparisons.push_back(std::move(c));
    Comparison r;
    r.name = "residual decreases under step halving";
    r.statistic = best[1];
    r.threshold = best[0];
    r.pass = best[1] < best[0];
    r.detail = {{"plus_w", by_sign[1][0]}, {"minus_w", by_sign[1][1]}, {"step", 0.5 * h}};
    rep.comparisons.push_back(std::move(r));

    for (int level = 0; level < 2; ++level) {
        const double step = level == 0 ? h : 0.5 * h;
        const Field g = edge_field(table, x_lo, x_hi, w_lo, w_hi, step, std::cbrt(4.0), std::cbrt(2.0));
        Comparison d;
        std::ostringstream name;
        name << "residual of F(2^{2/3} x; 2^{1/3} w), step " << step;
        d.name = name.str();
        d.statistic = pde_residual(g.x, g.w, g.values, 4.0).max_abs;
        d.threshold = tol;
        d.pass = d.statistic < tol;
        rep.diagnostics.push_back(std::move(d));
    }
    return rep;
}

// ---------------------------------------------------------------------------------------
// Stochastic Airy operator

SuiteReport stochastic_airy_suite(const PainleveTable& table, double beta, double w, double w_edge,
                                  std::size_t n_samples, std::uint64_t seed, double alpha, std::size_t threads) {
    constexpr double kAiryZero = 2.338107410459767;
    SuiteReport rep;
    rep.suite = "stochastic-airy";
    rep.seed = seed;
    rep.parameters = {{"beta", beta}, {"w", w}, {"w_edge", w_edge}, {"samples", n_samples}, {"alpha", alpha}};

    RobinSAOConfig det;
    det.beta = std::numeric_limits<double>::infinity();
    det.L = 20.0;
    Rng unused(seed);
    det.h = 0.02;
    const double coarse = sample_stochastic_airy(det, unused)[0];
    det.h = 0.01;
    const double fine = sample_stochastic_airy(det, unused)[0];
    Comparison g;
    g.name = "Dirichlet ground state vs first Airy zero";
    g.statistic = std::abs(fine - kAiryZero);
    g.threshold = 5e-3;
    g.pass = g.statistic <= 5e-3 && std::abs(fine - kAiryZero) < std::abs(coarse - kAiryZero);
    g.detail = {{"h=0.02", coarse}, {"h=0.01", fine}, {"airy_zero", kAiryZero}};
    rep.comparisons.push_back(std::move(g));

    const RobinSAOConfig cfg = RobinSAOConfig::with_defaults(beta, w);
    rep.parameters["L"] = cfg.L;
    rep.parameters["h"] = cfg.h;
    const auto draws = sample_sao_batch(cfg, n_samples, seed, threads);
    std::vector<double> top;
    top.reserve(n_samples);
    for (const auto& d : draws) top.push_back(-d[0]);
    std::sort(top.begin(), top.end());
    auto cdf = clamped_cdf([&table, w_edge](double s) { return spiked_edge_cdf(table, s, w_edge); }, table.s_min,
                           table.s_max);
    rep.comparisons.push_back(ks_comparison("-lambda_min vs F(x; w)", ks_one_sample(top, cdf), alpha));

    const double xs = std::cbrt(4.0), ws = std::cbrt(2.0);
    auto rescaled = [&table, w_edge, xs, ws](double s) {
        const double x = xs * s;
        if (x < table.s_min) return 0.0;
        if (x > table.s_max) return 1.0;
        return spiked_edge_cdf(table, x, ws * w_edge);
    };
    rep.diagnostics.push_back(ks_comparison("-lambda_min vs F(2^{2/3} x; 2^{1/3} w)", ks_one_sample(top, rescaled), alpha));
    return rep;
}

// ---------------------------------------------------------------------------------------
// Files

void write_samples_csv(std::ostream& out, const std::vector<std::vector<double>>& samples,
                       std::string_view column_prefix) {
    const std::size_t width = samples.empty() ? 0 : samples.front().size();
    for (std::size_t j = 0; j < width; ++j) out << (j ? "," : "") << column_prefix << '_' << (j + 1);
    out << '\n' << std::setprecision(17);
    for (const auto& row : samples) {
        if (row.size() != width) throw InputError("write_samples_csv: ragged rows");
        for (std::size_t j = 0; j < width; ++j) out << (j ? "," : "") << row[j];
        out << '\n';
    }
}

void write_curve_csv(std::ostream& out, std::string_view x_name, std::string_view y_name, std::span<const double> x,
                     std::span<const double> y) {
    if (x.size() != y.size()) throw InputError("write_curve_csv: size mismatch");
    out << x_name << ',' << y_name << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < x.size(); ++i) out << x[i] << ',' << y[i] << '\n';
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw InputError("write to '" + path + "' failed");
}

}  // namespace spiked
