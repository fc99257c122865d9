#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spiked/analytic_pdf.hpp"
#include "spiked/errors.hpp"
#include "spiked/harness.hpp"
#include "spiked/painleve.hpp"
#include "spiked/softedge_density.hpp"

namespace {

using nlohmann::json;
using namespace spiked;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// Relative paths resolve against SPIKED_OUTPUT_DIR when it is set.
std::string output_path(const std::string& path) {
    const char* dir = std::getenv("SPIKED_OUTPUT_DIR");
    if (!dir || !*dir || path.empty() || std::filesystem::path(path).is_absolute()) return path;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / path).string();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(output_path(path), text);
    }
}

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

std::vector<double> spike_list(const std::optional<double>& b, const std::vector<double>& spikes) {
    if (b && !spikes.empty()) throw InputError("give either --b or --spikes, not both");
    if (b) return {*b};
    if (!spikes.empty()) return spikes;
    return {1.0};
}

PainleveTable load_table(const std::string& path) {
    if (path.empty()) return solve_hastings_mcleod();
    std::ifstream in(path);
    if (!in) throw InputError("cannot open Painleve table " + path);
    return read_painleve_csv(in);
}

struct SampleArgs {
    std::string construction = "bidiagonal";
    double beta = 1.0;
    double n = 1.0;
    std::size_t N = 1;
    std::optional<double> b;
    std::vector<double> spikes;
    std::size_t samples = 1000;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
    std::string output = "samples.csv";
    std::string format = "csv";
    std::string zero_scale = "chi-square";
    std::string pencil_factor = "linear";
    double w = std::numeric_limits<double>::infinity();
    double L = 0.0;
    double h = 0.02;
    std::size_t k = 1;
};

int run_sample(const SampleArgs& a, const std::string& argv_line) {
    if (!a.seed) throw InputError("--seed is required");
    if (a.samples == 0) throw InputError("--samples must be positive");
    const Construction c = parse_construction(a.construction);
    json side;
    side["command"] = "sample";
    side["argv"] = argv_line;
    side["construction"] = a.construction;
    side["seed"] = *a.seed;
    side["samples"] = a.samples;
    std::vector<std::vector<double>> rows;
    if (c == Construction::kSao) {
        if (!(a.beta > 0.0)) throw InputError("--beta must be positive");
        RobinSAOConfig cfg = RobinSAOConfig::with_defaults(a.beta, a.w);
        if (a.L > 0.0) cfg.L = a.L;
        cfg.h = a.h;
        cfg.k = a.k;
        rows = sample_sao_batch(cfg, a.samples, *a.seed, a.threads);
        side["config"] = {{"beta", cfg.beta},
                          {"w", cfg.dirichlet() ? json("dirichlet") : json(cfg.w)},
                          {"L", cfg.L},
                          {"h", cfg.h},
                          {"k", cfg.k}};
    } else {
        SpikeConfig cfg{a.beta, a.n, a.N, spike_list(a.b, a.spikes)};
        cfg.validate();
        BatchOptions opt;
        opt.threads = a.threads;
        if (a.zero_scale == "printed") {
            opt.zero_scale = ZeroMassScale::kPrinted;
        } else if (a.zero_scale != "chi-square") {
            throw InputError("--zero-scale must be chi-square or printed");
        }
        if (a.pencil_factor == "sqrt") {
            opt.pencil_factor = PencilSpikeFactor::kSqrt;
        } else if (a.pencil_factor != "linear") {
            throw InputError("--pencil-factor must be linear or sqrt");
        }
        rows = sample_batch(c, cfg, a.samples, *a.seed, opt);
        side["config"] = {{"beta", cfg.beta}, {"n", cfg.n}, {"N", cfg.N}, {"spikes", cfg.spikes}};
        side["zero_scale"] = a.zero_scale;
        side["pencil_factor"] = a.pencil_factor;
    }
    std::ostringstream body;
    if (a.format == "csv") {
        write_samples_csv(body, rows);
    } else if (a.format == "json") {
        body << json(rows).dump() << '\n';
    } else {
        throw InputError("--format must be csv or json");
    }
    side["format"] = a.format;
    side["output"] = a.output;
    emit(a.output, body.str());
    if (!a.output.empty() && a.output != "-") emit(a.output + ".json", side.dump(2) + "\n");
    return kExitPass;
}

struct VerifyArgs {
    std::string suite;
    std::optional<std::uint64_t> seed;
    std::optional<double> beta;
    double n = 6.5;
    std::size_t N = 0;
    std::optional<double> b;
    std::vector<double> spikes;
    std::size_t samples = 0;
    std::size_t threads = 0;
    std::vector<double> w;
    double step = 0.02;
    std::string table;
    std::string output;
    std::string histogram;
    std::string dump_dir;
};

int run_verify(const VerifyArgs& a) {
    static const std::vector<std::string> suites{"equivalence",   "hardedge",     "softedge-w0",
                                                 "softedge-w",    "density-blind", "pde-residual"};
    if (std::find(suites.begin(), suites.end(), a.suite) == suites.end()) {
        throw InputError("unknown suite '" + a.suite + "'");
    }
    if (a.suite != "pde-residual" && !a.seed) throw InputError("--seed is required");
    const std::uint64_t seed = a.seed.value_or(0);
    std::vector<SuiteReport> reports;
    if (a.suite == "equivalence") {
        SpikeConfig cfg{a.beta.value_or(4.0), a.n, a.N ? a.N : 5, a.b || !a.spikes.empty() ? spike_list(a.b, a.spikes)
                                                                                           : std::vector<double>{2.0}};
        EquivalenceOptions opt;
        opt.batch.threads = a.threads;
        opt.dump_dir = a.dump_dir.empty() ? std::string() : output_path(a.dump_dir);
        reports.push_back(equivalence_suite(cfg, a.samples ? a.samples : 10000, seed, opt));
    } else if (a.suite == "hardedge") {
        const std::vector<double> spikes =
            a.b || !a.spikes.empty() ? spike_list(a.b, a.spikes) : std::vector<double>{1.0, 2.0, 3.0, 4.0};
        const std::vector<double> betas = a.beta ? std::vector<double>{*a.beta} : std::vector<double>{1.0, 2.0};
        for (double beta : betas) {
            reports.push_back(hardedge_suite(beta, spikes, a.samples ? a.samples : 100000, seed, {0.1, 0.3, 1.0},
                                             a.threads));
        }
    } else if (a.suite == "softedge-w0") {
        const PainleveTable t = load_table(a.table);
        reports.push_back(softedge_w0_suite(t, a.samples ? a.samples : 10000, seed, 400, a.N ? a.N : 200, 1e-3,
                                            a.threads));
    } else if (a.suite == "softedge-w") {
        const PainleveTable t = load_table(a.table);
        const std::vector<double> w = a.w.empty() ? std::vector<double>{-1.0, 1.0} : a.w;
        reports.push_back(softedge_w_suite(t, w, a.N ? a.N : 200, a.samples ? a.samples : 10000, seed, 1e-3, a.threads));
    } else if (a.suite == "density-blind") {
        if (a.w.size() > 1) throw InputError("density-blind takes a single --w");
        std::vector<HistogramBin> hist;
        reports.push_back(density_blind_suite(a.w.empty() ? -2.0 : a.w.front(), a.N ? a.N : 200,
                                              a.samples ? a.samples : 10000, seed, -4.0, 0.0, 0.25, a.threads, &hist));
        if (!a.histogram.empty()) {
            std::ostringstream csv;
            csv << "lo,hi,count,density,sigma,expected\n" << std::setprecision(17);
            for (const HistogramBin& h : hist) {
                csv << h.lo << ',' << h.hi << ',' << h.count << ',' << h.density << ',' << h.sigma << ',' << h.expected
                    << '\n';
            }
            emit(a.histogram, csv.str());
        }
    } else {
        reports.push_back(pde_residual_suite(load_table(a.table), a.step));
    }
    json out;
    bool pass = true;
    if (reports.size() == 1) {
        out = reports.front().to_json();
        pass = reports.front().pass();
    } else {
        out["suite"] = a.suite;
        out["seed"] = seed;
        out["reports"] = json::array();
        for (const SuiteReport& r : reports) {
            out["reports"].push_back(r.to_json());
            pass = pass && r.pass();
        }
        out["pass"] = pass;
    }
    emit(a.output, out.dump(2) + "\n");
    std::cerr << a.suite << ": " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kExitPass : kExitFail;
}

struct CurveArgs {
    std::string curve;
    std::optional<double> s_min, s_max, step;
    double w = 0.0;
    std::string convention = "kernel";
    double beta = 2.0;
    std::vector<double> x;
    std::string table;
    std::string output;
};

std::vector<double> abscissae(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw InputError("need --step > 0 and --s-max >= --s-min");
    const std::size_t m = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    if (m > 10000000) throw InputError("too many abscissae");
    std::vector<double> g(m + 1);
    for (std::size_t i = 0; i <= m; ++i) g[i] = std::min(hi, lo + static_cast<double>(i) * step);
    return g;
}

int run_curves(const CurveArgs& a) {
    std::ostringstream csv;
    if (a.curve == "painleve-table") {
        const PainleveTable t = a.table.empty() ? solve_hastings_mcleod(a.s_min.value_or(-12.0), a.s_max.value_or(12.0),
                                                                        a.step.value_or(0.005))
                                                : load_table(a.table);
        write_painleve_csv(t, csv);
        emit(a.output, csv.str());
        return kExitPass;
    }
    const std::vector<double> xs = abscissae(a.s_min.value_or(-6.0), a.s_max.value_or(4.0), a.step.value_or(0.05));
    std::vector<double> ys(xs.size());
    std::string xname = "s", yname = "value";
    if (a.curve == "tw-goe") {
        const PainleveTable t = load_table(a.table);
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = tw_goe_cdf(t, xs[i]);
        yname = "F";
    } else if (a.curve == "spiked-edge") {
        const PainleveTable t = load_table(a.table);
        const EdgeDistribution d = edge_distribution(t, a.w, xs.front(), xs.back(), a.step.value_or(0.05));
        ys = d.values;
        xname = "x";
        yname = "F";
    } else if (a.curve == "density-blind") {
        std::optional<BlindDensityCurve> c;
        if (a.convention == "kernel") {
            c.emplace(a.w, std::min(-8.0, xs.front()));
        } else if (a.convention == "spiking") {
            c.emplace(spiked_blind_density(a.w, std::min(-8.0, xs.front())));
        } else {
            throw InputError("--convention must be kernel or spiking");
        }
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = (*c)(xs[i]);
        xname = "X";
        yname = "rho";
    } else if (a.curve == "hyp1f1") {
        if (a.x.empty()) throw InputError("hyp1f1 needs --x");
        SpectrumSample x;
        x.values = a.x;
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = hyp1f1_spiked(a.beta, a.x.size(), xs[i], x);
        xname = "c";
    } else {
        throw InputError("unknown curve '" + a.curve + "'");
    }
    write_curve_csv(csv, xname, yname, xs, ys);
    emit(a.output, csv.str());
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiked beta-ensemble samplers, edge laws and verification suites"};
    app.require_subcommand(1);

    SampleArgs sa;
    CLI::App* sample = app.add_subcommand("sample", "Draw eigenvalue samples to CSV with a JSON sidecar");
    sample->add_option("--construction", sa.construction, "bidiagonal, secular, pencil, multispike or sao");
    sample->add_option("--beta", sa.beta, "Dyson index");
    sample->add_option("--n", sa.n, "Degrees of freedom (real)");
    sample->add_option("--N", sa.N, "Matrix size");
    sample->add_option("--b", sa.b, "Single spike");
    sample->add_option("--spikes", sa.spikes, "Spike list (multispike)");
    sample->add_option("--samples", sa.samples, "Number of draws");
    sample->add_option("--seed", sa.seed, "Seed (required)");
    sample->add_option("--threads", sa.threads, "Worker threads, 0 = all cores");
    sample->add_option("--output", sa.output, "CSV path, '-' for stdout");
    sample->add_option("--format", sa.format, "csv or json");
    sample->add_option("--zero-scale", sa.zero_scale, "chi-square or printed");
    sample->add_option("--pencil-factor", sa.pencil_factor, "linear or sqrt");
    sample->add_option("--w", sa.w, "Robin parameter (sao; default Dirichlet)");
    sample->add_option("--L", sa.L, "Domain length (sao)");
    sample->add_option("--step", sa.h, "Grid step (sao)");
    sample->add_option("--k", sa.k, "Eigenvalues per draw (sao)");

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "Run a verification suite and write its JSON report");
    verify->add_option("--suite", va.suite, "equivalence, hardedge, softedge-w0, softedge-w, density-blind, pde-residual")
        ->required();
    verify->add_option("--seed", va.seed, "Seed (required except for pde-residual)");
    verify->add_option("--beta", va.beta, "Dyson index");
    verify->add_option("--n", va.n, "Degrees of freedom");
    verify->add_option("--N", va.N, "Matrix size");
    verify->add_option("--b", va.b, "Single spike");
    verify->add_option("--spikes", va.spikes, "Spike list");
    verify->add_option("--samples", va.samples, "Draws (suite default when omitted)");
    verify->add_option("--threads", va.threads, "Worker threads, 0 = all cores");
    verify->add_option("--w", va.w, "Spike parameter(s) w");
    verify->add_option("--step", va.step, "Grid step (pde-residual)");
    verify->add_option("--table", va.table, "Painleve table CSV to reuse");
    verify->add_option("--output", va.output, "Report path (stdout when omitted)");
    verify->add_option("--histogram", va.histogram, "Histogram CSV (density-blind)");
    verify->add_option("--dump-dir", va.dump_dir, "Sample dumps on failure (equivalence)");

    CurveArgs ca;
    CLI::App* curves = app.add_subcommand("curves", "Tabulate an analytic curve as CSV");
    curves->add_option("--curve", ca.curve, "tw-goe, spiked-edge, density-blind, painleve-table or hyp1f1")->required();
    curves->add_option("--s-min", ca.s_min, "First abscissa");
    curves->add_option("--s-max", ca.s_max, "Last abscissa");
    curves->add_option("--step", ca.step, "Abscissa step");
    curves->add_option("--w", ca.w, "Spike parameter");
    curves->add_option("--convention", ca.convention, "density-blind parameter: kernel (w <= 0) or spiking");
    curves->add_option("--beta", ca.beta, "Dyson index (hyp1f1)");
    curves->add_option("--x", ca.x, "Arguments x_1..x_N (hyp1f1)");
    curves->add_option("--table", ca.table, "Painleve table CSV to reuse");
    curves->add_option("--output", ca.output, "CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*sample) return run_sample(sa, command_line(argc, argv));
        if (*verify) return run_verify(va);
        return run_curves(ca);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
