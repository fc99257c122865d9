#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SPIKED_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch() {
    const fs::path d = fs::path(SPIKED_SCRATCH) / "cli";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("sample: stdout CSV is identical across thread counts") {
    const std::string base = "sample --construction secular --beta 2 --n 6 --N 4 --b 1 --samples 50 --seed 7 --output -";
    const Run a = run(base + " --threads 1");
    const Run b = run(base + " --threads 3");
    CHECK(a.status == 0);
    CHECK(b.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("lambda_1,lambda_2,lambda_3,lambda_4\n", 0) == 0);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 51);
    CHECK(run(base.substr(0, base.find("--seed")) + "--seed 8 --output -").out != a.out);
}

TEST_CASE("sample: file output with sidecar") {
    const fs::path csv = scratch() / "pencil.csv";
    const Run r = run("sample --construction pencil --beta 1 --n 7 --N 3 --b 2 --samples 20 --seed 3 --output " +
                      csv.string());
    REQUIRE(r.status == 0);
    CHECK(fs::exists(csv));
    const auto meta = nlohmann::json::parse(slurp(csv.string() + ".json"));
    CHECK(meta["seed"] == 3);
    CHECK(meta.dump().find("pencil") != std::string::npos);
}

TEST_CASE("sample: json format") {
    const Run r = run("sample --construction bidiagonal --beta 4 --n 5 --N 2 --b 1 --samples 5 --seed 1 --format json --output -");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK_FALSE(j.empty());
}

TEST_CASE("input errors exit with status 2") {
    CHECK(run("sample --construction secular --beta 0 --n 6 --N 4 --b 1 --samples 5 --seed 1 --output -").status == 2);
    CHECK(run("sample --construction secular --beta 2 --n 6 --N 4 --b 1 --samples 5 --output -").status == 2);
    CHECK(run("sample --construction lanczos --seed 1 --output -").status == 2);
    CHECK(run("verify --suite nonsense --seed 1").status == 2);
    CHECK(run("curves --curve density-blind --w 1").status == 2);
    CHECK(run("--no-such-flag").status == 2);
}

TEST_CASE("verify: equivalence report") {
    const Run r = run("verify --suite equivalence --beta 2 --n 6 --N 4 --b 1 --samples 2000 --seed 5 --threads 1");
    CHECK(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["suite"] == "equivalence");
    CHECK(j["pass"] == true);
    CHECK(j["seed"] == 5);
}

TEST_CASE("curves: tw-goe and spiked-edge at w = 0 coincide") {
    const Run a = run("curves --curve tw-goe --s-min -4 --s-max 2 --step 0.5");
    const Run b = run("curves --curve spiked-edge --w 0 --s-min -4 --s-max 2 --step 0.5");
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    std::istringstream sa(a.out), sb(b.out);
    std::string la, lb;
    std::getline(sa, la);
    std::getline(sb, lb);
    int rows = 0;
    while (std::getline(sa, la) && std::getline(sb, lb)) {
        const double fa = std::stod(la.substr(la.find(',') + 1));
        const double fb = std::stod(lb.substr(lb.find(',') + 1));
        CHECK(std::abs(fa - fb) < 1e-10);
        ++rows;
    }
    CHECK(rows == 13);
}

TEST_CASE("curves: hyp1f1 at N = 1 is exp(c x)") {
    const Run r = run("curves --curve hyp1f1 --beta 2 --x 0.5 --s-min 1 --s-max 1 --step 1");
    REQUIRE(r.status == 0);
    const std::string last = r.out.substr(r.out.rfind(',', r.out.size() - 2) + 1);
    CHECK(std::stod(last) == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
}
