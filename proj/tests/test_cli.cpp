#include "wireorbit/cli.hpp"
#include "wireorbit/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <sstream>

namespace fs = std::filesystem;
using wireorbit::cli::run;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("equilibrium subcommand prints the canonical values") {
    TempDir dir("wo_cli_eq");
    std::string out;
    const int code = run_cli({"equilibrium", "--out", dir.str()}, &out);
    CHECK(code == 0);
    CHECK(out.find("r_bar  = 1\n") != std::string::npos);
    CHECK(out.find("1.7320508075688772") != std::string::npos);
    CHECK(out.find("6.2831853071795862") != std::string::npos);
    CHECK(out.find("4.4428829381583661") != std::string::npos);
    CHECK(fs::exists(dir.path / "manifest.json"));
}

TEST_CASE("unknown subcommand and flags exit with the usage code") {
    std::string err;
    CHECK(run_cli({"frobnicate"}, nullptr, &err) == wireorbit::cli::exit_usage);
    CHECK(!err.empty());
    CHECK(run_cli({"equilibrium", "--bogus-flag", "1"}, nullptr, &err) ==
          wireorbit::cli::exit_usage);
}

TEST_CASE("malformed config exits with the config code") {
    TempDir dir("wo_cli_badcfg");
    const auto cfg = dir.path / "bad.json";
    std::ofstream(cfg) << "{ not json";
    CHECK(run_cli({"equilibrium", "--config", cfg.string(), "--out", dir.str()}) ==
          wireorbit::cli::exit_bad_config);

    std::ofstream(cfg.string(), std::ios::trunc) << R"({"tolerances":{"integrate":1.0}})";
    CHECK(run_cli({"equilibrium", "--config", cfg.string(), "--out", dir.str()}) ==
          wireorbit::cli::exit_bad_config);
}

TEST_CASE("missing files exit with the missing-file code") {
    TempDir dir("wo_cli_missing");
    CHECK(run_cli({"equilibrium", "--config", (dir.path / "nope.json").string()}) ==
          wireorbit::cli::exit_missing_file);

    const auto cfg = dir.path / "cfg.json";
    std::ofstream(cfg) << R"({"field":{"kind":"tabulated","waveform":"no_such.csv"}})";
    CHECK(run_cli({"simulate", "--config", cfg.string(), "--out", dir.str()}) ==
          wireorbit::cli::exit_missing_file);
}

TEST_CASE("verify subcommand succeeds and writes reports") {
    TempDir dir("wo_cli_verify");
    std::string out;
    CHECK(run_cli({"verify", "--out", dir.str()}, &out) == 0);
    CHECK(fs::exists(dir.path / "sign_reports.json"));
    CHECK(out.find("FAIL") == std::string::npos);
}

TEST_CASE("period-map output is deterministic") {
    TempDir a("wo_cli_det_a"), b("wo_cli_det_b");
    const std::vector<std::string> args{"period-map", "--points", "8", "--hmax", "3.0"};
    auto with_out = [&](const std::string& o) {
        auto v = args;
        v.push_back("--out");
        v.push_back(o);
        return v;
    };
    CHECK(run_cli(with_out(a.str())) == 0);
    CHECK(run_cli(with_out(b.str())) == 0);
    CHECK(slurp(a.path / "period_map.csv") == slurp(b.path / "period_map.csv"));
    CHECK(slurp(a.path / "period_map.csv").substr(0, 12) == "H,T,r_a,r_b\n");
}

TEST_CASE("re-running from the emitted manifest reproduces the outputs") {
    TempDir a("wo_cli_mani_a"), b("wo_cli_mani_b");
    const auto cfg = a.path / "cfg.json";
    std::ofstream(cfg) << R"({"params":{"T1":7.0,"pz":0.5},"period_map":{"points":6,"hmax":3.0}})";
    CHECK(run_cli({"period-map", "--config", cfg.string(), "--out", a.str()}) == 0);
    CHECK(run_cli({"period-map", "--config", (a.path / "manifest.json").string(), "--out",
                   b.str()}) == 0);
    CHECK(slurp(a.path / "period_map.csv") == slurp(b.path / "period_map.csv"));
}

TEST_CASE("melnikov subcommand writes the JSON record") {
    TempDir dir("wo_cli_mel");
    const auto cfg = dir.path / "cfg.json";
    std::ofstream(cfg) << R"({"params":{"T1":7.0}})";
    std::string out;
    CHECK(run_cli({"melnikov", "--n", "2", "--config", cfg.string(), "--out", dir.str()},
                  &out) == 0);
    const auto doc = nlohmann::json::parse(slurp(dir.path / "melnikov_n2.json"));
    CHECK(doc.at("n") == 2);
    CHECK(doc.at("zeros").size() == 4);
    CHECK(doc.at("simple") == true);
}

TEST_CASE("simulate writes a trajectory and the full reconstruction on request") {
    TempDir dir("wo_cli_sim");
    const auto cfg = dir.path / "cfg.json";
    std::ofstream(cfg) << R"({"simulate":{"r0":1.5,"t_end":5.0,"samples":50,"full3d":true}})";
    CHECK(run_cli({"simulate", "--config", cfg.string(), "--out", dir.str()}) == 0);
    const auto text = slurp(dir.path / "trajectory_full.csv");
    CHECK(text.substr(0, 8) == "t,r,thet");
    // 1 header + 51 samples
    CHECK(std::count(text.begin(), text.end(), '\n') == 52);
}

TEST_CASE("potential subcommand writes the sample grid") {
    TempDir dir("wo_cli_pot");
    const auto cfg = dir.path / "cfg.json";
    std::ofstream(cfg) << R"({"potential":{"r_min":0.8,"r_max":2.0,"nr":3,"nt":2}})";
    CHECK(run_cli({"potential", "--config", cfg.string(), "--out", dir.str()}) == 0);
    const auto text = slurp(dir.path / "potential.csv");
    CHECK(text.substr(0, 21) == "t,r,value,dvalue_dr\n0");
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);  // header + 6 samples
}

TEST_CASE("harmonic profile can come from a CSV table") {
    TempDir dir("wo_cli_proftab");
    const auto table = dir.path / "profile.csv";
    {
        std::ofstream out(table);
        out.precision(17);
        out << "r,D\n";
        for (double r = 0.2; r <= 8.0; r += 0.05) out << r << "," << 1.0 / (1.0 + r) << "\n";
    }
    const auto cfg = dir.path / "cfg.json";
    std::ofstream(cfg) << R"({"params":{"T1":7.0},"field":{"profile":")"
                       << table.generic_string() << R"("}})";
    std::string out;
    CHECK(run_cli({"melnikov", "--n", "1", "--config", cfg.string(), "--out", dir.str()},
                  &out) == 0);
    const auto doc = nlohmann::json::parse(slurp(dir.path / "melnikov_n1.json"));
    CHECK(doc.at("simple") == true);
}

TEST_CASE("a biased tabulated waveform triggers the zero-mean warning") {
    TempDir dir("wo_cli_bias");
    const auto wf = dir.path / "wave.csv";
    {
        std::ofstream out(wf);
        out.precision(17);
        out << "t,I1\n";
        const int n = 32;
        for (int i = 0; i < n; ++i) {
            const double t = 7.0 * i / n;
            out << t << "," << (std::sin(2 * M_PI * t / 7.0) + 0.05) << "\n";
        }
    }
    const auto cfg = dir.path / "cfg.json";
    std::ofstream(cfg) << R"({"params":{"T1":7.0},)"
                       << R"("field":{"kind":"tabulated","waveform":")"
                       << wf.generic_string() << R"("},)"
                       << R"("simulate":{"r0":1.4,"t_end":0.5,"samples":5}})";
    std::string err;
    CHECK(run_cli({"simulate", "--config", cfg.string(), "--out", dir.str()}, nullptr,
                  &err) == 0);
    CHECK(err.find("warning") != std::string::npos);
    CHECK(err.find("zero mean was enforced") != std::string::npos);
}

TEST_CASE("melnikov below the minimal period maps to the numerical exit code") {
    TempDir dir("wo_cli_below");
    // T1 = 5 < 2 pi: no order-1 resonance; surfaced as invalid input
    const auto cfg = dir.path / "cfg.json";
    std::ofstream(cfg) << R"({"params":{"T1":5.0}})";
    std::string err;
    const int code =
        run_cli({"melnikov", "--n", "1", "--config", cfg.string(), "--out", dir.str()},
                nullptr, &err);
    CHECK(code == wireorbit::cli::exit_bad_config);
    CHECK(err.find("T0") != std::string::npos);
}
