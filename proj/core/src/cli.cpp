#include "wireorbit/cli.hpp"
#include "wireorbit/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace wireorbit::cli {
namespace {

using nlohmann::json;

struct ToleranceSet {
    double integrate = 1e-11;
    double quadrature = 1e-10;
    double newton = 1e-10;
};

struct RunConfig {
    PhysParams params{1.0, 0.0, two_pi, two_pi, 1.0, 1.0};
    std::string field_kind = "harmonic";
    std::string profile = "bessel";        // unit | bessel | path to CSV table
    bool cosine = false;
    std::string waveform_csv;              // tabulated kind
    ToleranceSet tol;
    std::filesystem::path out_dir = "out";

    double hmax = std::nan("");            // period-map; default H0 + 5
    int points = 40;
    double first_offset = 1e-4;

    int melnikov_n = 1;
    int melnikov_samples = 4096;

    int nmax = 4;
    double orbit_k = 1e-3;

    double pot_r_min = 0.5, pot_r_max = 10.0;
    int pot_nr = 20, pot_nt = 8;

    double sim_r0 = std::nan("");          // default 1.5 * r_bar
    double sim_pr0 = 0.0;
    double sim_t_end = std::nan("");       // default 10 * T0_lin
    int sim_samples = 2000;
    bool sim_full3d = false;

    double verify_tol = 1e-9;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(std::string("config: ") + key + " must be a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError(std::string("config: ") + key + " must be an integer");
    return j.at(key).get<int>();
}

void apply_config_json(RunConfig& cfg, const json& root) {
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    // a manifest wraps the resolved config under "config"
    const json& doc = root.contains("config") ? root.at("config") : root;

    if (doc.contains("params")) {
        const json& p = doc.at("params");
        cfg.params = PhysParams(get_num(p, "I0", 1.0), get_num(p, "k", 0.0),
                                get_num(p, "T1", two_pi), get_num(p, "mu0", two_pi),
                                get_num(p, "L", 1.0), get_num(p, "pz", 1.0));
    }
    if (doc.contains("field")) {
        const json& f = doc.at("field");
        cfg.field_kind = f.value("kind", cfg.field_kind);
        cfg.profile = f.value("profile", cfg.profile);
        cfg.cosine = f.value("cosine", cfg.cosine);
        cfg.waveform_csv = f.value("waveform", cfg.waveform_csv);
    }
    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        cfg.tol.integrate = get_num(t, "integrate", cfg.tol.integrate);
        cfg.tol.quadrature = get_num(t, "quadrature", cfg.tol.quadrature);
        cfg.tol.newton = get_num(t, "newton", cfg.tol.newton);
    }
    if (doc.contains("output")) cfg.out_dir = doc.at("output").value("dir", cfg.out_dir.string());
    if (doc.contains("period_map")) {
        const json& m = doc.at("period_map");
        cfg.hmax = get_num(m, "hmax", cfg.hmax);
        cfg.points = get_int(m, "points", cfg.points);
        cfg.first_offset = get_num(m, "first_offset", cfg.first_offset);
    }
    if (doc.contains("melnikov")) {
        const json& m = doc.at("melnikov");
        cfg.melnikov_n = get_int(m, "n", cfg.melnikov_n);
        cfg.melnikov_samples = get_int(m, "samples", cfg.melnikov_samples);
    }
    if (doc.contains("find_orbits")) {
        const json& m = doc.at("find_orbits");
        cfg.nmax = get_int(m, "nmax", cfg.nmax);
        cfg.orbit_k = get_num(m, "k", cfg.orbit_k);
    }
    if (doc.contains("potential")) {
        const json& m = doc.at("potential");
        cfg.pot_r_min = get_num(m, "r_min", cfg.pot_r_min);
        cfg.pot_r_max = get_num(m, "r_max", cfg.pot_r_max);
        cfg.pot_nr = get_int(m, "nr", cfg.pot_nr);
        cfg.pot_nt = get_int(m, "nt", cfg.pot_nt);
    }
    if (doc.contains("simulate")) {
        const json& m = doc.at("simulate");
        cfg.sim_r0 = get_num(m, "r0", cfg.sim_r0);
        cfg.sim_pr0 = get_num(m, "pr0", cfg.sim_pr0);
        cfg.sim_t_end = get_num(m, "t_end", cfg.sim_t_end);
        cfg.sim_samples = get_int(m, "samples", cfg.sim_samples);
        cfg.sim_full3d = m.value("full3d", cfg.sim_full3d);
    }
    if (doc.contains("verify")) cfg.verify_tol = get_num(doc.at("verify"), "tol", cfg.verify_tol);
}

void validate_config(const RunConfig& cfg) {
    for (double t : {cfg.tol.integrate, cfg.tol.quadrature, cfg.tol.newton})
        if (!(t >= 1e-13 && t <= 1e-3))
            throw ConfigError("config: tolerances must lie in [1e-13, 1e-3]");
    if (cfg.field_kind != "constant" && cfg.field_kind != "harmonic" &&
        cfg.field_kind != "tabulated")
        throw ConfigError("config: field.kind must be constant|harmonic|tabulated");
    if (cfg.field_kind == "tabulated" && cfg.waveform_csv.empty())
        throw ConfigError("config: tabulated field requires field.waveform");
    if (cfg.points < 2) throw ConfigError("config: period_map.points must be >= 2");
}

FieldModel make_field(const RunConfig& cfg, std::ostream& err) {
    if (cfg.field_kind == "constant") return FieldModel::constant_current();
    if (cfg.field_kind == "tabulated") {
        if (!std::filesystem::exists(cfg.waveform_csv))
            throw MissingFileError("waveform file not found: " + cfg.waveform_csv);
        Waveform w = Waveform::from_csv(cfg.waveform_csv);
        if (std::abs(w.period() - cfg.params.T1) > 1e-9 * cfg.params.T1)
            throw ConfigError("config: waveform period does not match params.T1");
        if (w.amplitude() > 0.0 &&
            std::abs(w.mean_adjustment()) > 1e-6 * w.amplitude())
            err << "warning: waveform mean shift " << w.mean_adjustment()
                << " exceeds 1e-6 of its amplitude; zero mean was enforced\n";
        return FieldModel::tabulated(std::move(w));
    }
    if (cfg.profile == "bessel")
        return FieldModel::bessel_harmonic(cfg.params.omega1, cfg.cosine);
    if (cfg.profile == "unit")
        return FieldModel::harmonic(RadialProfile::constant(1.0),
                                    cfg.cosine ? RadialProfile::constant(1.0)
                                               : RadialProfile());
    // otherwise a CSV table of (r, D) samples
    if (!std::filesystem::exists(cfg.profile))
        throw MissingFileError("profile table not found: " + cfg.profile);
    std::ifstream in(cfg.profile);
    std::vector<double> rs, ds;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double r, d;
        if (!(row >> r >> d)) {
            if (first) { first = false; continue; }
            throw ConfigError("profile table: malformed row '" + line + "'");
        }
        first = false;
        rs.push_back(r);
        ds.push_back(d);
    }
    return FieldModel::harmonic(RadialProfile::sampled(std::move(rs), std::move(ds)));
}

json config_json(const RunConfig& cfg) {
    json period_map{{"points", cfg.points}, {"first_offset", cfg.first_offset}};
    if (std::isfinite(cfg.hmax)) period_map["hmax"] = cfg.hmax;  // unresolved: keep the default
    json simulate{
        {"pr0", cfg.sim_pr0}, {"samples", cfg.sim_samples}, {"full3d", cfg.sim_full3d}};
    if (std::isfinite(cfg.sim_r0)) simulate["r0"] = cfg.sim_r0;
    if (std::isfinite(cfg.sim_t_end)) simulate["t_end"] = cfg.sim_t_end;

    return json{
        {"params",
         {{"I0", cfg.params.I0},
          {"k", cfg.params.k},
          {"T1", cfg.params.T1},
          {"mu0", cfg.params.mu0},
          {"L", cfg.params.L},
          {"pz", cfg.params.pz}}},
        {"field",
         {{"kind", cfg.field_kind},
          {"profile", cfg.profile},
          {"cosine", cfg.cosine},
          {"waveform", cfg.waveform_csv}}},
        {"tolerances",
         {{"integrate", cfg.tol.integrate},
          {"quadrature", cfg.tol.quadrature},
          {"newton", cfg.tol.newton}}},
        {"output", {{"dir", cfg.out_dir.string()}}},
        {"period_map", period_map},
        {"melnikov", {{"n", cfg.melnikov_n}, {"samples", cfg.melnikov_samples}}},
        {"find_orbits", {{"nmax", cfg.nmax}, {"k", cfg.orbit_k}}},
        {"potential",
         {{"r_min", cfg.pot_r_min},
          {"r_max", cfg.pot_r_max},
          {"nr", cfg.pot_nr},
          {"nt", cfg.pot_nt}}},
        {"simulate", simulate},
        {"verify", {{"tol", cfg.verify_tol}}},
    };
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& outputs) {
    json manifest{{"command", command}, {"config", config_json(cfg)}, {"outputs", outputs}};
    io::write_text_atomic(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
}

int cmd_equilibrium(RunConfig& cfg, std::ostream& out) {
    const auto eq = equilibrium(cfg.params);
    out << "r_bar  = " << io::format_float(eq.r_bar) << '\n'
        << "H0     = " << io::format_float(eq.H0) << '\n'
        << "T0_lin = " << io::format_float(eq.T0_lin) << '\n'
        << "T0_alt = " << io::format_float(eq.T0_alt) << '\n';
    write_manifest(cfg, "equilibrium", {});
    return exit_ok;
}

int cmd_period_map(RunConfig& cfg, std::ostream& out) {
    const auto eq = equilibrium(cfg.params);
    if (std::isnan(cfg.hmax)) cfg.hmax = eq.H0 + 5.0;
    const auto table = build_table(cfg.params, cfg.hmax, cfg.points, cfg.first_offset);
    const auto path = cfg.out_dir / "period_map.csv";
    io::write_text_atomic(path, io::period_table_csv(table));
    out << "wrote " << path.string() << " (" << table.entries.size() << " rows)\n";
    write_manifest(cfg, "period-map", {"period_map.csv"});
    return exit_ok;
}

int cmd_potential(RunConfig& cfg, std::ostream& out) {
    Waveform w = cfg.field_kind == "tabulated" && !cfg.waveform_csv.empty()
                     ? Waveform::from_csv(cfg.waveform_csv)
                     : Waveform::sine(cfg.params.T1);
    std::vector<PotentialSample> grid;
    grid.reserve(static_cast<std::size_t>(cfg.pot_nr) * cfg.pot_nt);
    TailAverageOptions tail;
    tail.tol = cfg.tol.quadrature;
    for (int it = 0; it < cfg.pot_nt; ++it) {
        const double t = cfg.params.T1 * it / cfg.pot_nt;
        for (int ir = 0; ir < cfg.pot_nr; ++ir) {
            const double r =
                cfg.pot_nr == 1
                    ? cfg.pot_r_min
                    : cfg.pot_r_min + (cfg.pot_r_max - cfg.pot_r_min) * ir / (cfg.pot_nr - 1);
            grid.push_back(delayed_potential(t, r, w, tail));
        }
    }
    const auto path = cfg.out_dir / "potential.csv";
    io::write_text_atomic(path, io::potential_grid_csv(grid));
    out << "wrote " << path.string() << " (" << grid.size() << " rows)\n";
    write_manifest(cfg, "potential", {"potential.csv"});
    return exit_ok;
}

int cmd_melnikov(RunConfig& cfg, std::ostream& out, std::ostream& err) {
    PhysParams p = cfg.params;
    p.k = 0.0;  // the Melnikov integral lives on the unperturbed orbit
    const auto field = make_field(cfg, err);
    MelnikovOptions opts;
    opts.base_samples = cfg.melnikov_samples;
    opts.integrate_tol = cfg.tol.integrate;
    const auto result = melnikov_fourier(cfg.melnikov_n, p, field, opts);
    const std::string name = "melnikov_n" + std::to_string(cfg.melnikov_n) + ".json";
    io::write_text_atomic(cfg.out_dir / name, io::melnikov_json(result).dump(2) + "\n");
    out << "n = " << result.n << ", H_n = " << io::format_float(result.H_n)
        << ", amplitude = " << io::format_float(result.amplitude)
        << ", zeros = " << result.zeros.size() << '\n'
        << "wrote " << (cfg.out_dir / name).string() << '\n';
    write_manifest(cfg, "melnikov", {name});
    return exit_ok;
}

int cmd_find_orbits(RunConfig& cfg, std::ostream& out, std::ostream& err) {
    PhysParams p = cfg.params;
    p.k = cfg.orbit_k;
    const auto field = make_field(cfg, err);
    FinderOptions opts;
    opts.integrate_tol = cfg.tol.integrate;
    opts.newton_tol = cfg.tol.newton;
    const auto scans = scan_orbits(cfg.nmax, p, field, {}, opts);
    io::write_text_atomic(cfg.out_dir / "catalogue.json",
                          io::catalogue_json(scans).dump(2) + "\n");
    io::write_text_atomic(cfg.out_dir / "catalogue.csv", io::catalogue_summary_csv(scans));
    for (const auto& scan : scans)
        out << "n = " << scan.n << ": " << scan.orbits.size() << " orbit(s), "
            << scan.melnikov_zero_count << " Melnikov zero(s)\n";
    write_manifest(cfg, "find-orbits", {"catalogue.json", "catalogue.csv"});
    return exit_ok;
}

int cmd_simulate(RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto field = make_field(cfg, err);
    const auto eq = equilibrium(cfg.params);
    if (std::isnan(cfg.sim_r0)) cfg.sim_r0 = 1.5 * eq.r_bar;
    if (std::isnan(cfg.sim_t_end)) cfg.sim_t_end = 10.0 * eq.T0_lin;

    const auto dense = integrate_dense(RadialState{cfg.sim_r0, cfg.sim_pr0}, 0.0,
                                       cfg.sim_t_end, cfg.params, field, cfg.tol.integrate);
    OrbitSample orbit;
    orbit.energy = hamiltonian(0.0, RadialState{cfg.sim_r0, cfg.sim_pr0}, cfg.params, field);
    for (int i = 0; i <= cfg.sim_samples; ++i) {
        const double t = cfg.sim_t_end * i / cfg.sim_samples;
        orbit.times.push_back(t);
        orbit.states.push_back(dense.state(t));
    }

    std::vector<std::string> files;
    if (cfg.sim_full3d) {
        const auto motion =
            reconstruct_full_motion(orbit.times, orbit.states, cfg.params, field);
        io::write_text_atomic(cfg.out_dir / "trajectory_full.csv",
                              io::full_motion_csv(motion));
        files.push_back("trajectory_full.csv");
    } else {
        io::write_text_atomic(cfg.out_dir / "trajectory.csv", io::trajectory_csv(orbit));
        files.push_back("trajectory.csv");
    }
    out << "wrote " << (cfg.out_dir / files.front()).string() << '\n';
    write_manifest(cfg, "simulate", files);
    return exit_ok;
}

int cmd_verify(RunConfig& cfg, std::ostream& out) {
    const auto reports = run_sign_checks(cfg.verify_tol);
    io::write_text_atomic(cfg.out_dir / "sign_reports.json",
                          io::sign_reports_json(reports).dump(2) + "\n");
    bool all_pass = true;
    for (const auto& rep : reports) {
        out << (rep.pass ? "ok   " : "FAIL ") << rep.claim
            << " (min " << io::format_float(rep.min_value) << ")\n";
        all_pass = all_pass && rep.pass;
    }
    write_manifest(cfg, "verify", {"sign_reports.json"});
    return all_pass ? exit_ok : exit_check_failed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"radial dynamics of a charged particle near a modulated current wire"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir_flag;
    std::optional<int> flag_n, flag_nmax, flag_points;
    std::optional<double> flag_k, flag_hmax, flag_tol;
    app.add_option("--config", config_path, "JSON config file (or an emitted manifest)");
    app.add_option("--out", out_dir_flag, "output directory");
    app.add_option("--tol", flag_tol, "override all tolerances");

    auto* sub_eq = app.add_subcommand("equilibrium", "print r_bar, H0 and both T0 values");
    sub_eq->fallthrough();
    auto* sub_pm = app.add_subcommand("period-map", "tabulate the energy-period map (CSV)");
    sub_pm->fallthrough();
    sub_pm->add_option("--hmax", flag_hmax, "largest energy in the table");
    sub_pm->add_option("--points", flag_points, "number of table rows");
    auto* sub_pot = app.add_subcommand("potential", "delayed-potential grid (CSV)");
    sub_pot->fallthrough();
    auto* sub_mel = app.add_subcommand("melnikov", "Melnikov Fourier data for one order (JSON)");
    sub_mel->fallthrough();
    sub_mel->add_option("--n", flag_n, "resonance order");
    auto* sub_orb = app.add_subcommand("find-orbits", "catalogue perturbed periodic orbits");
    sub_orb->fallthrough();
    sub_orb->add_option("--nmax", flag_nmax, "largest period multiple");
    sub_orb->add_option("--k", flag_k, "modulation amplitude");
    auto* sub_sim = app.add_subcommand("simulate", "integrate one trajectory (CSV)");
    sub_sim->fallthrough();
    auto* sub_ver = app.add_subcommand("verify", "run the sign-check battery (JSON)");
    sub_ver->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("wireorbit");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "usage: see 'wireorbit --help'\n";
        return exit_usage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            if (!std::filesystem::exists(config_path))
                throw MissingFileError("config file not found: " + config_path);
            std::ifstream in(config_path);
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
            apply_config_json(cfg, doc);
        }
        if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
        if (flag_tol) cfg.tol = {*flag_tol, *flag_tol, *flag_tol};
        if (flag_n) cfg.melnikov_n = *flag_n;
        if (flag_nmax) cfg.nmax = *flag_nmax;
        if (flag_k) cfg.orbit_k = *flag_k;
        if (flag_hmax) cfg.hmax = *flag_hmax;
        if (flag_points) cfg.points = *flag_points;
        validate_config(cfg);

        if (sub_eq->parsed()) return cmd_equilibrium(cfg, out);
        if (sub_pm->parsed()) return cmd_period_map(cfg, out);
        if (sub_pot->parsed()) return cmd_potential(cfg, out);
        if (sub_mel->parsed()) return cmd_melnikov(cfg, out, err);
        if (sub_orb->parsed()) return cmd_find_orbits(cfg, out, err);
        if (sub_sim->parsed()) return cmd_simulate(cfg, out, err);
        if (sub_ver->parsed()) return cmd_verify(cfg, out);
        err << "error: no subcommand given\n";
        return exit_usage;
    } catch (const MissingFileError& e) {
        err << "error: " << e.what() << '\n';
        return exit_missing_file;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}

}  // namespace wireorbit::cli
