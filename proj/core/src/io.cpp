#include "wireorbit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wireorbit::io {
namespace {

const char* kind_name(OrbitKind kind) {
    switch (kind) {
        case OrbitKind::elliptic: return "elliptic";
        case OrbitKind::hyperbolic: return "hyperbolic";
        case OrbitKind::parabolic: return "parabolic";
    }
    return "?";
}

}  // namespace

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("write_text_atomic: cannot open " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write_text_atomic: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string period_table_csv(const PeriodMapTable& table) {
    std::ostringstream out;
    out << "H,T,r_a,r_b\n";
    for (const auto& e : table.entries)
        out << format_float(e.H) << ',' << format_float(e.T) << ',' << format_float(e.r_a)
            << ',' << format_float(e.r_b) << '\n';
    return out.str();
}

std::string potential_grid_csv(std::span<const PotentialSample> samples) {
    std::ostringstream out;
    out << "t,r,value,dvalue_dr\n";
    for (const auto& s : samples)
        out << format_float(s.t) << ',' << format_float(s.r) << ',' << format_float(s.value)
            << ',' << format_float(s.dvalue_dr) << '\n';
    return out.str();
}

std::string trajectory_csv(const OrbitSample& orbit) {
    std::ostringstream out;
    out << "t,r,pr\n";
    for (std::size_t i = 0; i < orbit.times.size(); ++i)
        out << format_float(orbit.times[i]) << ',' << format_float(orbit.states[i].r) << ','
            << format_float(orbit.states[i].pr) << '\n';
    return out.str();
}

std::string full_motion_csv(std::span<const FullMotionSample> samples) {
    std::ostringstream out;
    out << "t,r,theta,z,r_dot,theta_dot,z_dot,speed,energy\n";
    for (const auto& s : samples)
        out << format_float(s.t) << ',' << format_float(s.r) << ',' << format_float(s.theta)
            << ',' << format_float(s.z) << ',' << format_float(s.r_dot) << ','
            << format_float(s.theta_dot) << ',' << format_float(s.z_dot) << ','
            << format_float(s.speed) << ',' << format_float(s.energy) << '\n';
    return out.str();
}

std::string catalogue_summary_csv(std::span<const ResonanceScan> scans) {
    std::ostringstream out;
    out << "n,r_fixed,pr_fixed,residual,floquet_mod_1,kind,distance,k\n";
    for (const auto& scan : scans)
        for (const auto& rec : scan.orbits)
            out << rec.n << ',' << format_float(rec.fixed_point.r) << ','
                << format_float(rec.fixed_point.pr) << ',' << format_float(rec.residual) << ','
                << format_float(std::abs(rec.floquet[0])) << ',' << kind_name(rec.kind) << ','
                << format_float(rec.distance_to_unperturbed) << ',' << format_float(rec.k)
                << '\n';
    return out.str();
}

nlohmann::json melnikov_json(const MelnikovResult& result) {
    return nlohmann::json{
        {"n", result.n},         {"H_n", result.H_n},         {"a", result.a},
        {"b", result.b},         {"amplitude", result.amplitude},
        {"phase", result.phase}, {"zeros", result.zeros},     {"simple", result.simple},
    };
}

nlohmann::json orbit_record_json(const OrbitRecord& record) {
    return nlohmann::json{
        {"n", record.n},
        {"fixed_point", {{"r", record.fixed_point.r}, {"pr", record.fixed_point.pr}}},
        {"residual", record.residual},
        {"floquet",
         {{{"re", record.floquet[0].real()}, {"im", record.floquet[0].imag()}},
          {{"re", record.floquet[1].real()}, {"im", record.floquet[1].imag()}}}},
        {"kind", kind_name(record.kind)},
        {"distance_to_unperturbed", record.distance_to_unperturbed},
        {"k", record.k},
        {"newton_iterations", record.newton_iterations},
        {"minimal_multiple", record.minimal_multiple},
        {"lower_period", record.lower_period},
    };
}

nlohmann::json catalogue_json(std::span<const ResonanceScan> scans) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& scan : scans) {
        nlohmann::json orbits = nlohmann::json::array();
        for (const auto& rec : scan.orbits) orbits.push_back(orbit_record_json(rec));
        arr.push_back(nlohmann::json{{"n", scan.n},
                                     {"H_n", scan.H_n},
                                     {"melnikov_zero_count", scan.melnikov_zero_count},
                                     {"orbit_count", scan.orbits.size()},
                                     {"failed_seeds", scan.failed_seeds},
                                     {"orbits", orbits}});
    }
    return arr;
}

nlohmann::json sign_reports_json(std::span<const SignReport> reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rep : reports)
        arr.push_back(nlohmann::json{{"claim", rep.claim},
                                     {"grid", rep.grid},
                                     {"min_value", rep.min_value},
                                     {"pass", rep.pass},
                                     {"witness", {rep.witness[0], rep.witness[1]}}});
    return arr;
}

}  // namespace wireorbit::io
