#include "cbs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cbs/observables.hpp"

namespace cbs {

using nlohmann::ordered_json;

std::string version() { return CBS_VERSION; }

std::string format_fixed(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 11);
    return std::string(buf, res.ptr);
}

namespace {

void header_line(std::ostringstream& o, const std::string& key, const std::string& value) {
    o << "# " << key << "=" << value << "\n";
}

void parameter_lines(std::ostringstream& o, const RunConfig& c, const std::string& mode) {
    header_line(o, "units", "gamma");
    header_line(o, "Jg", c.Jg);
    header_line(o, "mode", mode);
    header_line(o, "Omega", format_double(c.Omega));
    header_line(o, "delta", format_double(c.delta));
    header_line(o, "channel", c.channel);
    header_line(o, "rel_tol", format_double(c.rel_tol));
}

void diag_lines(std::ostringstream& o, const QuadDiagnostics& d) {
    header_line(o, "quad_evals", std::to_string(d.evals));
    header_line(o, "quad_unconverged", std::to_string(d.unconverged));
    header_line(o, "quad_max_error", format_fixed(d.max_error_estimate));
}

ordered_json parameters_json(const RunConfig& c, const std::string& mode) {
    ordered_json p;
    p["units"] = "gamma";
    p["Jg"] = c.Jg;
    p["mode"] = mode;
    p["Omega"] = c.Omega;
    p["delta"] = c.delta;
    p["channel"] = c.channel;
    p["rel_tol"] = c.rel_tol;
    return p;
}

ordered_json diag_json(const QuadDiagnostics& d) {
    ordered_json j;
    j["evals"] = d.evals;
    j["unconverged"] = d.unconverged;
    j["max_error_estimate"] = d.max_error_estimate;
    return j;
}

}  // namespace

std::string spectrum_csv(const SpectrumRecord& r) {
    std::ostringstream o;
    const SpectrumResult& s = r.result;
    header_line(o, "version", version());
    parameter_lines(o, r.config, r.mode);
    header_line(o, "s", format_fixed(r.s));
    header_line(o, "L_el", format_fixed(s.L_el));
    header_line(o, "C_el", format_fixed(s.C_el));
    header_line(o, "L_in", format_fixed(s.L_in));
    header_line(o, "C_in", format_fixed(s.C_in));
    header_line(o, "alpha", format_fixed(s.alpha));
    diag_lines(o, s.diag);
    header_line(o, "max_crossed_imag", format_fixed(s.max_crossed_imag));
    o << "nu,ladder_inelastic,crossed_inelastic\n";
    for (std::size_t i = 0; i < s.grid.size(); ++i)
        o << format_fixed(s.grid[i]) << "," << format_fixed(s.ladder_in[i]) << "," << format_fixed(s.crossed_in[i])
          << "\n";
    return o.str();
}

std::string spectrum_json(const SpectrumRecord& r) {
    const SpectrumResult& s = r.result;
    ordered_json j;
    j["version"] = version();
    j["parameters"] = parameters_json(r.config, r.mode);
    j["s"] = r.s;
    j["L_el"] = s.L_el;
    j["C_el"] = s.C_el;
    j["L_in"] = s.L_in;
    j["C_in"] = s.C_in;
    j["alpha"] = s.alpha;
    j["quadrature"] = diag_json(s.diag);
    j["quadrature"]["max_crossed_imag"] = s.max_crossed_imag;
    j["columns"] = {"nu", "ladder_inelastic", "crossed_inelastic"};
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < s.grid.size(); ++i) rows.push_back({s.grid[i], s.ladder_in[i], s.crossed_in[i]});
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

std::string enhancement_csv(const EnhancementRecord& r) {
    std::ostringstream o;
    header_line(o, "version", version());
    parameter_lines(o, r.config, r.config.mode);
    header_line(o, "sweep", r.config.sweep);
    diag_lines(o, r.diag);
    o << "sweep_value,alpha,L_el,C_el,L_in,C_in\n";
    for (const auto& row : r.rows)
        o << row.sweep_value << "," << format_fixed(row.alpha) << "," << format_fixed(row.L_el) << ","
          << format_fixed(row.C_el) << "," << format_fixed(row.L_in) << "," << format_fixed(row.C_in) << "\n";
    return o.str();
}

std::string enhancement_json(const EnhancementRecord& r) {
    ordered_json j;
    j["version"] = version();
    j["parameters"] = parameters_json(r.config, r.config.mode);
    j["sweep"] = r.config.sweep;
    j["quadrature"] = diag_json(r.diag);
    j["columns"] = {"sweep_value", "alpha", "L_el", "C_el", "L_in", "C_in"};
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) rows.push_back({row.sweep_value, row.alpha, row.L_el, row.C_el, row.L_in, row.C_in});
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + path + "'");
    f << content;
    if (!f) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace cbs
