#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cbs/acceptance.hpp"
#include "cbs/config.hpp"
#include "cbs/io.hpp"
#include "cbs/observables.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kAcceptance = 3 };

struct Overrides {
    std::string config_file;
    std::map<std::string, std::string> values;
    std::string only;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config_file, "key=value config file");
    for (const char* key : {"Jg", "mode", "Omega", "delta", "nu_min", "nu_max", "step", "channel", "sweep", "values",
                            "output", "format", "threads", "rel_tol"}) {
        cmd->add_option_function<std::string>(std::string("--") + key,
                                              [&o, key](const std::string& v) { o.values[key] = v; });
    }
}

cbs::RunConfig resolve(const Overrides& o) {
    cbs::RunConfig c = o.config_file.empty() ? cbs::RunConfig{} : cbs::load_config(o.config_file);
    for (const auto& [k, v] : o.values) cbs::set_config_value(c, k, v);
    cbs::validate(c);
    return c;
}

int cmd_spectrum(const cbs::RunConfig& c) {
    const cbs::ModelParams p = cbs::model_params(c);
    cbs::SpectrumRecord rec;
    rec.config = c;
    rec.mode = p.mode == cbs::LevelMode::full ? "full" : "effective";
    rec.s = cbs::saturation(c.Omega, c.delta);
    rec.result = cbs::assemble_spectra(p, cbs::config_grid(c));
    if (rec.result.diag.unconverged > 0)
        std::fprintf(stderr, "warning: %d quadratures did not reach rel_tol\n", rec.result.diag.unconverged);
    cbs::write_output(c.output, c.format == "json" ? cbs::spectrum_json(rec) : cbs::spectrum_csv(rec));
    return kOk;
}

int cmd_enhancement(const cbs::RunConfig& c) {
    if (c.sweep.empty() || c.values.empty()) throw cbs::ConfigError("enhancement needs sweep and values");
    cbs::EnhancementRecord rec;
    rec.config = c;
    rec.rows.resize(c.values.size());
    std::vector<cbs::QuadDiagnostics> diags(c.values.size());
    const int threads = cbs::resolve_threads(c);
    cbs::parallel_for(static_cast<int>(c.values.size()), threads, [&](int i) {
        cbs::RunConfig point = c;
        if (c.sweep == "s")
            point.Omega = std::sqrt(2.0 * cbs::parse_double(c.values[i]) * (1.0 + c.delta * c.delta));
        else
            point.Jg = c.values[i];
        cbs::ModelParams p = cbs::model_params(point);
        p.threads = 1;
        const cbs::CBSModel model(p);
        const cbs::SpectrumResult r = cbs::assemble_totals(model);
        rec.rows[i] = {c.values[i], r.alpha, r.L_el, r.C_el, r.L_in, r.C_in};
        diags[i] = r.diag;
    });
    for (const auto& d : diags) {
        rec.diag.evals += d.evals;
        rec.diag.unconverged += d.unconverged;
        rec.diag.max_error_estimate = std::max(rec.diag.max_error_estimate, d.max_error_estimate);
    }
    cbs::write_output(c.output, c.format == "json" ? cbs::enhancement_json(rec) : cbs::enhancement_csv(rec));
    return kOk;
}

int cmd_verify(const cbs::RunConfig& c, const std::string& only) {
    std::vector<std::string> ids;
    std::stringstream ss(only);
    for (std::string id; std::getline(ss, id, ',');)
        if (!id.empty()) ids.push_back(id);
    const auto known = cbs::acceptance_ids();
    for (const auto& id : ids)
        if (std::find(known.begin(), known.end(), id) == known.end())
            throw cbs::ConfigError("unknown criterion '" + id + "'");
    if (ids.empty()) ids = known;
    cbs::AcceptanceOptions opt;
    opt.threads = cbs::resolve_threads(c);
    const auto results = cbs::run_acceptance(ids, opt, [](const cbs::CriterionResult& r) {
        std::cout << cbs::format_result_line(r) << std::endl;
    });
    if (!c.output.empty()) cbs::write_output(c.output, cbs::acceptance_report_json(results));
    for (const auto& r : results)
        if (!r.passed) return kAcceptance;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Double-scattering CBS spectra for Jg -> Jg+1 atoms under a sigma+ pump"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cbs::version());
    Overrides spec_o, enh_o, ver_o;
    auto* spectrum = app.add_subcommand("spectrum", "inelastic spectra and totals on a frequency grid");
    auto* enhancement = app.add_subcommand("enhancement", "enhancement factor over a sweep in s or Jg");
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    add_run_flags(spectrum, spec_o);
    add_run_flags(enhancement, enh_o);
    add_run_flags(verify, ver_o);
    verify->add_option("--only", ver_o.only, "comma-separated criterion ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*spectrum) return cmd_spectrum(resolve(spec_o));
        if (*enhancement) return cmd_enhancement(resolve(enh_o));
        return cmd_verify(resolve(ver_o), ver_o.only);
    } catch (const cbs::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const cbs::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const cbs::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s (condition estimate %g)\n", e.what(), e.condition_estimate());
        return kNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    }
}
