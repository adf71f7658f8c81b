#include "cbs/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace cbs {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+') ++first;
    const auto res = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError("not a finite number: '" + text + "'");
    return v;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (key == "Jg") {
        try {
            HalfInt::parse(v);
        } catch (const std::exception&) {
            throw ConfigError("Jg must be a non-negative integer or half-integer: '" + v + "'");
        }
        c.Jg = v;
    } else if (key == "mode") c.mode = v;
    else if (key == "Omega") c.Omega = parse_double(v);
    else if (key == "delta") c.delta = parse_double(v);
    else if (key == "nu_min") c.nu_min = parse_double(v);
    else if (key == "nu_max") c.nu_max = parse_double(v);
    else if (key == "step") c.step = parse_double(v);
    else if (key == "channel") c.channel = v;
    else if (key == "sweep") c.sweep = v;
    else if (key == "values") c.values = split_list(v);
    else if (key == "output") c.output = v;
    else if (key == "format") c.format = v;
    else if (key == "rel_tol") c.rel_tol = parse_double(v);
    else if (key == "threads") {
        if (v == "auto") {
            c.threads = 0;
        } else {
            int n = 0;
            const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
            if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || n < 1)
                throw ConfigError("threads must be a positive integer or 'auto': '" + v + "'");
            c.threads = n;
        }
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

void validate(const RunConfig& c) {
    const HalfInt J = HalfInt::parse(c.Jg);
    if (J.twice < 0) throw ConfigError("Jg must be non-negative");
    if (c.mode != "full" && c.mode != "effective" && c.mode != "auto")
        throw ConfigError("mode must be full, effective or auto");
    if (c.mode == "effective" && J.twice < 2) throw ConfigError("effective mode needs Jg >= 1");
    if (!(c.Omega > 0.0)) throw ConfigError("Omega must be positive");
    if (!(c.nu_min < c.nu_max)) throw ConfigError("nu_min must be below nu_max");
    if (!(c.step > 0.0)) throw ConfigError("step must be positive");
    if ((c.nu_max - c.nu_min) / c.step > 1e7) throw ConfigError("grid too large");
    if (c.channel != "hh") throw ConfigError("only channel hh is supported");
    if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
    if (!(c.rel_tol > 0.0 && c.rel_tol < 1.0)) throw ConfigError("rel_tol must lie in (0, 1)");
    if (!c.sweep.empty() && c.sweep != "s" && c.sweep != "Jg") throw ConfigError("sweep must be s or Jg");
    if (!c.values.empty() && c.sweep.empty()) throw ConfigError("values given without sweep");
    for (const auto& v : c.values) {
        if (c.sweep == "s") {
            if (!(parse_double(v) > 0.0)) throw ConfigError("sweep values of s must be positive");
        } else {
            HalfInt h;
            try {
                h = HalfInt::parse(v);
            } catch (const std::exception&) {
                throw ConfigError("bad Jg sweep value '" + v + "'");
            }
            if (h.twice < 0) throw ConfigError("Jg sweep values must be non-negative");
        }
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        try {
            set_config_value(c, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    o << "Jg = " << c.Jg << "\n"
      << "mode = " << c.mode << "\n"
      << "Omega = " << format_double(c.Omega) << "\n"
      << "delta = " << format_double(c.delta) << "\n"
      << "nu_min = " << format_double(c.nu_min) << "\n"
      << "nu_max = " << format_double(c.nu_max) << "\n"
      << "step = " << format_double(c.step) << "\n"
      << "channel = " << c.channel << "\n"
      << "sweep = " << c.sweep << "\n"
      << "values = ";
    for (std::size_t i = 0; i < c.values.size(); ++i) o << (i ? "," : "") << c.values[i];
    o << "\n"
      << "output = " << c.output << "\n"
      << "format = " << c.format << "\n"
      << "threads = " << (c.threads == 0 ? std::string("auto") : std::to_string(c.threads)) << "\n"
      << "rel_tol = " << format_double(c.rel_tol) << "\n";
    return o.str();
}

LevelMode resolve_mode(const RunConfig& c, HalfInt Jg) {
    if (c.mode == "full") return LevelMode::full;
    if (c.mode == "effective") return LevelMode::effective;
    return Jg.twice <= 10 ? LevelMode::full : LevelMode::effective;
}

int resolve_threads(const RunConfig& c) {
    if (c.threads > 0) return c.threads;
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

ModelParams model_params(const RunConfig& c) {
    ModelParams p;
    p.Jg = HalfInt::parse(c.Jg);
    p.mode = resolve_mode(c, p.Jg);
    p.Omega = c.Omega;
    p.delta = c.delta;
    p.channel = ChannelConfig::hh();
    p.quad.rel_tol = c.rel_tol;
    p.threads = resolve_threads(c);
    return p;
}

std::vector<double> config_grid(const RunConfig& c) {
    const long n = std::lround(std::floor((c.nu_max - c.nu_min) / c.step + 1e-9));
    std::vector<double> g;
    g.reserve(n + 2);
    for (long i = 0; i <= n; ++i) g.push_back(c.nu_min + i * c.step);
    if (c.nu_max - g.back() > 1e-9 * c.step) g.push_back(c.nu_max);
    return g;
}

}  // namespace cbs
