#include "cbs/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cbs {

double saturation(double Omega, double delta) {
    if (!(Omega > 0.0)) throw DomainError("Omega must be positive");
    return Omega * Omega / (2.0 * (1.0 + delta * delta));
}

double elastic_intensity_analytic(HalfInt Jg, double delta, double s) {
    if (!(s > 0.0)) throw DomainError("saturation parameter must be positive");
    const double k = 4.0 * Jg.value() + 1.0;
    return s / std::pow(1.0 + s, 4) / (k * k) / (1.0 + delta * delta);
}

namespace {

// Least-squares amplitude A of values ~ A/nu^2 over the given index range.
double tail_amplitude(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo, std::size_t hi) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (x[i] == 0.0) continue;
        const double b = 1.0 / (x[i] * x[i]);
        num += b * y[i];
        den += b * b;
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace

double integrate_spectrum(const std::vector<double>& grid, const std::vector<double>& values) {
    if (grid.size() != values.size()) throw DomainError("grid and values differ in length");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("grid must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("non-finite spectrum value");
    const std::size_t n = grid.size();
    if (n < 2) return 0.0;

    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) sum += 0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]);

    // Tails only make sense when the grid edges lie away from the origin.
    const std::size_t m = std::max<std::size_t>(2, n / 10);
    if (n >= 20 && grid.front() < 0.0 && grid.back() > 0.0) {
        const double ar = tail_amplitude(grid, values, n - m, n);
        const double al = tail_amplitude(grid, values, 0, m);
        sum += ar / grid.back() + al / (-grid.front());
    }
    return sum;
}

double enhancement(const SpectrumResult& r) {
    const double L = r.L_el + r.L_in;
    if (!(L > 0.0)) throw DomainError("total ladder intensity must be positive");
    return 1.0 + (r.C_el + r.C_in) / L;
}

DressedResonances dressed_resonances(HalfInt Jg, double Omega, double delta) {
    if (Jg.twice < 2) throw DomainError("dressed resonance predictor needs Jg >= 1");
    const double j = Jg.value();
    DressedResonances d;
    d.Omega_tilde = std::hypot(Omega, delta);
    d.Omega_prime = d.Omega_tilde * std::sqrt(j * (2.0 * j - 1.0) / (2.0 * j * j + 3.0 * j + 1.0));
    const double a = 0.5 * (d.Omega_tilde + d.Omega_prime), b = 0.5 * (d.Omega_tilde - d.Omega_prime);
    d.nu = {-a, -b, b, a};
    return d;
}

std::vector<double> find_peaks(const std::vector<double>& grid, const std::vector<double>& values, double bin) {
    if (!(bin > 0.0)) throw DomainError("bin width must be positive");
    if (grid.size() != values.size()) throw DomainError("grid and values differ in length");
    std::map<long, std::pair<double, int>> bins;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const long k = std::lround(grid[i] / bin);
        auto& b = bins[k];
        b.first += values[i];
        b.second += 1;
    }
    std::vector<std::pair<long, double>> series;
    for (const auto& [k, b] : bins) series.emplace_back(k, b.first / b.second);
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        // Only compare against adjacent populated bins.
        if (series[i - 1].first != series[i].first - 1 || series[i + 1].first != series[i].first + 1) continue;
        if (series[i].second > series[i - 1].second && series[i].second > series[i + 1].second)
            peaks.push_back(series[i].first * bin);
    }
    return peaks;
}

}  // namespace cbs
