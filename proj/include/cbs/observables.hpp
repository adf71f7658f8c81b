#pragma once

#include <array>
#include <vector>

#include "cbs/angular.hpp"
#include "cbs/assembler.hpp"

namespace cbs {

double saturation(double Omega, double delta);

// (4Jg+1)^-2 (1+delta^2)^-1 s/(1+s)^4
double elastic_intensity_analytic(HalfInt Jg, double delta, double s);

// Trapezoid rule plus O(nu^-2) tails fitted on the outer 10% of the grid on each side.
double integrate_spectrum(const std::vector<double>& grid, const std::vector<double>& values);

double enhancement(const SpectrumResult& r);

struct DressedResonances {
    double Omega_tilde = 0.0;
    double Omega_prime = 0.0;
    std::array<double, 4> nu{};  // ascending
};

DressedResonances dressed_resonances(HalfInt Jg, double Omega, double delta);

// Local maxima of the series averaged over bins [ (k-1/2) b, (k+1/2) b ), reported at k b.
std::vector<double> find_peaks(const std::vector<double>& grid, const std::vector<double>& values, double bin = 0.1);

}  // namespace cbs
