#pragma once

#include <array>
#include <string>

#include "cbs/types.hpp"

namespace cbs {

// Angular momentum quantum number stored as 2j so that half-integers compare exactly.
struct HalfInt {
    int twice = 0;

    static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
    static constexpr HalfInt integer(int n) { return HalfInt{2 * n}; }
    // Accepts "3", "3/2", "1.5", "-1/2".
    static HalfInt parse(const std::string& text);

    double value() const { return 0.5 * twice; }
    bool is_integer() const { return twice % 2 == 0; }
    std::string str() const;

    friend constexpr bool operator==(HalfInt a, HalfInt b) { return a.twice == b.twice; }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) { return a.twice <=> b.twice; }
    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return {a.twice + b.twice}; }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return {a.twice - b.twice}; }
    friend constexpr HalfInt operator-(HalfInt a) { return {-a.twice}; }
};

// Polarization index q in {-1, 0, +1}.
struct SphericalIndex {
    int q = 0;

    constexpr SphericalIndex() = default;
    SphericalIndex(int value);

    int slot() const { return q + 1; }  // 0..2, for array indexing
    friend constexpr bool operator==(SphericalIndex a, SphericalIndex b) { return a.q == b.q; }
};

inline constexpr std::array<int, 3> kSphericalValues{-1, 0, 1};

struct Orientation {
    double theta = 0.0;
    double phi = 0.0;

    Orientation() = default;
    Orientation(double theta_, double phi_);
};

using Vec3c = std::array<cplx, 3>;

// <j1 m1, j2 m2 | J M>, Condon-Shortley phase.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

Vec3c spherical_unit_vector(SphericalIndex q);

// e*_{q_out} . (1 - n n) . e_{q_in}
cplx transverse_projector_component(SphericalIndex q_out, SphericalIndex q_in, const Orientation& orient);

// Fault injection for negative tests: scales every stretched (M = J) coefficient by 1 + relative_error.
namespace testing {
void set_clebsch_gordan_fault(double relative_error);
}

// Orientational average of Delta_{r q} Delta_{q' r'} over the unit sphere.
cplx configuration_average(SphericalIndex r, SphericalIndex q, SphericalIndex qprime, SphericalIndex rprime);

}  // namespace cbs
