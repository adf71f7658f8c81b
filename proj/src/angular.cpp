#include "cbs/angular.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace cbs {

namespace {
std::atomic<double> g_cg_fault{0.0};
}

HalfInt HalfInt::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw DomainError("empty angular momentum value");

    auto parse_int = [&](const std::string& part) {
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(part, &pos);
        } catch (const std::exception&) {
            throw DomainError("cannot parse angular momentum '" + text + "'");
        }
        if (pos != part.size()) throw DomainError("cannot parse angular momentum '" + text + "'");
        return v;
    };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        long num = parse_int(s.substr(0, slash));
        long den = parse_int(s.substr(slash + 1));
        if (den == 1) return HalfInt{static_cast<int>(2 * num)};
        if (den == 2) return HalfInt{static_cast<int>(num)};
        throw DomainError("angular momentum must be a multiple of 1/2: '" + text + "'");
    }
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos) {
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size()) throw DomainError("cannot parse angular momentum '" + text + "'");
        double t = 2.0 * v;
        if (std::abs(t - std::round(t)) > 1e-12)
            throw DomainError("angular momentum must be a multiple of 1/2: '" + text + "'");
        return HalfInt{static_cast<int>(std::lround(t))};
    }
    return HalfInt{static_cast<int>(2 * parse_int(s))};
}

std::string HalfInt::str() const {
    if (is_integer()) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
}

SphericalIndex::SphericalIndex(int value) : q(value) {
    if (value < -1 || value > 1) throw DomainError("spherical index must be -1, 0 or +1");
}

Orientation::Orientation(double theta_, double phi_) : theta(theta_), phi(phi_) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("theta outside [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * kPi)) throw DomainError("phi outside [0, 2pi)");
}

namespace {

// log(n!) with n given as a doubled integer that must be even and non-negative.
long double log_fact2(int twice_n) { return std::lgamma(static_cast<long double>(twice_n / 2) + 1.0L); }

void check_pair(HalfInt j, HalfInt m) {
    if (j.twice < 0) throw DomainError("negative angular momentum");
    if (std::abs(m.twice) > j.twice) throw DomainError("|m| exceeds j");
    if ((j.twice - m.twice) % 2 != 0) throw DomainError("j and m must both be integer or both half-integer");
}

}  // namespace

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
    check_pair(j1, m1);
    check_pair(j2, m2);
    check_pair(J, M);

    if (m1.twice + m2.twice != M.twice) return 0.0;
    if (J.twice > j1.twice + j2.twice || J.twice < std::abs(j1.twice - j2.twice)) return 0.0;
    if ((j1.twice + j2.twice + J.twice) % 2 != 0) return 0.0;

    const int a = j1.twice, b = j2.twice, c = J.twice;
    const int ma = m1.twice, mb = m2.twice, mc = M.twice;

    long double log_pref = 0.5L * (std::log(static_cast<long double>(c + 1)) + log_fact2(c + a - b) +
                                   log_fact2(c - a + b) + log_fact2(a + b - c) - log_fact2(a + b + c + 2));
    log_pref += 0.5L * (log_fact2(c + mc) + log_fact2(c - mc) + log_fact2(a - ma) + log_fact2(a + ma) +
                        log_fact2(b - mb) + log_fact2(b + mb));

    // Summation range in doubled units: all factorial arguments non-negative.
    int kmin = std::max({0, b - c - ma, a - c + mb});
    int kmax = std::min({a + b - c, a - ma, b + mb});
    long double sum = 0.0L;
    for (int k = kmin; k <= kmax; k += 2) {
        long double log_den = log_fact2(k) + log_fact2(a + b - c - k) + log_fact2(a - ma - k) +
                              log_fact2(b + mb - k) + log_fact2(c - b + ma + k) + log_fact2(c - a - mb + k);
        long double term = std::exp(log_pref - log_den);
        sum += ((k / 2) % 2 == 0) ? term : -term;
    }
    const double value = static_cast<double>(sum);
    return M.twice == J.twice ? value * (1.0 + g_cg_fault.load(std::memory_order_relaxed)) : value;
}

namespace testing {
void set_clebsch_gordan_fault(double relative_error) { g_cg_fault.store(relative_error); }
}  // namespace testing

Vec3c spherical_unit_vector(SphericalIndex q) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (q.q) {
        case 1: return {cplx(-r, 0.0), cplx(0.0, -r), cplx(0.0, 0.0)};
        case -1: return {cplx(r, 0.0), cplx(0.0, -r), cplx(0.0, 0.0)};
        default: return {cplx(0.0), cplx(0.0), cplx(1.0, 0.0)};
    }
}

namespace {

cplx hermitian_dot(const Vec3c& a, const Vec3c& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

cplx plain_dot(const Vec3c& a, const Vec3c& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3c conj3(const Vec3c& a) { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }

}  // namespace

cplx transverse_projector_component(SphericalIndex q_out, SphericalIndex q_in, const Orientation& o) {
    const Vec3c eo = spherical_unit_vector(q_out);
    const Vec3c ei = spherical_unit_vector(q_in);
    const Vec3c n{cplx(std::sin(o.theta) * std::cos(o.phi)), cplx(std::sin(o.theta) * std::sin(o.phi)),
                  cplx(std::cos(o.theta))};
    return hermitian_dot(eo, ei) - hermitian_dot(eo, n) * plain_dot(n, ei);
}

cplx configuration_average(SphericalIndex r, SphericalIndex q, SphericalIndex qprime, SphericalIndex rprime) {
    // Isotropic moments: <n_i n_j> = d_ij/3, <n_i n_j n_k n_l> = (d_ij d_kl + d_ik d_jl + d_il d_jk)/15.
    const Vec3c u = conj3(spherical_unit_vector(r));
    const Vec3c v = spherical_unit_vector(q);
    const Vec3c w = conj3(spherical_unit_vector(qprime));
    const Vec3c x = spherical_unit_vector(rprime);

    const cplx uv = plain_dot(u, v), wx = plain_dot(w, x);
    const cplx second_uv = uv / 3.0, second_wx = wx / 3.0;
    const cplx fourth = (uv * wx + plain_dot(u, w) * plain_dot(v, x) + plain_dot(u, x) * plain_dot(v, w)) / 15.0;
    return uv * wx - uv * second_wx - wx * second_uv + fourth;
}

}  // namespace cbs
