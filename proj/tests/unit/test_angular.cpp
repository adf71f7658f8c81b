#include <doctest.h>

#include <cmath>

#include "cbs/angular.hpp"
#include "cbs/oracle.hpp"

using namespace cbs;

namespace {

HalfInt H(const char* s) { return HalfInt::parse(s); }

// Independent check: CG from the explicit j2 = 1 table (Condon-Shortley).
double cg_j2_one(double j1, double m1, int m2, double J, double M) {
    if (std::abs(m1 + m2 - M) > 1e-12) return 0.0;
    const double j = j1, m = M;
    if (std::abs(J - (j + 1)) < 1e-12) {
        if (m2 == 1) return std::sqrt((j + m) * (j + m + 1) / ((2 * j + 1) * (2 * j + 2)));
        if (m2 == 0) return std::sqrt((j - m + 1) * (j + m + 1) / ((2 * j + 1) * (j + 1)));
        return std::sqrt((j - m) * (j - m + 1) / ((2 * j + 1) * (2 * j + 2)));
    }
    if (std::abs(J - j) < 1e-12) {
        if (m2 == 1) return -std::sqrt((j + m) * (j - m + 1) / (2 * j * (j + 1)));
        if (m2 == 0) return m / std::sqrt(j * (j + 1));
        return std::sqrt((j - m) * (j + m + 1) / (2 * j * (j + 1)));
    }
    if (m2 == 1) return std::sqrt((j - m) * (j - m + 1) / (2 * j * (2 * j + 1)));
    if (m2 == 0) return -std::sqrt((j - m) * (j + m) / (j * (2 * j + 1)));
    return std::sqrt((j + m + 1) * (j + m) / (2 * j * (2 * j + 1)));
}

}  // namespace

TEST_CASE("HalfInt parsing") {
    CHECK(H("3/2").twice == 3);
    CHECK(H("1.5").twice == 3);
    CHECK(H("3").twice == 6);
    CHECK(H("0").twice == 0);
    CHECK(H("3/2").str() == "3/2");
    CHECK(H("2").str() == "2");
    CHECK_THROWS_AS(H("1/3"), DomainError);
    CHECK_THROWS_AS(H("abc"), DomainError);
    CHECK_THROWS_AS(H(""), DomainError);
}

TEST_CASE("spherical index range") {
    CHECK_NOTHROW(SphericalIndex(-1));
    CHECK_THROWS_AS(SphericalIndex(2), DomainError);
    CHECK_THROWS_AS(Orientation(4.0, 0.0), DomainError);
}

TEST_CASE("Clebsch-Gordan known values") {
    CHECK(clebsch_gordan(H("1/2"), H("1/2"), H("1"), H("1"), H("3/2"), H("3/2")) == doctest::Approx(1.0));
    CHECK(clebsch_gordan(H("0"), H("0"), H("1"), H("1"), H("1"), H("1")) == doctest::Approx(1.0));
    CHECK(clebsch_gordan(H("1/2"), H("-1/2"), H("1"), H("1"), H("3/2"), H("1/2")) ==
          doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK(clebsch_gordan(H("1"), H("0"), H("1"), H("0"), H("2"), H("0")) == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(clebsch_gordan(H("1"), H("0"), H("1"), H("0"), H("1"), H("0")) == doctest::Approx(0.0));
    // selection rule m1 + m2 = M
    CHECK(clebsch_gordan(H("1"), H("1"), H("1"), H("1"), H("2"), H("1")) == 0.0);
    CHECK_THROWS_AS(clebsch_gordan(H("1"), H("2"), H("1"), H("0"), H("2"), H("2")), DomainError);
}

TEST_CASE("Clebsch-Gordan against the j2 = 1 closed forms") {
    for (int tj = 1; tj <= 12; ++tj) {
        const double j = 0.5 * tj;
        for (int tJ : {tj - 2, tj, tj + 2}) {
            if (tJ < 0) continue;
            for (int tm = -tj; tm <= tj; tm += 2)
                for (int q : {-1, 0, 1}) {
                    const int tM = tm + 2 * q;
                    if (std::abs(tM) > tJ) continue;
                    const double got = clebsch_gordan(HalfInt::from_twice(tj), HalfInt::from_twice(tm),
                                                      HalfInt::integer(1), HalfInt::integer(q),
                                                      HalfInt::from_twice(tJ), HalfInt::from_twice(tM));
                    CHECK(got == doctest::Approx(cg_j2_one(j, 0.5 * tm, q, 0.5 * tJ, 0.5 * tM)).epsilon(1e-12));
                }
        }
    }
}

TEST_CASE("Clebsch-Gordan orthonormality for large Jg") {
    for (int tj : {7, 40, 200}) {
        const HalfInt j = HalfInt::from_twice(tj), one = HalfInt::integer(1), Je = j + one;
        for (int tM = -(tj + 2); tM <= tj + 2; tM += 2 * std::max(1, tj / 8)) {
            double norm = 0.0;
            for (int q : {-1, 0, 1}) {
                const int tm = tM - 2 * q;
                if (std::abs(tm) > tj) continue;
                const double c = clebsch_gordan(j, HalfInt::from_twice(tm), one, HalfInt::integer(q), Je,
                                                HalfInt::from_twice(tM));
                norm += c * c;
            }
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("spherical unit vectors are orthonormal") {
    for (int a : kSphericalValues)
        for (int b : kSphericalValues) {
            const auto ea = spherical_unit_vector(a), eb = spherical_unit_vector(b);
            cplx dot = 0.0;
            for (int i = 0; i < 3; ++i) dot += std::conj(ea[i]) * eb[i];
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-15);
        }
}

TEST_CASE("transverse projector") {
    // n along z: projector removes the q = 0 component.
    const Orientation z(0.0, 0.0);
    CHECK(std::abs(transverse_projector_component(0, 0, z)) < 1e-15);
    CHECK(std::abs(transverse_projector_component(1, 1, z) - 1.0) < 1e-15);
    // Idempotent: sum_k P_ak P_kb = P_ab
    const Orientation o(0.7, 2.1);
    for (int a : kSphericalValues)
        for (int b : kSphericalValues) {
            cplx s = 0.0;
            for (int k : kSphericalValues) s += transverse_projector_component(a, k, o) * transverse_projector_component(k, b, o);
            CHECK(std::abs(s - transverse_projector_component(a, b, o)) < 1e-14);
        }
}

TEST_CASE("configuration average") {
    CHECK(std::abs(configuration_average(-1, 1, 1, -1) - 2.0 / 15.0) < 1e-15);
    CHECK(std::abs(configuration_average(0, 0, 0, 0) - 8.0 / 15.0) < 1e-15);
    CHECK(std::abs(configuration_average(1, 0, 0, 0)) < 1e-15);
    CHECK(std::abs(oracle::quad_configuration_average(0, 0, 0, 0) - 8.0 / 15.0) < 1e-10);
    CHECK(std::abs(oracle::quad_configuration_average(1, 0, 0, 0)) < 1e-14);
    for (int r : kSphericalValues)
        for (int q : kSphericalValues)
            for (int qp : kSphericalValues)
                for (int rp : kSphericalValues)
                    CHECK(std::abs(configuration_average(r, q, qp, rp) -
                                   oracle::quad_configuration_average(r, q, qp, rp)) < 1e-10);
}
