#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cbs/regression.hpp"

// Brute-force reference paths used to verify the resolvent pipeline.
namespace cbs::oracle {

// Schrodinger-picture generators acting on vec(rho) (column-major):
// d vec(rho)/dt = (L0 + g e^{-i w t} Lminus + g* e^{i w t} Lplus) vec(rho).
struct Superoperators {
    int n0 = 0;
    CMatrix L0, Lminus, Lplus;
};

Superoperators build_superoperators(const LevelScheme& scheme, const DriveParams& drive, SphericalIndex r,
                                    SphericalIndex rprime);

struct TimeDomainRun {
    double T = 0.0, h = 0.0;
    std::vector<double> times;
    std::vector<CVector> coords;  // Bloch coordinates <Q(t)>
    // Harmonic content of rho over the last probe period: rho ~ mean + e^{-iwt} minus + e^{iwt} plus.
    CMatrix rho_mean, rho_minus, rho_plus;
};

// RK4 integration from the stretched ground state |Jg Jg>; T is rounded up to whole probe periods.
TimeDomainRun integrate_obe(const BlochSystem& sys, double g, double omega, SphericalIndex r, SphericalIndex rprime,
                            double T, double h, int record_every = 0);

struct RegressionOptions {
    double g = 0.01;
    int steps_per_period = 128;
    int phases = 16;
    double step = 0.025;     // time step when no probe is present
    double horizon = 0.0;    // correlation window; 0 selects 25 / (slowest decay rate)
};

// Time-domain evaluation of an inelastic block on a nu grid. The regression
// vectors are evolved with the full time-dependent master equation, projected
// on the probe harmonic, Fourier transformed and differentiated in g.
std::vector<cplx> regression_spectrum(const BlochSystem& sys, const InelasticBlockRequest& req,
                                      const std::vector<double>& nu, const RegressionOptions& opt = {});

// Product Gauss-Legendre (cos theta) x trapezoid (phi) quadrature.
cplx quad_configuration_average(SphericalIndex r, SphericalIndex q, SphericalIndex qprime, SphericalIndex rprime,
                                int n_nodes = 64);

// Two-level atom in the (sigma-, sigma+, sigma_z) Bloch representation,
// written out by hand.
class ScalarTwoLevel {
public:
    ScalarTwoLevel(double Omega, double delta);

    using Vec = Eigen::Vector3cd;
    using Mat = Eigen::Matrix3cd;

    const Mat& M() const { return M_; }
    const Vec& steady() const { return Q0_; }
    cplx sigma_minus() const { return Q0_(0); }
    double excited_population() const { return 0.5 * (1.0 + Q0_(2).real()); }

    Vec Qminus(double w) const;
    Vec Qplus(double w) const;
    Vec Qpm(double w) const;

    // Same frequency labels and 1/(2 pi) convention as the vector blocks.
    cplx P0(double nu) const;
    cplx Pminus(double w, double nu) const;
    cplx Pplus(double w, double nu) const;
    cplx Ppm(double w, double nu) const;

    // Double-scattering pieces for identical polarizations everywhere.
    cplx ladder_inelastic_a2b5(double nu) const;
    cplx fig_diagram() const;  // <s+>0 <s-(-w)>(+) P(-)(w, 0) integrated over w

private:
    double Omega_, delta_;
    Mat M_, Dm_, Dp_, A1_, A2_;
    Vec L_, L1_, L2_, U_, V_, Q0_, f0_, h0_;
    Mat G(cplx z) const;
    void initials(const Vec& Qm, const Vec& Qp, const Vec& Qpm, Vec& fm, Vec& fp, Vec& fpm, Vec& hm, Vec& hp,
                  Vec& hpm) const;
};

}  // namespace cbs::oracle
