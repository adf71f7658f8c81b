#include "cbs/oracle.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace cbs::oracle {

namespace {

CMatrix commutator_super(const CMatrix& A) {
    const int n = static_cast<int>(A.rows());
    const CMatrix I = CMatrix::Identity(n, n);
    return CMatrix(Eigen::kroneckerProduct(I, A)) - CMatrix(Eigen::kroneckerProduct(A.transpose(), I));
}

CMatrix unvec(const CVector& v, int n) { return Eigen::Map<const CMatrix>(v.data(), n, n); }
CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

}  // namespace

Superoperators build_superoperators(const LevelScheme& scheme, const DriveParams& drive, SphericalIndex r,
                                    SphericalIndex rprime) {
    const DipoleComponents d = dipole_components(scheme);
    const int n = scheme.n_levels();
    CMatrix Pe = CMatrix::Zero(n, n);
    for (int i = scheme.n_ground(); i < n; ++i) Pe(i, i) = 1.0;
    const CMatrix H = -drive.delta * Pe - 0.5 * drive.Omega * (d.raise(drive.laser_pol) + d.lower(drive.laser_pol));
    const CMatrix I = CMatrix::Identity(n, n);

    Superoperators s;
    s.n0 = n;
    s.L0 = -kI * commutator_super(H);
    for (int q : kSphericalValues) {
        const CMatrix& D = d.lower(SphericalIndex(q));
        const CMatrix DdD = D.adjoint() * D;
        s.L0 += DriveParams::gamma * (2.0 * CMatrix(Eigen::kroneckerProduct(D.conjugate(), D)) -
                                      CMatrix(Eigen::kroneckerProduct(I, DdD)) -
                                      CMatrix(Eigen::kroneckerProduct(DdD.transpose(), I)));
    }
    s.Lminus = 0.5 * kI * commutator_super(d.raise(r));
    s.Lplus = 0.5 * kI * commutator_super(d.lower(rprime));
    return s;
}

namespace {

struct Drive {
    const Superoperators& s;
    double g, w;
    CMatrix at(double t) const {
        return s.L0 + g * std::exp(cplx(0, -w * t)) * s.Lminus + g * std::exp(cplx(0, w * t)) * s.Lplus;
    }
};

template <class X>
X rk4(const Drive& d, double t, double h, const X& x) {
    const CMatrix A0 = d.at(t), Ah = d.at(t + 0.5 * h), A1 = d.at(t + h);
    const X k1 = A0 * x;
    const X k2 = Ah * (x + 0.5 * h * k1);
    const X k3 = Ah * (x + 0.5 * h * k2);
    const X k4 = A1 * (x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

TimeDomainRun integrate_obe(const BlochSystem& sys, double g, double omega, SphericalIndex r, SphericalIndex rprime,
                            double T, double h, int record_every) {
    if (!(h > 0.0) || !(T > 0.0)) throw DomainError("time step and horizon must be positive");
    const Superoperators s = build_superoperators(sys.scheme, sys.drive, r, rprime);
    const Drive d{s, g, omega};
    const int n0 = s.n0;

    int per_period = 0;
    if (omega != 0.0) {
        const double P = 2.0 * kPi / std::abs(omega);
        per_period = std::max(8, static_cast<int>(std::ceil(P / h)));
        h = P / per_period;
        T = std::ceil(T / P) * P;
    }
    const long steps = std::lround(T / h);

    CMatrix rho = CMatrix::Zero(n0, n0);
    rho(sys.scheme.n_ground() - 1, sys.scheme.n_ground() - 1) = 1.0;
    CVector x = vec(rho);

    TimeDomainRun run;
    run.T = steps * h;
    run.h = h;
    const long window_start = per_period > 0 ? steps - per_period : steps;
    CMatrix mean = CMatrix::Zero(n0, n0), minus = mean, plus = mean;
    for (long k = 0; k < steps; ++k) {
        const double t = k * h;
        if (record_every > 0 && k % record_every == 0) {
            run.times.push_back(t);
            run.coords.push_back(sys.basis.coordinates(unvec(x, n0)));
        }
        if (k >= window_start && per_period > 0) {
            const CMatrix m = unvec(x, n0);
            mean += m;
            minus += m * std::exp(cplx(0, omega * t));
            plus += m * std::exp(cplx(0, -omega * t));
        }
        x = rk4(d, t, h, x);
    }
    if (per_period > 0) {
        run.rho_mean = mean / static_cast<double>(per_period);
        run.rho_minus = minus / static_cast<double>(per_period);
        run.rho_plus = plus / static_cast<double>(per_period);
    } else {
        run.rho_mean = unvec(x, n0);
        run.rho_minus = CMatrix::Zero(n0, n0);
        run.rho_plus = CMatrix::Zero(n0, n0);
    }
    return run;
}

namespace {

// Simpson-rule transforms int_0^T e^{i s t} c(t) dt for several s at once.
std::vector<cplx> fourier(const std::vector<cplx>& c, double h, const std::vector<double>& s) {
    std::size_t K = c.size() - 1;
    if (K % 2 == 1) --K;
    std::vector<cplx> out(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        const cplx step = std::exp(cplx(0, s[j] * h));
        cplx ph = 1.0, acc = 0.0;
        for (std::size_t m = 0; m <= K; ++m) {
            const double w = (m == 0 || m == K) ? 1.0 : (m % 2 == 1 ? 4.0 : 2.0);
            acc += w * ph * c[m];
            ph *= step;
        }
        out[j] = acc * h / 3.0;
    }
    return out;
}

struct Correlations {
    std::vector<cplx> f, h;  // harmonic-projected c_f(tau), c_h(tau)
};

// Periodic steady state and regression trajectories for probe amplitude g.
Correlations correlate(const Superoperators& s, const DipoleComponents& dip, SphericalIndex q, SphericalIndex qprime,
                       double g, double w, int harmonic, const RegressionOptions& opt, double horizon, double& h_out) {
    const int n0 = s.n0, d = n0 * n0;
    const CMatrix& Dq = dip.lower(q);
    const CMatrix& Ddq = dip.raise(qprime);
    const Drive drive{s, g, w};

    std::vector<CMatrix> step_ops;
    int n_steps = 1;
    double h = opt.step;
    if (w != 0.0) {
        n_steps = opt.steps_per_period;
        h = 2.0 * kPi / std::abs(w) / n_steps;
        const int sub = 4;
        for (int j = 0; j < n_steps; ++j) {
            CMatrix U = CMatrix::Identity(d, d);
            for (int k = 0; k < sub; ++k) U = rk4(drive, j * h + k * h / sub, h / sub, U);
            step_ops.push_back(U);
        }
    } else {
        step_ops.push_back(CMatrix((s.L0 * h).exp()));
    }
    h_out = h;

    // Periodic steady state at t = 0: fixed point of the one-period map with unit trace.
    CMatrix period = CMatrix::Identity(d, d);
    for (const auto& U : step_ops) period = U * period;
    CMatrix A = period - CMatrix::Identity(d, d);
    CVector b = CVector::Zero(d);
    A.row(0).setZero();
    for (int i = 0; i < n0; ++i) A(0, i * n0 + i) = 1.0;
    b(0) = 1.0;
    CVector rho0 = A.fullPivLu().solve(b);

    const long K = static_cast<long>(std::ceil(horizon / h));
    const int phases = w != 0.0 ? opt.phases : 1;
    const int stride = n_steps / phases;
    Correlations out;
    out.f.assign(K + 1, 0.0);
    out.h.assign(K + 1, 0.0);
    CVector rho = rho0;
    int pos = 0;
    for (int p = 0; p < phases; ++p) {
        const int start = p * stride;
        while (pos < start) rho = step_ops[pos++] * rho;
        const double t0 = start * h;
        const CMatrix R = unvec(rho, n0);
        const cplx dq = (Dq * R).trace(), ddq = (Ddq * R).trace();
        CVector xf = vec(Dq * R - dq * R);
        CVector xh = vec(R * Ddq - ddq * R);
        const cplx phase = std::exp(cplx(0, harmonic * w * t0)) / static_cast<double>(phases);
        for (long m = 0; m <= K; ++m) {
            const CMatrix Xf = unvec(xf, n0), Xh = unvec(xh, n0);
            out.f[m] += phase * (Ddq * Xf).trace();
            out.h[m] += phase * (Dq * Xh).trace();
            if (m == K) break;
            const auto& U = step_ops[(start + m) % n_steps];
            xf = U * xf;
            xh = U * xh;
        }
    }
    return out;
}

}  // namespace

std::vector<cplx> regression_spectrum(const BlochSystem& sys, const InelasticBlockRequest& req,
                                      const std::vector<double>& nu, const RegressionOptions& opt) {
    const Superoperators s = build_superoperators(sys.scheme, sys.drive, req.r, req.rprime);
    double horizon = opt.horizon;
    if (horizon <= 0.0) {
        Eigen::ComplexEigenSolver<CMatrix> es(s.L0, false);
        double slow = 1e300;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            const double re = -es.eigenvalues()(i).real();
            if (re > 1e-8) slow = std::min(slow, re);
        }
        horizon = 25.0 / slow;
    }

    int harmonic = 0;
    double w = req.omega;
    switch (req.kind) {
        case BlockKind::P0: harmonic = 0; w = 0.0; break;
        case BlockKind::Pminus: harmonic = 1; break;
        case BlockKind::Pplus: harmonic = -1; break;
        case BlockKind::Ppm: harmonic = 0; break;
    }
    if (req.kind != BlockKind::P0 && w == 0.0) throw DomainError("time-domain oracle needs a nonzero probe frequency");

    // Negative-output frequency for each requested nu.
    std::vector<double> neg(nu.size()), pos(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) {
        neg[i] = req.kind == BlockKind::Pminus ? nu[i] - w : nu[i];
        pos[i] = neg[i] + harmonic * w;
    }
    std::vector<double> fneg(neg.size());
    for (std::size_t i = 0; i < neg.size(); ++i) fneg[i] = -neg[i];

    const DipoleComponents dip = dipole_components(sys.scheme);
    auto spectrum = [&](double g) {
        double h = 0.0;
        const Correlations c = correlate(s, dip, req.q, req.qprime, g, w, harmonic, opt, horizon, h);
        const auto F = fourier(c.f, h, fneg);
        const auto H = fourier(c.h, h, pos);
        std::vector<cplx> out(nu.size());
        for (std::size_t i = 0; i < nu.size(); ++i) out[i] = (F[i] + H[i]) / (2.0 * kPi);
        return out;
    };

    if (req.kind == BlockKind::P0) return spectrum(0.0);

    const double g = opt.g;
    std::vector<cplx> result(nu.size());
    if (harmonic != 0) {
        const auto a = spectrum(g), b = spectrum(-g), c = spectrum(0.5 * g), d = spectrum(-0.5 * g);
        for (std::size_t i = 0; i < nu.size(); ++i) {
            const cplx coarse = (a[i] - b[i]) / (2.0 * g);
            const cplx fine = (c[i] - d[i]) / g;
            result[i] = (4.0 * fine - coarse) / 3.0;
        }
    } else {
        const auto z = spectrum(0.0), a = spectrum(g), c = spectrum(0.5 * g);
        for (std::size_t i = 0; i < nu.size(); ++i) {
            const cplx coarse = (a[i] - z[i]) / (g * g);
            const cplx fine = (c[i] - z[i]) / (0.25 * g * g);
            result[i] = (4.0 * fine - coarse) / 3.0;
        }
    }
    return result;
}

cplx quad_configuration_average(SphericalIndex r, SphericalIndex q, SphericalIndex qprime, SphericalIndex rprime,
                                int n_nodes) {
    if (n_nodes < 8) throw DomainError("need at least 8 quadrature nodes");
    // Gauss-Legendre nodes by Newton iteration on P_n.
    std::vector<double> x(n_nodes), wts(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n_nodes + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n_nodes; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n_nodes * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        wts[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    cplx acc = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        const double theta = std::acos(std::clamp(x[i], -1.0, 1.0));
        cplx ring = 0.0;
        for (int j = 0; j < n_nodes; ++j) {
            const Orientation o(theta, 2.0 * kPi * j / n_nodes);
            ring += transverse_projector_component(r, q, o) * transverse_projector_component(qprime, rprime, o);
        }
        acc += wts[i] * ring * (2.0 * kPi / n_nodes);
    }
    return acc / (4.0 * kPi);
}

ScalarTwoLevel::ScalarTwoLevel(double Omega, double delta) : Omega_(Omega), delta_(delta) {
    const cplx i(0.0, 1.0);
    const double g = 1.0;
    M_ << i * delta - g, 0.0, -i * Omega / 2.0,
          0.0, -i * delta - g, i * Omega / 2.0,
          -i * Omega, i * Omega, -2.0 * g;
    L_ << 0.0, 0.0, -2.0 * g;
    Dm_ << 0.0, 0.0, -i / 2.0,
           0.0, 0.0, 0.0,
           0.0, i, 0.0;
    Dp_ << 0.0, 0.0, 0.0,
           0.0, 0.0, i / 2.0,
           -i, 0.0, 0.0;
    // <Q s-> and <s+ Q> in terms of the Bloch vector.
    A1_ << 0.0, 0.0, 0.0,
           0.0, 0.0, 0.5,
           -1.0, 0.0, 0.0;
    L1_ << 0.0, 0.5, 0.0;
    A2_ << 0.0, 0.0, 0.5,
           0.0, 0.0, 0.0,
           0.0, -1.0, 0.0;
    L2_ << 0.5, 0.0, 0.0;
    U_ << 0.0, 1.0, 0.0;
    V_ << 1.0, 0.0, 0.0;
    Q0_ = -M_.inverse() * L_;
    f0_ = A1_ * Q0_ + L1_ - Q0_ * V_.dot(Q0_);
    h0_ = A2_ * Q0_ + L2_ - Q0_ * U_.dot(Q0_);
}

ScalarTwoLevel::Mat ScalarTwoLevel::G(cplx z) const { return (z * Mat::Identity() - M_).inverse(); }

ScalarTwoLevel::Vec ScalarTwoLevel::Qminus(double w) const { return G(cplx(0, -w)) * Dm_ * Q0_; }
ScalarTwoLevel::Vec ScalarTwoLevel::Qplus(double w) const { return G(cplx(0, w)) * Dp_ * Q0_; }
ScalarTwoLevel::Vec ScalarTwoLevel::Qpm(double w) const { return G(0.0) * (Dp_ * Qminus(w) + Dm_ * Qplus(w)); }

void ScalarTwoLevel::initials(const Vec& Qm, const Vec& Qp, const Vec& Q2, Vec& fm, Vec& fp, Vec& fpm, Vec& hm,
                              Vec& hp, Vec& hpm) const {
    // U_ and V_ are real unit vectors, so dot() is the plain projection.
    const cplx s0 = V_.dot(Q0_), sm = V_.dot(Qm), sp = V_.dot(Qp), s2 = V_.dot(Q2);
    const cplx t0 = U_.dot(Q0_), tm = U_.dot(Qm), tp = U_.dot(Qp), t2 = U_.dot(Q2);
    fm = A1_ * Qm - Qm * s0 - Q0_ * sm;
    fp = A1_ * Qp - Qp * s0 - Q0_ * sp;
    fpm = A1_ * Q2 - Q2 * s0 - Q0_ * s2 - Qp * sm - Qm * sp;
    hm = A2_ * Qm - Qm * t0 - Q0_ * tm;
    hp = A2_ * Qp - Qp * t0 - Q0_ * tp;
    hpm = A2_ * Q2 - Q2 * t0 - Q0_ * t2 - Qp * tm - Qm * tp;
}

cplx ScalarTwoLevel::P0(double nu) const {
    return (U_.dot(G(cplx(0, nu)) * f0_) + V_.dot(G(cplx(0, -nu)) * h0_)) / (2.0 * kPi);
}

cplx ScalarTwoLevel::Pminus(double w, double nu) const {
    Vec fm, fp, fpm, hm, hp, hpm;
    initials(Qminus(w), Qplus(w), Qpm(w), fm, fp, fpm, hm, hp, hpm);
    const Vec a = G(cplx(0, nu - w)) * (Dm_ * G(cplx(0, nu)) * f0_ + fm);
    const Vec b = G(cplx(0, -nu)) * (Dm_ * G(cplx(0, w - nu)) * h0_ + hm);
    return (U_.dot(a) + V_.dot(b)) / (2.0 * kPi);
}

cplx ScalarTwoLevel::Pplus(double w, double nu) const {
    Vec fm, fp, fpm, hm, hp, hpm;
    initials(Qminus(w), Qplus(w), Qpm(w), fm, fp, fpm, hm, hp, hpm);
    const Vec a = G(cplx(0, nu)) * (Dp_ * G(cplx(0, nu - w)) * f0_ + fp);
    const Vec b = G(cplx(0, w - nu)) * (Dp_ * G(cplx(0, -nu)) * h0_ + hp);
    return (U_.dot(a) + V_.dot(b)) / (2.0 * kPi);
}

cplx ScalarTwoLevel::Ppm(double w, double nu) const {
    Vec fm, fp, fpm, hm, hp, hpm;
    initials(Qminus(w), Qplus(w), Qpm(w), fm, fp, fpm, hm, hp, hpm);
    const Vec a_p = G(cplx(0, nu + w)) * (Dp_ * G(cplx(0, nu)) * f0_ + fp);
    const Vec a_m = G(cplx(0, nu - w)) * (Dm_ * G(cplx(0, nu)) * f0_ + fm);
    const Vec a = G(cplx(0, nu)) * (Dm_ * a_p + Dp_ * a_m + fpm);
    const Vec b_p = G(cplx(0, w - nu)) * (Dp_ * G(cplx(0, -nu)) * h0_ + hp);
    const Vec b_m = G(cplx(0, -nu - w)) * (Dm_ * G(cplx(0, -nu)) * h0_ + hm);
    const Vec b = G(cplx(0, -nu)) * (Dm_ * b_p + Dp_ * b_m + hpm);
    return (U_.dot(a) + V_.dot(b)) / (2.0 * kPi);
}

namespace {

// Composite Gauss-Legendre on [-W, W] with a substitution for the tails.
template <class F>
cplx line_integral(F f, double W) {
    static const double x5[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                 0.9061798459386640};
    static const double w5[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    const int panels = 4000;
    const double hp = 2.0 * W / panels;
    cplx acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = -W + (p + 0.5) * hp;
        for (int k = 0; k < 5; ++k) acc += 0.5 * hp * w5[k] * f(c + 0.5 * hp * x5[k]);
    }
    // x = +-W/t, t in (0, 1]
    const int tp = 200;
    for (int p = 0; p < tp; ++p) {
        const double c = (p + 0.5) / tp;
        for (int k = 0; k < 5; ++k) {
            const double t = c + 0.5 / tp * x5[k];
            const double jac = W / (t * t);
            acc += 0.5 / tp * w5[k] * jac * (f(W / t) + f(-W / t));
        }
    }
    return acc;
}

}  // namespace

cplx ScalarTwoLevel::ladder_inelastic_a2b5(double nu) const {
    const double W = std::hypot(Omega_, delta_) + 30.0;
    return line_integral([&](double w) { return P0(w) * Ppm(w, nu); }, W);
}

cplx ScalarTwoLevel::fig_diagram() const {
    const double W = std::hypot(Omega_, delta_) + 30.0;
    const cplx sp0 = U_.dot(Q0_);
    return line_integral([&](double w) { return sp0 * V_.dot(Qplus(-w)) * Pminus(w, 0.0); }, W);
}

}  // namespace cbs::oracle
