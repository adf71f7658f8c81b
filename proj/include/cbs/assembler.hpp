#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cbs/quadrature.hpp"
#include "cbs/regression.hpp"

namespace cbs {

struct ChannelConfig {
    SphericalIndex pump_pol{1};
    SphericalIndex detect_pol{-1};  // q_D
    SphericalIndex q{1}, qprime{1};  // emitted toward the partner atom
    SphericalIndex r{-1}, rprime{-1};  // received from the partner atom

    // Helicity-preserving channel under a sigma+ pump.
    static ChannelConfig hh() { return ChannelConfig{}; }
    std::string name() const;
    friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

enum class DiagramKind { ladder, crossed };
enum class Component { elastic, inelastic };
enum class BlockLabel { a1, a2, b1, b2, b3, b4, b5, c1, c2, c3, d1, d2, d3 };

std::string label_name(BlockLabel b);

struct DiagramContribution {
    DiagramKind kind = DiagramKind::ladder;
    Component component = Component::elastic;
    BlockLabel left = BlockLabel::a1;
    BlockLabel right = BlockLabel::b1;
    cplx weight = 1.0;
    bool needs_omega_integral = false;

    std::string name() const;
};

// All combinations allowed by the combination rules (forbidden (c2)(d2) never appears).
std::vector<DiagramContribution> enumerate_contributions(const ChannelConfig& channel);

struct ModelParams {
    HalfInt Jg;
    LevelMode mode = LevelMode::full;
    double Omega = 1.0;
    double delta = 0.0;
    ChannelConfig channel = ChannelConfig::hh();
    QuadOptions quad{};
    int threads = 1;
};

struct QuadDiagnostics {
    long evals = 0;
    int unconverged = 0;
    double max_error_estimate = 0.0;
};

// One atom species under one drive, with all block evaluators for a channel.
//
// Reported intensities drop the common coupling constant and the geometric
// prefactor; the fixed scale kIntensityScale matches the analytic elastic
// normalization.
class CBSModel {
public:
    static constexpr double kIntensityScale = 8.0;

    explicit CBSModel(const ModelParams& p);
    CBSModel(std::shared_ptr<const BlochSystem> sys, const ModelParams& p);

    const BlochSystem& system() const { return *sys_; }
    const ModelParams& params() const { return p_; }
    double geometric_weight() const { return weight_.real(); }

    // Contributions whose blocks are not identically zero (numerical test at three frequencies).
    const std::vector<DiagramContribution>& active_contributions() const { return active_; }
    std::vector<DiagramContribution> prune(double threshold) const;
    bool block_vanishes(BlockLabel b, double threshold = 1e-13) const;

    // Raw value (weight included, no intensity scale) of one contribution.
    // Elastic: coefficient of delta(nu). Inelastic: spectral density at nu.
    cplx evaluate(const DiagramContribution& c, double nu, QuadDiagnostics* diag = nullptr) const;

    double ladder_elastic() const;
    double crossed_elastic() const;
    double ladder_inelastic(double nu, QuadDiagnostics* diag = nullptr) const;
    double crossed_inelastic(double nu, QuadDiagnostics* diag = nullptr, double* imag = nullptr) const;
    double ladder_inelastic_total(QuadDiagnostics* diag = nullptr) const;
    double crossed_inelastic_total(QuadDiagnostics* diag = nullptr) const;

    // Elementary pieces, exposed for tests.
    cplx a1() const;
    cplx a2(double w) const;
    cplx b_elastic(BlockLabel b, double w) const;
    cplx b5(double w, double nu) const;
    cplx c_elastic(BlockLabel c, double w) const;
    cplx c3(double w, double nu) const;
    cplx d_elastic(BlockLabel d, double w) const;
    cplx d3(double w, double nu) const;

    // Breakpoints for integrals whose integrand resonates at shift +- feature centers.
    std::vector<double> breakpoints(const std::vector<double>& shifts) const;
    double outer_width() const;

private:
    std::shared_ptr<const BlochSystem> sys_;
    ModelParams p_;
    QuadOptions quad_;
    cplx weight_;
    std::unique_ptr<BlockEvaluator> atom1_, ladder2_, crossC_, crossD_;
    std::vector<double> centers_;
    std::vector<double> slow_widths_;  // smallest |Re lambda| per center
    std::vector<DiagramContribution> active_;

    // Inner omega integral of (c3)(d3) at detected frequency nu, without weight.
    cplx crossed_inner(double nu, QuadDiagnostics* diag) const;
    cplx integrate(const std::function<cplx(double)>& f, const std::vector<double>& shifts,
                   QuadDiagnostics* diag) const;
    void init();
};

struct SpectrumResult {
    std::vector<double> grid;
    std::vector<double> ladder_in, crossed_in;
    double L_el = 0.0, C_el = 0.0, L_in = 0.0, C_in = 0.0;
    double alpha = 1.0;
    double max_crossed_imag = 0.0;
    QuadDiagnostics diag;
};

// Spectra on the grid plus integrated totals and the enhancement factor.
SpectrumResult assemble_spectra(const ModelParams& p, const std::vector<double>& grid, bool with_crossed = true);
SpectrumResult assemble_spectra(const CBSModel& model, const std::vector<double>& grid, bool with_crossed = true);
// Totals only (no grid).
SpectrumResult assemble_totals(const CBSModel& model);

// Default grid: [-(Omega~ + 10), Omega~ + 10] with base step, refined near zero for Jg >= 1.
std::vector<double> default_grid(HalfInt Jg, double Omega, double delta, double step = 0.02);

// Deterministic data-parallel loop; each index is evaluated exactly once.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace cbs
