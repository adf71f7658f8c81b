#pragma once

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "cbs/bloch.hpp"

namespace cbs {

struct StructureMatrices {
    SparseC A1;  // (A1)_ij = Tr[mu_i D_q mu'_j]
    SparseC A2;  // (A2)_ij = Tr[D†_q' mu_i mu'_j]
    CVector L1;  // Tr[mu_i D_q]/N0
    CVector L2;  // Tr[D†_q' mu_i]/N0
};

StructureMatrices structure_matrices(const OperatorBasis& basis, const DipoleComponents& dip, SphericalIndex q,
                                     SphericalIndex qprime);

// Initial values of the fluctuation regression vectors f_q and h_q' at each probe order.
struct RegressionInitials {
    double omega = 0.0;
    SphericalIndex r{-1}, rprime{-1}, q{1}, qprime{1};
    CVector f0, fplus, fminus, fpm;
    CVector h0, hplus, hminus, hpm;
};

RegressionInitials regression_initials(const BlochSystem& sys, const ElasticBlocks& elastic, SphericalIndex q,
                                       SphericalIndex qprime);

enum class BlockKind { P0, Pminus, Pplus, Ppm };

// Frequency labels:
//   P0:     both outputs at nu.
//   Pminus: probe r at omega; positive-frequency output q at nu, negative output q' at nu - omega.
//   Pplus:  probe r' at omega; negative-frequency output q' at nu, positive output q at nu - omega.
//   Ppm:    both probes at omega; both outputs at nu.
// Stored values carry the 1/(2 pi) so that integrals over nu give equal-time correlations.
struct InelasticBlockRequest {
    BlockKind kind = BlockKind::P0;
    double omega = 0.0;
    SphericalIndex r{-1}, rprime{-1};
    double nu = 0.0;
    SphericalIndex q{1}, qprime{1};
};

cplx inelastic_block(const BlochSystem& sys, const RegressionInitials& init, const InelasticBlockRequest& req);

// Evaluates blocks for fixed emission polarizations (q, q'), caching the
// per-omega initial conditions.
class BlockEvaluator {
public:
    BlockEvaluator(const BlochSystem& sys, SphericalIndex q, SphericalIndex qprime);

    const BlochSystem& system() const { return sys_; }
    SphericalIndex q() const { return q_; }
    SphericalIndex qprime() const { return qp_; }

    // Resolvent vectors that depend only on the detected frequency nu.
    struct NuContext {
        double nu = 0.0;
        CVector gf;  // G(i nu) f0
        CVector gh;  // G(-i nu) h0
        CVector lu;  // G(i nu)^T U_q'
        CVector lv;  // G(-i nu)^T V_q
    };
    NuContext context(double nu) const;

    cplx p0(double nu) const;
    cplx pminus(double omega, SphericalIndex r, const NuContext& c) const;
    cplx pplus(double omega, SphericalIndex rprime, const NuContext& c) const;
    cplx ppm(double omega, SphericalIndex r, SphericalIndex rprime, const NuContext& c) const;
    cplx pminus(double omega, SphericalIndex r, double nu) const;
    cplx pplus(double omega, SphericalIndex rprime, double nu) const;
    cplx ppm(double omega, SphericalIndex r, SphericalIndex rprime, double nu) const;
    // Integral of ppm over nu, evaluated as the equal-time correlation U_q'.f^{+-}(0).
    cplx ppm_integrated(double omega, SphericalIndex r, SphericalIndex rprime) const;
    // <D†_q' D_q> - <D†_q'><D_q> in the unprobed steady state.
    cplx fluctuation_strength() const;

    const CVector& f0() const { return f0_; }
    const CVector& h0() const { return h0_; }

    struct FirstOrder {
        CVector Q, f, h;
    };
    struct SecondOrder {
        FirstOrder minus, plus;
        CVector Q, f, h;
    };
    FirstOrder minus_order(double omega, SphericalIndex r) const;
    FirstOrder plus_order(double omega, SphericalIndex rprime) const;
    SecondOrder full_order(double omega, SphericalIndex r, SphericalIndex rprime) const;

    std::size_t cache_size() const;
    void clear_cache() const;

private:
    const BlochSystem& sys_;
    SphericalIndex q_, qp_;
    StructureMatrices sm_;
    CVector f0_, h0_;
    cplx d0_, dd0_;  // <D_q>^(0), <D†_q'>^(0)

    struct Key {
        std::uint64_t omega_bits;
        int tag;
        bool operator==(const Key& o) const { return omega_bits == o.omega_bits && tag == o.tag; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return std::hash<std::uint64_t>{}(k.omega_bits) ^ (k.tag * 0x9e3779b97f4a7c15ULL); }
    };
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Key, FirstOrder, KeyHash> cache_;

    FirstOrder first_order(const CVector& Q) const;
    FirstOrder cached(double omega, int tag, SphericalIndex pol) const;
};

}  // namespace cbs
