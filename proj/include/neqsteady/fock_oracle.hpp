// fock_oracle.hpp — Brute-force validator: the master equation integrated as
// a dense density matrix on a truncated product Fock space.
//
// This path shares no code with the Gaussian phase-space solver beyond the
// dissipator coefficients themselves, so agreement between the two certifies
// the solver. The generator conserves the difference of row and column total
// excitation numbers, so a state that starts block-diagonal over total-
// excitation sectors (the vacuum in particular) stays block-diagonal; the
// relaxation loop exploits that structure, which is exact, not approximate.

#pragma once

#include <vector>

#include "neqsteady/phase_space.hpp"

namespace neqsteady {

// Truncation and integration controls for a relaxation run.
struct OracleConfig {
    std::vector<int> cutoffs; // per-mode maximum occupancy, each >= 4
    double dt = 0.0;          // RK4 step; 0 selects 0.1 / max(eps)
    double t_final = 400.0;
    double convergence_tol = 1e-7; // max-norm of d rho/dt for early stop
};

// Enumeration of the truncated product Fock space, grouped by total
// excitation number.
class FockBasis {
public:
    explicit FockBasis(std::vector<int> cutoffs);

    int mode_count() const { return static_cast<int>(cutoffs_.size()); }
    Eigen::Index dimension() const { return dimension_; }
    const std::vector<int>& cutoffs() const { return cutoffs_; }

    int occupancy(Eigen::Index state, int mode) const {
        return occupancy_[static_cast<std::size_t>(state)][static_cast<std::size_t>(mode)];
    }
    int total_excitation(Eigen::Index state) const {
        return total_[static_cast<std::size_t>(state)];
    }

    int sector_count() const { return static_cast<int>(sectors_.size()); }
    const std::vector<Eigen::Index>& sector(int n) const {
        return sectors_[static_cast<std::size_t>(n)];
    }

    // Dense annihilation operator of one local mode on the product space.
    CMatrix annihilation(int mode) const;

private:
    std::vector<int> cutoffs_;
    Eigen::Index dimension_ = 0;
    std::vector<std::vector<int>> occupancy_;
    std::vector<int> total_;
    std::vector<std::vector<Eigen::Index>> sectors_;
};

// Dense density matrix plus its truncation bookkeeping.
struct FockState {
    std::vector<int> cutoffs;
    CMatrix rho;

    double trace_drift() const { return std::abs(rho.trace().real() - 1.0); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;
};

inline FockState vacuum_state(const FockBasis& basis) {
    FockState s;
    s.cutoffs = basis.cutoffs();
    s.rho = CMatrix::Zero(basis.dimension(), basis.dimension());
    s.rho(0, 0) = 1.0;
    return s;
}

// Product of single-mode thermal states with the given occupations (used as
// an oracle fixture; exact up to truncation).
FockState thermal_product_state(const FockBasis& basis, const std::vector<double>& occupations);

// Master-equation right-hand side with precomputed operator combinations.
// `mode_transform` C defines the jump modes B_i = sum_n C_in a_n (the normal
// basis uses C = U, the local form C = identity), `omega_qform` the Hermitian
// quadratic form of the Hamiltonian in the B operators, and lambda_plus /
// lambda_minus the gain/loss coefficients in the Lambda index convention.
class Liouvillian {
public:
    Liouvillian(const FockBasis& basis, const CMatrix& mode_transform, const CMatrix& omega_qform,
                const CMatrix& lambda_plus, const CMatrix& lambda_minus);

    static Liouvillian normal_form(const FockBasis& basis, const NormalModeBasis& modes,
                                   const DissipatorSet& diss);
    static Liouvillian local_form(const FockBasis& basis, const NormalModeBasis& modes,
                                  const LocalRates& rates);

    const FockBasis& basis() const { return *basis_; }

    // Gershgorin bound on the eigenfrequencies; used to pick the RK4 step.
    double frequency_scale() const { return frequency_scale_; }

    // d rho / dt, dense.
    CMatrix apply(const CMatrix& rho) const;

    // Sector-restricted application for block-diagonal states; exact whenever
    // the state is block-diagonal over total-excitation sectors.
    std::vector<CMatrix> apply_blocked(const std::vector<CMatrix>& blocks) const;

    std::vector<CMatrix> to_blocks(const CMatrix& rho) const;
    CMatrix from_blocks(const std::vector<CMatrix>& blocks) const;
    double off_sector_mass(const CMatrix& rho) const;

private:
    const FockBasis* basis_;
    int n_modes_;
    double frequency_scale_ = 1.0;
    CMatrix w_eff_;                          // -iH - (K^- + K^+)/2
    std::vector<CMatrix> jump_lower_;        // B_i
    std::vector<CMatrix> jump_raise_;        // B_i^dag
    std::vector<CMatrix> gain_partner_;      // G^+_i = sum_j Lp_ij B_j
    std::vector<CMatrix> loss_partner_;      // G^-_i = sum_j Lm_ij B_j^dag
    // sector-restricted copies
    std::vector<CMatrix> w_blocks_;
    std::vector<std::vector<CMatrix>> lower_blocks_;   // [i][N]: sector N -> N-1
    std::vector<std::vector<CMatrix>> raise_blocks_;   // [i][N]: sector N -> N+1
    std::vector<std::vector<CMatrix>> loss_partner_blocks_; // [i][N]: rows N, cols N-1
    std::vector<std::vector<CMatrix>> gain_partner_blocks_; // [i][N]: rows N, cols N+1
};

// Convenience wrapper matching the operation contract: build the
// normal-form Liouvillian and apply it once.
CMatrix liouvillian_apply(const SystemSpec& spec, const NormalModeBasis& modes,
                          const DissipatorSet& diss, const FockState& state);

struct RelaxResult {
    FockState state;
    double final_time = 0.0;
    long steps = 0;
    double final_derivative_norm = 0.0;
    bool converged = false;
};

// RK4 relaxation from `initial` (vacuum when omitted) until t_final or until
// the derivative max-norm falls below convergence_tol. The trace is
// renormalized every step and Hermiticity restored every 100 steps. Throws
// NotConvergedError when t_final is reached with the derivative norm still
// above 10x the tolerance.
RelaxResult relax_to_steady(const Liouvillian& liouville, const OracleConfig& config,
                            const FockState* initial = nullptr);

// Reduced density matrix of one mode (partial trace over all others).
CMatrix reduced_marginal_matrix(const FockState& state, int mode);

// Diagonal populations p_n of the reduced marginal.
RVector reduced_marginal(const FockState& state, int mode);

// <a_mode^dag a_mode> in the given state.
double occupation(const FockState& state, int mode);

} // namespace neqsteady
