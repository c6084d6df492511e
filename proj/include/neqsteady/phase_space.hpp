// phase_space.hpp — Characteristic-function phase space of the Gaussian
// steady-state problem.
//
// The Wigner characteristic function chi(z) of the network evolves by
//
//   d_t chi + z . T . (d chi / dz^T) = z . D . z^T chi,
//
// where z = (mu_1..mu_n, mu_1^*..mu_n^*) is a row vector of normal-mode
// variables. A Gaussian ansatz chi = exp(z M z^T) with symmetric M turns the
// stationary condition into the Lyapunov-type equation T M + M T^T = D, which
// is solved exactly by Kronecker vectorization. Occupations and effective
// temperatures are read off M.

#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "neqsteady/dissipators.hpp"

namespace neqsteady {

// Drift matrix T = blockdiag(T^-, T^+) and diffusion matrix D with P on the
// anti-diagonal blocks, both 2n x 2n.
struct DriftDiffusion {
    CMatrix drift;
    CMatrix diffusion;

    int mode_count() const { return static_cast<int>(drift.rows()) / 2; }
};

// Generic assembly for a (not necessarily diagonal) Hermitian frequency
// matrix. In the normal basis omega_qform = diag(eps) and the blocks reduce
// to the familiar
//   T^-_ij = 1/2 (Lm_ij - Lp_ji) - i eps_i delta_ij,
//   T^+_ij = 1/2 (Lm_ji - Lp_ij) + i eps_i delta_ij,
//   P_ij   = -1/4 (Lm_ij + Lp_ji).
// Conjugating the normal-basis matrices with blockdiag(U, U^*) reproduces
// exactly this assembly evaluated on the local-basis inputs, which is how the
// local/normal equivalence is tested.
inline DriftDiffusion build_drift_diffusion_from(const CMatrix& omega_qform,
                                                 const CMatrix& lambda_plus,
                                                 const CMatrix& lambda_minus) {
    const Eigen::Index n = omega_qform.rows();
    if (lambda_plus.rows() != n || lambda_minus.rows() != n) {
        throw InvalidSpecError("build_drift_diffusion: dimension mismatch");
    }
    const Complex im(0.0, 1.0);
    CMatrix t_minus = 0.5 * (lambda_minus - lambda_plus.transpose()) - im * omega_qform.transpose();
    CMatrix t_plus = 0.5 * (lambda_minus.transpose() - lambda_plus) + im * omega_qform;
    CMatrix p = -0.25 * (lambda_minus + lambda_plus.transpose());

    DriftDiffusion dd;
    dd.drift = CMatrix::Zero(2 * n, 2 * n);
    dd.drift.topLeftCorner(n, n) = t_minus;
    dd.drift.bottomRightCorner(n, n) = t_plus;
    dd.diffusion = CMatrix::Zero(2 * n, 2 * n);
    dd.diffusion.topRightCorner(n, n) = p;
    dd.diffusion.bottomLeftCorner(n, n) = p.transpose();
    return dd;
}

inline DriftDiffusion build_drift_diffusion(const NormalModeBasis& basis,
                                            const DissipatorSet& diss) {
    const Eigen::Index n = basis.eigenfrequencies.size();
    CMatrix eps = CMatrix::Zero(n, n);
    eps.diagonal() = basis.eigenfrequencies.cast<Complex>();
    return build_drift_diffusion_from(eps, diss.lambda_plus, diss.lambda_minus);
}

enum class BasisTag { Normal, Local };

// Symmetric quadratic form M of chi = exp(z M z^T); only the symmetric part
// is meaningful, so construction symmetrizes.
struct QuadraticForm {
    CMatrix matrix;
    BasisTag basis = BasisTag::Normal;
    double solve_residual = 0.0;

    QuadraticForm() = default;
    QuadraticForm(CMatrix m, BasisTag tag, double residual = 0.0)
        : matrix(((m + m.transpose()) / 2.0).eval()), basis(tag), solve_residual(residual) {}
};

// chi of the joint vacuum: M has -1/4 on both mu_i mu_i^* positions.
inline QuadraticForm vacuum_form(int n, BasisTag tag = BasisTag::Normal) {
    CMatrix m = CMatrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        m(i, n + i) = -0.25;
        m(n + i, i) = -0.25;
    }
    return {m, tag};
}

inline double lyapunov_residual(const DriftDiffusion& dd, const CMatrix& m) {
    return (dd.drift * m + m * dd.drift.transpose() - dd.diffusion).cwiseAbs().maxCoeff();
}

// Unique symmetric solution of T M + M T^T = D via the (2n)^2 linear system
// (I ⊗ T + T ⊗ I) vec(M) = vec(D) in column-major vec convention. A singular
// system means some pair of drift eigenvalues sums to zero, i.e. a normal
// mode with no damping path.
inline QuadraticForm solve_steady(const DriftDiffusion& dd) {
    const Eigen::Index m2 = dd.drift.rows();
    const CMatrix eye = CMatrix::Identity(m2, m2);
    CMatrix system = kron(eye, dd.drift) + kron(dd.drift, eye);
    CMatrix rhs = dd.diffusion.reshaped(m2 * m2, 1);
    CMatrix solution;
    try {
        solution = lu_solve(system, rhs);
    } catch (const SingularError&) {
        throw UndampedModeError("solve_steady: undamped normal mode (singular stationary system)");
    }
    CMatrix m = solution.reshaped(m2, m2);
    QuadraticForm out(std::move(m), BasisTag::Normal);
    out.solve_residual = lyapunov_residual(dd, out.matrix);
    return out;
}

// Integrate dM/dt = D - (T M + M T^T) with classic fixed-step RK4. The
// steady solution is an exact fixed point of the RK4 map, so convergence to
// it is limited only by the contraction rate, not by step accuracy.
inline QuadraticForm evolve_transient(const DriftDiffusion& dd, const QuadraticForm& m0,
                                      double t_final, double dt) {
    if (!(t_final >= 0.0) || !(dt > 0.0)) {
        throw InvalidSpecError("evolve_transient: need t_final >= 0 and dt > 0");
    }
    const CMatrix& t = dd.drift;
    const CMatrix& d = dd.diffusion;
    auto rhs = [&](const CMatrix& m) -> CMatrix { return d - t * m - m * t.transpose(); };

    CMatrix m = m0.matrix;
    double time = 0.0;
    while (time < t_final) {
        const double h = std::min(dt, t_final - time);
        const CMatrix k1 = rhs(m);
        const CMatrix k2 = rhs(m + 0.5 * h * k1);
        const CMatrix k3 = rhs(m + 0.5 * h * k2);
        const CMatrix k4 = rhs(m + h * k3);
        m += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        time += h;
        if (m.cwiseAbs().maxCoeff() > 1e12) {
            throw StepTooLargeError("evolve_transient: entries exceed 1e12 at t = " +
                                    std::to_string(time) + "; reduce dt");
        }
    }
    return {std::move(m), m0.basis, lyapunov_residual(dd, m)};
}

// Effective temperature of a thermal occupation, omega / ln(1 + 1/N).
inline double effective_temperature(double omega, double occupation) {
    if (!(omega > 0.0)) {
        throw DomainError("effective_temperature: omega must be positive");
    }
    if (!(occupation > 0.0)) {
        throw DomainError("effective_temperature: occupation must be positive");
    }
    return omega / std::log1p(1.0 / occupation);
}

// Coordinate change from normal-mode variables mu = U kappa to local-mode
// variables: z^T = blockdiag(U, U^*) zeta^T, hence M_local = W^T M W with
// W = blockdiag(U, U^*).
inline QuadraticForm to_local_form(const QuadraticForm& m, const NormalModeBasis& basis) {
    const Eigen::Index n = basis.transform.rows();
    CMatrix w = CMatrix::Zero(2 * n, 2 * n);
    w.topLeftCorner(n, n) = basis.transform;
    w.bottomRightCorner(n, n) = basis.transform.conjugate();
    return {(w.transpose() * m.matrix * w).eval(), BasisTag::Local, m.solve_residual};
}

// Occupations encoded in a quadratic form: N_i = -(M_{i,n+i} + M_{n+i,i}) - 1/2.
inline RVector occupations_from_form(const QuadraticForm& m) {
    const Eigen::Index n = m.matrix.rows() / 2;
    RVector occ(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        occ(i) = -(m.matrix(i, n + i) + m.matrix(n + i, i)).real() - 0.5;
    }
    return occ;
}

// Steady-state summary: normal and local occupations, local effective
// temperatures, and the solver diagnostics.
struct SteadyReport {
    RVector normal_occupations;
    RVector local_occupations;
    RVector effective_temperatures;
    double anomalous_residual = 0.0;
    double solve_residual = 0.0;
};

inline SteadyReport extract_report(const QuadraticForm& m, const NormalModeBasis& basis,
                                   const SystemSpec& spec) {
    if (m.basis != BasisTag::Normal) {
        throw InvalidSpecError("extract_report: expected a normal-basis quadratic form");
    }
    const Eigen::Index n = basis.eigenfrequencies.size();

    SteadyReport report;
    report.solve_residual = m.solve_residual;
    report.normal_occupations = occupations_from_form(m);
    report.local_occupations = occupations_from_form(to_local_form(m, basis));
    report.anomalous_residual =
        std::max(m.matrix.topLeftCorner(n, n).cwiseAbs().maxCoeff(),
                 m.matrix.bottomRightCorner(n, n).cwiseAbs().maxCoeff());

    for (Eigen::Index i = 0; i < n; ++i) {
        const double worst = std::min(report.normal_occupations.minCoeff(),
                                      report.local_occupations.minCoeff());
        if (worst < -1e-6) {
            throw NegativeOccupationError("extract_report: occupation " + std::to_string(worst) +
                                          " below -1e-6; generator or solve is invalid");
        }
    }

    report.effective_temperatures.resize(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        const double occ = report.local_occupations(s);
        report.effective_temperatures(s) =
            occ > 0.0 ? effective_temperature(spec.mode_frequencies[static_cast<std::size_t>(s)], occ)
                      : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

} // namespace neqsteady
