// dissipators.hpp — Born–Markov dissipator coefficients.
//
// In the normal-mode basis the generator is characterized by two n x n
// coefficient matrices Lambda^+ (gain) and Lambda^- (loss). Their index
// convention follows the master equation
//
//   d rho/dt = i[rho, H]
//            + sum_ij (Lm_ij / 2) (2 A_i rho A_j^dag - {A_j^dag A_i, rho})
//            + sum_ij (Lp_ij / 2) (2 A_i^dag rho A_j - {A_j A_i^dag, rho})
//
// with Lp_ij = sum_baths (gamma/2) U_i,s U_j,s^* [N(eps_i) + N(eps_j)] and the
// loss matrix defined with SWAPPED indices: Lm_ji carries the same U_i,s
// U_j,s^* factor with [N(eps_i) + N(eps_j) + 2]. A silent transpose here flips
// gain and loss cross terms, so the convention is pinned by tests.

#pragma once

#include <cmath>
#include <string>

#include "neqsteady/model.hpp"

namespace neqsteady {

// Planck occupation N = 1/(exp(omega/T) - 1), via expm1 so that the
// omega << T regime keeps full precision.
inline double planck_occupation(double omega, double temperature) {
    if (!(omega > 0.0) || !(temperature > 0.0)) {
        throw DomainError("planck_occupation: omega and temperature must be positive");
    }
    return 1.0 / std::expm1(omega / temperature);
}

// Gain/loss coefficient matrices. Lambda^+ is Hermitian; Lambda^- equals the
// conjugate of the matrix built with its two indices swapped. `rwa` records
// that all inter-mode (i != j) entries were zeroed after construction.
struct DissipatorSet {
    CMatrix lambda_plus;
    CMatrix lambda_minus;
    bool rwa = false;
};

inline DissipatorSet build_dissipators(const NormalModeBasis& basis, const SystemSpec& spec,
                                       bool rwa = false) {
    spec.validate();
    const int n = basis.mode_count();
    if (n != spec.mode_count()) {
        throw InvalidSpecError("build_dissipators: basis and spec mode counts differ");
    }
    const CMatrix& u = basis.transform;
    const RVector& eps = basis.eigenfrequencies;

    DissipatorSet out;
    out.lambda_plus = CMatrix::Zero(n, n);
    out.lambda_minus = CMatrix::Zero(n, n);
    for (const auto& bath : spec.baths) {
        const int s = bath.mode;
        for (int i = 0; i < n; ++i) {
            const double ni = planck_occupation(eps(i), bath.temperature);
            for (int j = 0; j < n; ++j) {
                const double nj = planck_occupation(eps(j), bath.temperature);
                const Complex w = 0.5 * bath.rate * u(i, s) * std::conj(u(j, s));
                out.lambda_plus(i, j) += w * (ni + nj);
                out.lambda_minus(j, i) += w * (ni + nj + 2.0);
            }
        }
    }
    if (rwa) {
        const CVector keep_plus = out.lambda_plus.diagonal();
        const CVector keep_minus = out.lambda_minus.diagonal();
        out.lambda_plus = keep_plus.asDiagonal();
        out.lambda_minus = keep_minus.asDiagonal();
        out.rwa = true;
    }
    return out;
}

// Local-mode transition rates. Rows are meaningful only for bath-attached
// local modes sigma; all other rows are zero.
struct LocalRates {
    CMatrix gamma_plus;
    CMatrix gamma_minus;
    std::vector<bool> has_bath;
};

inline LocalRates local_rates(const NormalModeBasis& basis, const SystemSpec& spec) {
    spec.validate();
    const int n = basis.mode_count();
    if (n != spec.mode_count()) {
        throw InvalidSpecError("local_rates: basis and spec mode counts differ");
    }
    const CMatrix& u = basis.transform;
    const RVector& eps = basis.eigenfrequencies;

    LocalRates out;
    out.gamma_plus = CMatrix::Zero(n, n);
    out.gamma_minus = CMatrix::Zero(n, n);
    out.has_bath.assign(n, false);
    for (const auto& bath : spec.baths) {
        const int s = bath.mode;
        out.has_bath[s] = true;
        for (int m = 0; m < n; ++m) {
            Complex gp = 0.0;
            Complex gm = 0.0;
            for (int i = 0; i < n; ++i) {
                const double ni = planck_occupation(eps(i), bath.temperature);
                gp += 0.5 * bath.rate * std::conj(u(i, s)) * u(i, m) * ni;
                gm += 0.5 * bath.rate * u(i, s) * std::conj(u(i, m)) * (ni + 1.0);
            }
            out.gamma_plus(s, m) = gp;
            out.gamma_minus(s, m) = gm;
        }
    }
    return out;
}

// Collect the local-mode master equation into the same Lambda form as the
// normal-mode one: the bath sums plus their Hermitian-conjugate partners give
// Lt_pq = gold_pq [p is a bath site] + conj(gold_qp) [q is a bath site].
// These equal U^T Lambda U^* entrywise, which is the testable content of the
// local-mode rewriting of the master equation.
struct LocalDissipators {
    CMatrix lambda_plus;
    CMatrix lambda_minus;
};

inline LocalDissipators local_lambda_matrices(const LocalRates& rates) {
    const Eigen::Index n = rates.gamma_plus.rows();
    LocalDissipators out;
    out.lambda_plus = CMatrix::Zero(n, n);
    out.lambda_minus = CMatrix::Zero(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) {
            if (rates.has_bath[static_cast<std::size_t>(p)]) {
                out.lambda_plus(p, q) += rates.gamma_plus(p, q);
                out.lambda_minus(p, q) += rates.gamma_minus(p, q);
            }
            if (rates.has_bath[static_cast<std::size_t>(q)]) {
                out.lambda_plus(p, q) += std::conj(rates.gamma_plus(q, p));
                out.lambda_minus(p, q) += std::conj(rates.gamma_minus(q, p));
            }
        }
    }
    return out;
}

} // namespace neqsteady
