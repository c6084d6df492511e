// linalg.hpp — Dense complex-matrix kernel: Hermitian eigendecomposition with a
// deterministic row-eigenvector convention, pivoted linear solves, and
// Kronecker products. Everything else in the library is built on these three.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "neqsteady/errors.hpp"

namespace neqsteady {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr int kMaxKernelDim = 64;

inline bool all_finite(const CMatrix& m) {
    return m.allFinite();
}

// Result of hermitian_eigen. `transform` holds the paper-convention U with
// eigenvectors as rows: U * H * U^dag = diag(eigenvalues), ascending.
struct HermitianEigen {
    RVector eigenvalues;
    CMatrix transform;
};

// Diagonalize a Hermitian matrix. The row phases are fixed so that each
// row's largest-magnitude entry (first such index on ties) is real positive,
// which makes the output deterministic.
inline HermitianEigen hermitian_eigen(const CMatrix& h, double tol = kHermitianTol) {
    if (h.rows() != h.cols()) {
        throw InvalidSpecError("hermitian_eigen: matrix must be square");
    }
    if (h.rows() == 0 || h.rows() > kMaxKernelDim) {
        throw InvalidSpecError("hermitian_eigen: dimension must be in [1, 64]");
    }
    if (!all_finite(h)) {
        throw InvalidSpecError("hermitian_eigen: non-finite entries");
    }
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol) {
        throw NotHermitianError("hermitian_eigen: max asymmetry " + std::to_string(asym) +
                                " exceeds tolerance " + std::to_string(tol));
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> solver((h + h.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success) {
        throw NoConvergenceError("hermitian_eigen: iteration did not converge");
    }

    HermitianEigen out;
    out.eigenvalues = solver.eigenvalues();
    out.transform = solver.eigenvectors().adjoint(); // rows are eigenvectors

    for (Eigen::Index i = 0; i < out.transform.rows(); ++i) {
        Eigen::Index k = 0;
        double best = -1.0;
        for (Eigen::Index j = 0; j < out.transform.cols(); ++j) {
            const double a = std::abs(out.transform(i, j));
            if (a > best) {
                best = a;
                k = j;
            }
        }
        if (best > 0.0) {
            out.transform.row(i) *= std::conj(out.transform(i, k)) / best;
        }
    }
    return out;
}

// Solve A x = b by partially pivoted LU. Throws SingularError when a pivot
// falls below 1e-14 times the max-norm of A; upstream this signals an
// undamped (indeterminate) steady state.
inline CMatrix lu_solve(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != a.cols()) {
        throw InvalidSpecError("lu_solve: matrix must be square");
    }
    if (a.rows() != b.rows()) {
        throw InvalidSpecError("lu_solve: right-hand side row count mismatch");
    }
    const double scale = a.cwiseAbs().maxCoeff();
    Eigen::PartialPivLU<CMatrix> lu(a);
    const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (pivot_min < 1e-14 * scale || scale == 0.0) {
        throw SingularError("lu_solve: pivot " + std::to_string(pivot_min) +
                            " below 1e-14 * max|A| = " + std::to_string(1e-14 * scale));
    }
    return lu.solve(b);
}

// Kronecker product, (A ⊗ B)[(i*p+k),(j*q+l)] = A[i,j] * B[k,l].
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace neqsteady
