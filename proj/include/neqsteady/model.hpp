// model.hpp — Oscillator-network description and its normal-mode basis.
//
// Units: the mean oscillator frequency sets the scale (frequencies, coupling
// strengths, bath rates and temperatures are all quoted in the same unit),
// with hbar = k_B = 1.

#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "neqsteady/linalg.hpp"

namespace neqsteady {

// A bilinear excitation-conserving coupling g (a_m^dag a_n + h.c.).
struct Coupling {
    int m = 0;
    int n = 0;
    double g = 0.0;
};

// A thermal bath attached to one local mode: flat spectral density, so the
// bath is fully described by its temperature and damping rate.
struct Bath {
    int mode = 0;
    double temperature = 0.0;
    double rate = 0.0;
};

// Single source of truth for a model instance.
struct SystemSpec {
    std::vector<double> mode_frequencies;
    std::vector<Coupling> couplings;
    std::vector<Bath> baths;

    int mode_count() const { return static_cast<int>(mode_frequencies.size()); }

    void validate() const {
        const int n = mode_count();
        if (n == 0) {
            throw InvalidSpecError("SystemSpec: at least one mode required");
        }
        for (double w : mode_frequencies) {
            if (!(w > 0.0)) {
                throw InvalidSpecError("SystemSpec: mode frequencies must be positive");
            }
        }
        for (const auto& c : couplings) {
            if (c.m < 0 || c.m >= n || c.n < 0 || c.n >= n) {
                throw InvalidSpecError("SystemSpec: coupling index out of range");
            }
            if (c.m == c.n) {
                throw InvalidSpecError("SystemSpec: coupling must join two distinct modes");
            }
        }
        if (baths.empty()) {
            throw InvalidSpecError("SystemSpec: at least one bath required");
        }
        std::set<int> seen;
        for (const auto& b : baths) {
            if (b.mode < 0 || b.mode >= n) {
                throw InvalidSpecError("SystemSpec: bath mode index out of range");
            }
            if (!seen.insert(b.mode).second) {
                throw InvalidSpecError("SystemSpec: at most one bath per mode");
            }
            if (!(b.temperature > 0.0)) {
                throw InvalidSpecError("SystemSpec: bath temperature must be positive");
            }
            if (!(b.rate > 0.0)) {
                throw InvalidSpecError("SystemSpec: bath rate must be positive");
            }
        }
    }
};

// Frequency matrix Omega, its diagonalizer U (rows are normal modes,
// U * Omega * U^dag = diag(eps)), and the ascending eigenfrequencies.
struct NormalModeBasis {
    CMatrix omega_matrix;
    CMatrix transform;
    RVector eigenfrequencies;

    int mode_count() const { return static_cast<int>(eigenfrequencies.size()); }
};

// Assemble the real-symmetric frequency matrix: local frequencies on the
// diagonal, coupling strengths on the coupled off-diagonal pairs.
inline CMatrix build_omega(const SystemSpec& spec) {
    spec.validate();
    const int n = spec.mode_count();
    CMatrix omega = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        omega(i, i) = spec.mode_frequencies[i];
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& c : spec.couplings) {
        auto key = std::minmax(c.m, c.n);
        if (!seen.insert(key).second) {
            throw DuplicateCouplingError("build_omega: coupling pair (" + std::to_string(key.first) +
                                         "," + std::to_string(key.second) + ") listed twice");
        }
        omega(c.m, c.n) = c.g;
        omega(c.n, c.m) = c.g;
    }
    return omega;
}

inline NormalModeBasis normal_modes(const SystemSpec& spec) {
    NormalModeBasis basis;
    basis.omega_matrix = build_omega(spec);
    auto eig = hermitian_eigen(basis.omega_matrix);
    basis.transform = std::move(eig.transform);
    basis.eigenfrequencies = std::move(eig.eigenvalues);
    if (basis.eigenfrequencies.minCoeff() <= 0.0) {
        throw NonPositiveSpectrumError("normal_modes: eigenfrequency " +
                                       std::to_string(basis.eigenfrequencies.minCoeff()) +
                                       " is not positive");
    }
    return basis;
}

// Antisymmetric splitting matrix, entry (i, j) = eps_i - eps_j.
inline RMatrix splittings(const NormalModeBasis& basis) {
    const auto& eps = basis.eigenfrequencies;
    const Eigen::Index n = eps.size();
    RMatrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            d(i, j) = eps(i) - eps(j);
        }
    }
    return d;
}

} // namespace neqsteady
