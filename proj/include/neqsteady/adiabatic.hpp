// adiabatic.hpp — Elimination of the far-detuned bus mode and the closed-form
// steady state of the resulting two-oscillator model.
//
// The bus elimination renormalizes the end-mode frequencies and induces a
// direct coupling g (negative for a red-detuned bus). All downstream
// quantities depend on g only through g^2 and the splitting, so no sign
// rectification is applied.

#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "neqsteady/dissipators.hpp"

namespace neqsteady {

// Two-mode normal basis parameters. (alpha, beta) is the normalized
// eigenvector of [[w_L', g],[g, w_R']] for the lower eigenfrequency
// eps_minus, sign-fixed to alpha >= 0, so alpha^2 is the left-mode weight of
// the eps_minus normal mode. With this convention U = [[alpha, beta],
// [beta, -alpha]] diagonalizes the reduced frequency matrix with ascending
// diagonal (eps_minus, eps_plus), and 2 alpha beta / (alpha^2 - beta^2)
// equals -2g/Delta for Delta = w_R' - w_L'.
struct TwoModeBasis {
    double epsilon_minus = 0.0;
    double epsilon_plus = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

inline TwoModeBasis two_mode_basis_from(double mean_frequency, double detuning, double g) {
    const double half = 0.5 * detuning;
    const double split = std::sqrt(half * half + g * g);
    TwoModeBasis out;
    out.epsilon_minus = mean_frequency - split;
    out.epsilon_plus = mean_frequency + split;
    if (g == 0.0) {
        out.alpha = detuning >= 0.0 ? 1.0 : 0.0;
        out.beta = detuning >= 0.0 ? 0.0 : 1.0;
        return out;
    }
    if (detuning == 0.0) {
        out.alpha = std::sqrt(0.5);
        out.beta = g > 0.0 ? -out.alpha : out.alpha;
        return out;
    }
    double v0, v1;
    if (detuning > 0.0) {
        v0 = half + split; // no cancellation on this branch
        v1 = -g;
    } else {
        v0 = g;
        v1 = half - split;
    }
    const double norm = std::hypot(v0, v1);
    out.alpha = v0 / norm;
    out.beta = v1 / norm;
    if (out.alpha < 0.0 || (out.alpha == 0.0 && out.beta < 0.0)) {
        out.alpha = -out.alpha;
        out.beta = -out.beta;
    }
    return out;
}

// Reduced two-oscillator model after bus elimination (or built directly from
// its parameters). detuning = omega_right - omega_left of the renormalized
// frequencies.
struct ReducedModel {
    double omega_left = 0.0;
    double omega_right = 0.0;
    double coupling = 0.0;
    double mean_frequency = 0.0;
    double detuning = 0.0;
    double splitting = 0.0;
    double epsilon_minus = 0.0;
    double epsilon_plus = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double validity_ratio = 0.0; // min |omega - omega_bus| / |g|; advisory, large is good
};

inline ReducedModel reduced_from_parameters(double omega_left, double omega_right, double g) {
    ReducedModel r;
    r.omega_left = omega_left;
    r.omega_right = omega_right;
    r.coupling = g;
    r.mean_frequency = 0.5 * (omega_left + omega_right);
    r.detuning = omega_right - omega_left;
    const auto basis = two_mode_basis_from(r.mean_frequency, r.detuning, g);
    r.splitting = 0.5 * (basis.epsilon_plus - basis.epsilon_minus);
    r.epsilon_minus = basis.epsilon_minus;
    r.epsilon_plus = basis.epsilon_plus;
    r.alpha = basis.alpha;
    r.beta = basis.beta;
    r.validity_ratio = std::numeric_limits<double>::infinity();
    return r;
}

inline TwoModeBasis two_mode_basis(const ReducedModel& r) {
    return two_mode_basis_from(r.mean_frequency, r.detuning, r.coupling);
}

// Fröhlich–Nakajima elimination of the middle mode of an L-bus-R chain
// (modes 0, 1, 2 with couplings (0,1) and (1,2)):
//   w'_{L,R} = w_{L,R} + g_{L,R}^2 / (w_{L,R} - w_bus),
//   g = (g_L g_R / 2) [1/(w_L - w_bus) + 1/(w_R - w_bus)].
// Validity needs |w_{L,R} - w_bus| >> g_{L,R}; the ratio is reported and a
// caller may warn when it drops below ~5.
inline ReducedModel eliminate_bus(const SystemSpec& spec) {
    spec.validate();
    if (spec.mode_count() != 3 || spec.couplings.size() != 2) {
        throw InvalidSpecError("eliminate_bus: expected a 3-mode chain with two couplings");
    }
    double g_left = 0.0, g_right = 0.0;
    bool saw_left = false, saw_right = false;
    for (const auto& c : spec.couplings) {
        const auto key = std::minmax(c.m, c.n);
        if (key.first == 0 && key.second == 1) {
            g_left = c.g;
            saw_left = true;
        } else if (key.first == 1 && key.second == 2) {
            g_right = c.g;
            saw_right = true;
        }
    }
    if (!saw_left || !saw_right) {
        throw InvalidSpecError("eliminate_bus: couplings must join (0,1) and (1,2)");
    }
    const double w_left = spec.mode_frequencies[0];
    const double w_bus = spec.mode_frequencies[1];
    const double w_right = spec.mode_frequencies[2];
    const double det_left = w_left - w_bus;
    const double det_right = w_right - w_bus;
    if (std::abs(det_left) < 1e-9 || std::abs(det_right) < 1e-9) {
        throw ResonantBusError("eliminate_bus: end mode resonant with the bus");
    }

    const double wl = w_left + g_left * g_left / det_left;
    const double wr = w_right + g_right * g_right / det_right;
    const double g = 0.5 * g_left * g_right * (1.0 / det_left + 1.0 / det_right);

    ReducedModel r = reduced_from_parameters(wl, wr, g);
    double ratio = std::numeric_limits<double>::infinity();
    if (g_left != 0.0) ratio = std::min(ratio, std::abs(det_left / g_left));
    if (g_right != 0.0) ratio = std::min(ratio, std::abs(det_right / g_right));
    r.validity_ratio = ratio;
    return r;
}

// Bath parameters of the two-oscillator model.
struct BathPair {
    double temperature_left = 0.0;
    double rate_left = 0.0;
    double temperature_right = 0.0;
    double rate_right = 0.0;
};

// Closed-form steady occupations. Each N_sigma^eff is a convex combination of
// the four bath occupations N_{L,R}(eps_-+); the weights divided by phi sum
// to one per oscillator.
//
// Note on the right-oscillator bracket coefficients: the published versions
// of coeff_c_right / coeff_d_right carry the weighted-rate factors
// (alpha^2 gL + beta^2 gR) and (beta^2 gL + alpha^2 gR) swapped, which breaks
// both the sum rule and L/R mirror symmetry away from the degeneracy point.
// The form used here restores the symmetry and agrees with the exact
// Lyapunov steady state to machine precision for arbitrary parameters.
struct ClosedFormReport {
    double phi = 0.0;
    double coeff_a_left = 0.0, coeff_b_left = 0.0, coeff_c_left = 0.0, coeff_d_left = 0.0;
    double coeff_a_right = 0.0, coeff_b_right = 0.0, coeff_c_right = 0.0, coeff_d_right = 0.0;
    double occupation_left = 0.0;
    double occupation_right = 0.0;
    double gap = 0.0; // occupation_left - occupation_right
};

inline ClosedFormReport closed_form_steady(const ReducedModel& r, const BathPair& baths) {
    if (!(baths.temperature_left > 0.0) || !(baths.temperature_right > 0.0) ||
        !(baths.rate_left > 0.0) || !(baths.rate_right > 0.0)) {
        throw InvalidSpecError("closed_form_steady: bath temperatures and rates must be positive");
    }
    const double a2 = r.alpha * r.alpha;
    const double b2 = r.beta * r.beta;
    const double gl = baths.rate_left;
    const double gr = baths.rate_right;
    const double d2 = 16.0 * r.splitting * r.splitting;
    const double base = gl * gr * (gl + gr) * (gl + gr);
    const double mix_a = a2 * gl + b2 * gr;
    const double mix_b = b2 * gl + a2 * gr;

    ClosedFormReport out;
    out.phi = base + d2 * mix_a * mix_b;
    out.coeff_a_left = a2 * (base + d2 * a2 * mix_b * gl);
    out.coeff_b_left = b2 * (base + d2 * b2 * mix_a * gl);
    out.coeff_c_left = d2 * a2 * b2 * mix_b * gr;
    out.coeff_d_left = d2 * a2 * b2 * mix_a * gr;
    out.coeff_a_right = d2 * a2 * b2 * mix_b * gl;
    out.coeff_b_right = d2 * a2 * b2 * mix_a * gl;
    out.coeff_c_right = b2 * (base + d2 * b2 * mix_b * gr);
    out.coeff_d_right = a2 * (base + d2 * a2 * mix_a * gr);

    const double nl_minus = planck_occupation(r.epsilon_minus, baths.temperature_left);
    const double nl_plus = planck_occupation(r.epsilon_plus, baths.temperature_left);
    const double nr_minus = planck_occupation(r.epsilon_minus, baths.temperature_right);
    const double nr_plus = planck_occupation(r.epsilon_plus, baths.temperature_right);

    out.occupation_left = (out.coeff_a_left * nl_minus + out.coeff_b_left * nl_plus +
                           out.coeff_c_left * nr_minus + out.coeff_d_left * nr_plus) /
                          out.phi;
    out.occupation_right = (out.coeff_a_right * nl_minus + out.coeff_b_right * nl_plus +
                            out.coeff_c_right * nr_minus + out.coeff_d_right * nr_plus) /
                           out.phi;
    out.gap = out.occupation_left - out.occupation_right;
    return out;
}

// Occupation gap at the degeneracy point,
//   ( [N_L(e+) - N_R(e+)] + [N_L(e-) - N_R(e-)] ) / ( 2 (1 + 4 g^2 / gL gR) ).
inline double degeneracy_gap(const ReducedModel& r, const BathPair& baths) {
    if (std::abs(r.detuning) >= 1e-12) {
        throw NotDegenerateError("degeneracy_gap: detuning " + std::to_string(r.detuning) +
                                 " is not zero");
    }
    const double nl_plus = planck_occupation(r.epsilon_plus, baths.temperature_left);
    const double nl_minus = planck_occupation(r.epsilon_minus, baths.temperature_left);
    const double nr_plus = planck_occupation(r.epsilon_plus, baths.temperature_right);
    const double nr_minus = planck_occupation(r.epsilon_minus, baths.temperature_right);
    const double denom =
        2.0 * (1.0 + 4.0 * r.coupling * r.coupling / (baths.rate_left * baths.rate_right));
    return ((nl_plus - nr_plus) + (nl_minus - nr_minus)) / denom;
}

// SystemSpec equivalent of a reduced model, so the generic phase-space
// machinery can solve the two-oscillator problem directly.
inline SystemSpec reduced_to_spec(const ReducedModel& r, const BathPair& baths) {
    SystemSpec spec;
    spec.mode_frequencies = {r.omega_left, r.omega_right};
    if (r.coupling != 0.0) {
        spec.couplings = {{0, 1, r.coupling}};
    }
    spec.baths = {{0, baths.temperature_left, baths.rate_left},
                  {1, baths.temperature_right, baths.rate_right}};
    return spec;
}

} // namespace neqsteady
