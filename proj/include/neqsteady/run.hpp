// run.hpp — Experiment commands behind the CLI: single steady solves, the
// effective-temperature sweeps of the three-panel comparison figure, bus
// reduction side-by-side reports, and the oracle cross-check. Output is
// deterministic: floats print with 12 significant digits and sweep rows are
// emitted in input order regardless of worker completion order.

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "neqsteady/adiabatic.hpp"
#include "neqsteady/config.hpp"
#include "neqsteady/fock_oracle.hpp"
#include "neqsteady/phase_space.hpp"

namespace neqsteady {

// 12-significant-digit formatting used for all CSV output.
std::string format_number(double v);

struct SteadySolution {
    NormalModeBasis basis;
    DissipatorSet dissipators;
    SteadyReport report;
};

// normal_modes -> build_dissipators -> build_drift_diffusion -> solve_steady
// -> extract_report for one model instance.
SteadySolution solve_model(const SystemSpec& spec, bool rwa);

nlohmann::json steady_json(const SystemSpec& spec, bool rwa);

// --- three-panel effective-temperature figure ---

struct Fig2Row {
    double delta = 0.0;
    double g = 0.0;
    double teff_left = 0.0;
    double teff_right = 0.0;
    double occ_left = 0.0;
    double occ_right = 0.0;
};

// Full 3-mode chain sweep at mean end frequency 1, bus frequency 2,
// T_L = 1, T_R = 3, gamma_L = 0.002, gamma_R = 0.003. Panels: 'a' uses
// g_L = g_R = g, 'b' uses g_R = 0.8 g, 'c' is panel a with the inter-mode
// dissipator terms dropped. delta = omega_L - omega_R is swept with the end
// frequencies delta/2 above and below the mean; rows are ordered by g (the
// four values 0.02..0.08), then by delta ascending.
std::vector<Fig2Row> fig2_sweep(char panel, int points = 201, double from = -0.5,
                                double to = 0.5, int jobs = 1);

std::string fig2_csv(const std::vector<Fig2Row>& rows);

// --- generic parameter sweep from a config file ---

struct SweepRow {
    double value = 0.0;
    RVector local_occupations;
    RVector effective_temperatures;
};

std::vector<SweepRow> run_sweep(const SystemSpec& spec, bool rwa, const SweepSpec& sweep,
                                int jobs = 1);

std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::string& parameter, const std::vector<SweepRow>& rows);

// --- bus reduction ---

// Requires the 3-mode chain with baths on both end modes. Reports the
// reduced model, the closed-form occupations, the two-mode numeric solve of
// the reduced model, and the full-chain solve, with their differences.
nlohmann::json reduce_json(const SystemSpec& spec);

// --- oracle cross-check ---

struct OracleCheckRow {
    int mode = 0;
    double oracle_occupation = 0.0;
    double solver_occupation = 0.0;
    double abs_error = 0.0;
    double tail_estimate = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct OracleCheckResult {
    std::vector<OracleCheckRow> rows;
    bool pass = false;
    bool converged = false;
    long steps = 0;
    double final_time = 0.0;
    double derivative_norm = 0.0;
};

// Relax the truncated Fock-space master equation and compare per-mode
// occupations against the Gaussian solver. The per-mode tolerance is
// max(1e-3, 3x the geometric truncation tail).
OracleCheckResult oracle_check(const SystemSpec& spec, bool rwa, const OracleOverrides& overrides);

nlohmann::json oracle_check_json(const OracleCheckResult& result);

} // namespace neqsteady
