// config.hpp — Flat, line-oriented run configuration.
//
// Grammar (documented in the README): blank lines and '#' comments are
// ignored; a line `[section]` opens a section; every other line is
// `key = value` where the value may be a space-separated tuple. Sections:
//
//   [modes]      omega = <w>                  (one line per mode, in order)
//   [couplings]  pair = <m> <n> <g>
//   [baths]      bath = <mode> <T> <gamma>
//   [run]        rwa = true|false
//   [sweep]      parameter = delta|g|gL|gR|TL|TR,  from, to, points
//   [output]     path = <file>,  format = csv|json
//   [oracle]     cutoffs = <c0> <c1> ...,  dt, t_final, tol

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "neqsteady/model.hpp"

namespace neqsteady {

struct SweepSpec {
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
};

enum class OutputFormat { Csv, Json };

struct OutputSpec {
    std::string path; // empty means stdout
    OutputFormat format = OutputFormat::Json;
};

struct OracleOverrides {
    std::vector<int> cutoffs; // empty -> default 8 per mode
    double dt = 0.0;          // 0 -> auto
    double t_final = 0.0;     // 0 -> default
    double convergence_tol = 0.0;
};

struct RunConfig {
    SystemSpec model;
    bool rwa = false;
    std::optional<SweepSpec> sweep;
    OutputSpec output;
    OracleOverrides oracle;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

// Return a copy of `spec` with one sweepable parameter replaced. Conventions:
// the left mode is index 0 and the right mode the last index; `delta`
// re-detunes the end modes about their current mean (w_L = mean + delta/2);
// `g` sets every coupling, `gL`/`gR` the (0,1) and (1,2) chain couplings.
SystemSpec apply_sweep_parameter(const SystemSpec& spec, const std::string& parameter,
                                 double value);

} // namespace neqsteady
