// run.cpp — Experiment command implementations.

#include "neqsteady/run.hpp"

#include <atomic>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace neqsteady {

using nlohmann::json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

SteadySolution solve_model(const SystemSpec& spec, bool rwa) {
    SteadySolution out;
    out.basis = normal_modes(spec);
    out.dissipators = build_dissipators(out.basis, spec, rwa);
    const DriftDiffusion dd = build_drift_diffusion(out.basis, out.dissipators);
    const QuadraticForm m = solve_steady(dd);
    out.report = extract_report(m, out.basis, spec);
    return out;
}

namespace {

json vector_json(const RVector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(v(i));
    }
    return arr;
}

json spec_json(const SystemSpec& spec) {
    json couplings = json::array();
    for (const auto& c : spec.couplings) {
        couplings.push_back({{"m", c.m}, {"n", c.n}, {"g", c.g}});
    }
    json baths = json::array();
    for (const auto& b : spec.baths) {
        baths.push_back({{"mode", b.mode}, {"temperature", b.temperature}, {"rate", b.rate}});
    }
    return {{"mode_frequencies", spec.mode_frequencies},
            {"couplings", couplings},
            {"baths", baths}};
}

// Run `work(i)` for i in [0, count) on a bounded pool; results land in order.
void parallel_for(int count, int jobs, const std::function<void(int)>& work) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) {
            work(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                work(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace

json steady_json(const SystemSpec& spec, bool rwa) {
    const SteadySolution sol = solve_model(spec, rwa);
    return {{"model", spec_json(spec)},
            {"rwa", rwa},
            {"eigenfrequencies", vector_json(sol.basis.eigenfrequencies)},
            {"normal_occupations", vector_json(sol.report.normal_occupations)},
            {"local_occupations", vector_json(sol.report.local_occupations)},
            {"effective_temperatures", vector_json(sol.report.effective_temperatures)},
            {"anomalous_residual", sol.report.anomalous_residual},
            {"solve_residual", sol.report.solve_residual}};
}

std::vector<Fig2Row> fig2_sweep(char panel, int points, double from, double to, int jobs) {
    if (panel != 'a' && panel != 'b' && panel != 'c') {
        throw ConfigError("fig2: panel must be a, b or c");
    }
    if (points < 2 || !(from < to)) {
        throw ConfigError("fig2: need points >= 2 and from < to");
    }
    static const double kCouplings[] = {0.02, 0.04, 0.06, 0.08};
    const bool rwa = panel == 'c';
    const double right_factor = panel == 'b' ? 0.8 : 1.0;

    std::vector<Fig2Row> rows(static_cast<std::size_t>(4 * points));
    const double step = (to - from) / (points - 1);

    parallel_for(4 * points, jobs, [&](int idx) {
        const int gi = idx / points;
        const int di = idx % points;
        const double g = kCouplings[gi];
        const double delta = di + 1 == points ? to : from + step * di;

        SystemSpec spec;
        spec.mode_frequencies = {1.0 + 0.5 * delta, 2.0, 1.0 - 0.5 * delta};
        spec.couplings = {{0, 1, g}, {1, 2, right_factor * g}};
        spec.baths = {{0, 1.0, 0.002}, {2, 3.0, 0.003}};

        const SteadySolution sol = solve_model(spec, rwa);
        Fig2Row& row = rows[static_cast<std::size_t>(idx)];
        row.delta = delta;
        row.g = g;
        row.teff_left = sol.report.effective_temperatures(0);
        row.teff_right = sol.report.effective_temperatures(2);
        row.occ_left = sol.report.local_occupations(0);
        row.occ_right = sol.report.local_occupations(2);
    });
    return rows;
}

std::string fig2_csv(const std::vector<Fig2Row>& rows) {
    std::string out = "delta,g,Teff_L,Teff_R,N_L,N_R\n";
    for (const auto& r : rows) {
        out += format_number(r.delta);
        out += ',';
        out += format_number(r.g);
        out += ',';
        out += format_number(r.teff_left);
        out += ',';
        out += format_number(r.teff_right);
        out += ',';
        out += format_number(r.occ_left);
        out += ',';
        out += format_number(r.occ_right);
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> run_sweep(const SystemSpec& spec, bool rwa, const SweepSpec& sweep,
                                int jobs) {
    std::vector<SweepRow> rows(static_cast<std::size_t>(sweep.points));
    const double step = (sweep.to - sweep.from) / (sweep.points - 1);
    parallel_for(sweep.points, jobs, [&](int i) {
        const double value = i + 1 == sweep.points ? sweep.to : sweep.from + step * i;
        const SystemSpec point = apply_sweep_parameter(spec, sweep.parameter, value);
        const SteadySolution sol = solve_model(point, rwa);
        rows[static_cast<std::size_t>(i)] = {value, sol.report.local_occupations,
                                             sol.report.effective_temperatures};
    });
    return rows;
}

std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
    if (rows.empty()) {
        return "";
    }
    const Eigen::Index n = rows.front().local_occupations.size();
    std::string out = parameter;
    for (Eigen::Index m = 0; m < n; ++m) {
        out += ",N_" + std::to_string(m);
    }
    for (Eigen::Index m = 0; m < n; ++m) {
        out += ",Teff_" + std::to_string(m);
    }
    out += '\n';
    for (const auto& r : rows) {
        out += format_number(r.value);
        for (Eigen::Index m = 0; m < n; ++m) {
            out += ',';
            out += format_number(r.local_occupations(m));
        }
        for (Eigen::Index m = 0; m < n; ++m) {
            out += ',';
            out += format_number(r.effective_temperatures(m));
        }
        out += '\n';
    }
    return out;
}

json sweep_json(const std::string& parameter, const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{parameter, r.value},
                       {"local_occupations", vector_json(r.local_occupations)},
                       {"effective_temperatures", vector_json(r.effective_temperatures)}});
    }
    return arr;
}

json reduce_json(const SystemSpec& spec) {
    spec.validate();
    const ReducedModel reduced = eliminate_bus(spec);

    const Bath* bath_left = nullptr;
    const Bath* bath_right = nullptr;
    for (const auto& b : spec.baths) {
        if (b.mode == 0) {
            bath_left = &b;
        }
        if (b.mode == 2) {
            bath_right = &b;
        }
    }
    if (!bath_left || !bath_right) {
        throw InvalidSpecError("reduce: chain needs baths on modes 0 and 2");
    }
    const BathPair baths{bath_left->temperature, bath_left->rate, bath_right->temperature,
                         bath_right->rate};

    const ClosedFormReport closed = closed_form_steady(reduced, baths);
    const SteadySolution two_mode = solve_model(reduced_to_spec(reduced, baths), false);
    const SteadySolution full = solve_model(spec, false);

    const double two_l = two_mode.report.local_occupations(0);
    const double two_r = two_mode.report.local_occupations(1);
    const double full_l = full.report.local_occupations(0);
    const double full_r = full.report.local_occupations(2);

    return {
        {"model", spec_json(spec)},
        {"reduced",
         {{"omega_left", reduced.omega_left},
          {"omega_right", reduced.omega_right},
          {"coupling", reduced.coupling},
          {"mean_frequency", reduced.mean_frequency},
          {"detuning", reduced.detuning},
          {"splitting", reduced.splitting},
          {"epsilon_minus", reduced.epsilon_minus},
          {"epsilon_plus", reduced.epsilon_plus},
          {"alpha", reduced.alpha},
          {"beta", reduced.beta},
          {"validity_ratio", reduced.validity_ratio}}},
        {"closed_form",
         {{"phi", closed.phi},
          {"occupation_left", closed.occupation_left},
          {"occupation_right", closed.occupation_right},
          {"gap", closed.gap},
          {"coefficients_left",
           {closed.coeff_a_left, closed.coeff_b_left, closed.coeff_c_left, closed.coeff_d_left}},
          {"coefficients_right",
           {closed.coeff_a_right, closed.coeff_b_right, closed.coeff_c_right,
            closed.coeff_d_right}}}},
        {"two_mode_solver",
         {{"occupation_left", two_l},
          {"occupation_right", two_r},
          {"max_abs_difference_from_closed_form",
           std::max(std::abs(two_l - closed.occupation_left),
                    std::abs(two_r - closed.occupation_right))}}},
        {"full_chain_solver",
         {{"local_occupations", vector_json(full.report.local_occupations)},
          {"end_mode_gap", full_l - full_r},
          {"max_abs_difference_from_closed_form",
           std::max(std::abs(full_l - closed.occupation_left),
                    std::abs(full_r - closed.occupation_right))}}},
    };
}

OracleCheckResult oracle_check(const SystemSpec& spec, bool rwa, const OracleOverrides& overrides) {
    spec.validate();
    const SteadySolution sol = solve_model(spec, rwa);

    OracleConfig config;
    config.cutoffs = overrides.cutoffs.empty()
                         ? std::vector<int>(static_cast<std::size_t>(spec.mode_count()), 8)
                         : overrides.cutoffs;
    if (static_cast<int>(config.cutoffs.size()) != spec.mode_count()) {
        throw ConfigError("oracle-check: one cutoff per mode required");
    }
    config.dt = overrides.dt;
    config.t_final = overrides.t_final > 0.0 ? overrides.t_final : 800.0;
    config.convergence_tol = overrides.convergence_tol > 0.0 ? overrides.convergence_tol : 5e-7;

    const FockBasis basis(config.cutoffs);
    const Liouvillian liouville = Liouvillian::normal_form(basis, sol.basis, sol.dissipators);
    const RelaxResult relax = relax_to_steady(liouville, config);

    OracleCheckResult result;
    result.converged = relax.converged;
    result.steps = relax.steps;
    result.final_time = relax.final_time;
    result.derivative_norm = relax.final_derivative_norm;
    result.pass = true;
    for (int m = 0; m < spec.mode_count(); ++m) {
        OracleCheckRow row;
        row.mode = m;
        row.oracle_occupation = occupation(relax.state, m);
        row.solver_occupation = sol.report.local_occupations(m);
        row.abs_error = std::abs(row.oracle_occupation - row.solver_occupation);
        const double q = row.oracle_occupation / (1.0 + row.oracle_occupation);
        row.tail_estimate = std::pow(q, config.cutoffs[static_cast<std::size_t>(m)] + 1);
        row.tolerance = std::max(1e-3, 3.0 * row.tail_estimate);
        row.pass = row.abs_error <= row.tolerance;
        result.pass = result.pass && row.pass;
        result.rows.push_back(row);
    }
    return result;
}

json oracle_check_json(const OracleCheckResult& result) {
    json rows = json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"mode", r.mode},
                        {"oracle_occupation", r.oracle_occupation},
                        {"solver_occupation", r.solver_occupation},
                        {"abs_error", r.abs_error},
                        {"tail_estimate", r.tail_estimate},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass}});
    }
    return {{"rows", rows},
            {"pass", result.pass},
            {"converged", result.converged},
            {"steps", result.steps},
            {"final_time", result.final_time},
            {"derivative_norm", result.derivative_norm}};
}

} // namespace neqsteady
