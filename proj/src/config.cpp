// config.cpp — Parser for the line-oriented run configuration.

#include "neqsteady/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace neqsteady {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream iss(s);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) {
        out.push_back(tok);
    }
    return out;
}

double parse_double(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) {
            throw std::invalid_argument(tok);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: expected a number for " + where + ", got '" + tok + "'");
    }
}

int parse_int(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) {
            throw std::invalid_argument(tok);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: expected an integer for " + where + ", got '" + tok + "'");
    }
}

bool parse_bool(const std::string& tok, const std::string& where) {
    if (tok == "true" || tok == "1" || tok == "yes" || tok == "on") {
        return true;
    }
    if (tok == "false" || tok == "0" || tok == "no" || tok == "off") {
        return false;
    }
    throw ConfigError("config: expected a boolean for " + where + ", got '" + tok + "'");
}

} // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    SweepSpec sweep;
    bool has_sweep = false;

    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = "line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config: malformed section header at " + where);
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: expected 'key = value' at " + where);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto toks = split_ws(value);
        if (toks.empty()) {
            throw ConfigError("config: empty value for '" + key + "' at " + where);
        }

        if (section == "modes") {
            if (key != "omega") {
                throw ConfigError("config: unknown key '" + key + "' in [modes] at " + where);
            }
            for (const auto& t : toks) {
                cfg.model.mode_frequencies.push_back(parse_double(t, "omega"));
            }
        } else if (section == "couplings") {
            if (key != "pair" || toks.size() != 3) {
                throw ConfigError("config: [couplings] expects 'pair = m n g' at " + where);
            }
            cfg.model.couplings.push_back(
                {parse_int(toks[0], "pair.m"), parse_int(toks[1], "pair.n"),
                 parse_double(toks[2], "pair.g")});
        } else if (section == "baths") {
            if (key != "bath" || toks.size() != 3) {
                throw ConfigError("config: [baths] expects 'bath = mode T gamma' at " + where);
            }
            cfg.model.baths.push_back({parse_int(toks[0], "bath.mode"),
                                       parse_double(toks[1], "bath.T"),
                                       parse_double(toks[2], "bath.gamma")});
        } else if (section == "run") {
            if (key == "rwa") {
                cfg.rwa = parse_bool(toks[0], "rwa");
            } else {
                throw ConfigError("config: unknown key '" + key + "' in [run] at " + where);
            }
        } else if (section == "sweep") {
            has_sweep = true;
            if (key == "parameter") {
                sweep.parameter = toks[0];
            } else if (key == "from") {
                sweep.from = parse_double(toks[0], "sweep.from");
            } else if (key == "to") {
                sweep.to = parse_double(toks[0], "sweep.to");
            } else if (key == "points") {
                sweep.points = parse_int(toks[0], "sweep.points");
            } else {
                throw ConfigError("config: unknown key '" + key + "' in [sweep] at " + where);
            }
        } else if (section == "output") {
            if (key == "path") {
                cfg.output.path = value;
            } else if (key == "format") {
                if (toks[0] == "csv") {
                    cfg.output.format = OutputFormat::Csv;
                } else if (toks[0] == "json") {
                    cfg.output.format = OutputFormat::Json;
                } else {
                    throw ConfigError("config: format must be csv or json at " + where);
                }
            } else {
                throw ConfigError("config: unknown key '" + key + "' in [output] at " + where);
            }
        } else if (section == "oracle") {
            if (key == "cutoffs") {
                for (const auto& t : toks) {
                    cfg.oracle.cutoffs.push_back(parse_int(t, "oracle.cutoffs"));
                }
            } else if (key == "dt") {
                cfg.oracle.dt = parse_double(toks[0], "oracle.dt");
            } else if (key == "t_final") {
                cfg.oracle.t_final = parse_double(toks[0], "oracle.t_final");
            } else if (key == "tol") {
                cfg.oracle.convergence_tol = parse_double(toks[0], "oracle.tol");
            } else {
                throw ConfigError("config: unknown key '" + key + "' in [oracle] at " + where);
            }
        } else if (section.empty()) {
            throw ConfigError("config: key '" + key + "' before any section at " + where);
        } else {
            throw ConfigError("config: unknown section [" + section + "] at " + where);
        }
    }

    try {
        cfg.model.validate();
    } catch (const InvalidSpecError& e) {
        throw ConfigError(std::string("config: invalid model: ") + e.what());
    }

    if (has_sweep) {
        static const std::set<std::string> allowed = {"delta", "g", "gL", "gR", "TL", "TR"};
        if (!allowed.count(sweep.parameter)) {
            throw ConfigError("config: sweep parameter must be one of delta|g|gL|gR|TL|TR");
        }
        if (sweep.points < 2) {
            throw ConfigError("config: sweep needs points >= 2");
        }
        if (!(sweep.from < sweep.to)) {
            throw ConfigError("config: sweep needs from < to");
        }
        // reject parameters that do not exist in this model
        apply_sweep_parameter(cfg.model, sweep.parameter, 0.5 * (sweep.from + sweep.to));
        cfg.sweep = sweep;
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    return parse_config(in);
}

SystemSpec apply_sweep_parameter(const SystemSpec& spec, const std::string& parameter,
                                 double value) {
    SystemSpec out = spec;
    const int n = spec.mode_count();
    const int left = 0;
    const int right = n - 1;

    auto coupling_between = [&](int a, int b) -> Coupling* {
        for (auto& c : out.couplings) {
            const auto key = std::minmax(c.m, c.n);
            if (key.first == std::min(a, b) && key.second == std::max(a, b)) {
                return &c;
            }
        }
        return nullptr;
    };
    auto bath_on = [&](int mode) -> Bath* {
        for (auto& b : out.baths) {
            if (b.mode == mode) {
                return &b;
            }
        }
        return nullptr;
    };

    if (parameter == "delta") {
        if (n < 2) {
            throw ConfigError("sweep: delta needs at least two modes");
        }
        const double mean =
            0.5 * (spec.mode_frequencies[static_cast<std::size_t>(left)] +
                   spec.mode_frequencies[static_cast<std::size_t>(right)]);
        out.mode_frequencies[static_cast<std::size_t>(left)] = mean + 0.5 * value;
        out.mode_frequencies[static_cast<std::size_t>(right)] = mean - 0.5 * value;
    } else if (parameter == "g") {
        if (out.couplings.empty()) {
            throw ConfigError("sweep: g needs at least one coupling");
        }
        for (auto& c : out.couplings) {
            c.g = value;
        }
    } else if (parameter == "gL" || parameter == "gR") {
        if (n != 3) {
            throw ConfigError("sweep: gL/gR need the 3-mode chain");
        }
        Coupling* c = parameter == "gL" ? coupling_between(0, 1) : coupling_between(1, 2);
        if (!c) {
            throw ConfigError("sweep: chain coupling not present in the model");
        }
        c->g = value;
    } else if (parameter == "TL" || parameter == "TR") {
        Bath* b = bath_on(parameter == "TL" ? left : right);
        if (!b) {
            throw ConfigError("sweep: no bath attached to the swept mode");
        }
        b->temperature = value;
    } else {
        throw ConfigError("sweep: unknown parameter '" + parameter + "'");
    }
    return out;
}

} // namespace neqsteady
