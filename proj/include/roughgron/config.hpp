#pragma once

// Command-line and `key = value` file configuration for the experiment
// runner. Every subcommand declares its keys; values are validated when
// parsed and kept as text, with typed accessors.

#include "roughgron/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughgron {

/// Usage problems: unknown subcommand or key, bad value, missing key.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown for --help; carries the usage text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string subcommand;
    std::map<std::string, std::string> params; ///< every declared key that received a value
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = ".";

    bool has(const std::string& key) const { return params.count(key) != 0; }

    const std::string& text(const std::string& key) const {
        const auto it = params.find(key);
        if (it == params.end()) {
            throw ConfigError("missing value for '" + key + "'");
        }
        return it->second;
    }

    double real(const std::string& key) const {
        const std::string& v = text(key);
        try {
            std::size_t used = 0;
            const double out = std::stod(v, &used);
            if (used != v.size()) {
                throw std::invalid_argument(v);
            }
            return out;
        } catch (const std::logic_error&) {
            throw ConfigError("'" + key + "' expects a real number, got '" + v + "'");
        }
    }

    std::uint64_t integer(const std::string& key) const {
        const std::string& v = text(key);
        try {
            std::size_t used = 0;
            const auto out = std::stoull(v, &used);
            if (used != v.size() || v.front() == '-') {
                throw std::invalid_argument(v);
            }
            return out;
        } catch (const std::logic_error&) {
            throw ConfigError("'" + key + "' expects a nonnegative integer, got '" + v + "'");
        }
    }

    bool flag(const std::string& key) const { return has(key) && text(key) == "true"; }

    std::optional<double> optional_real(const std::string& key) const {
        return has(key) ? std::optional<double>(real(key)) : std::nullopt;
    }
};

enum class KeyKind { real, integer, text, flag };

struct KeySpec {
    std::string name;
    KeyKind kind = KeyKind::text;
    std::string default_value; ///< empty: no default
    bool required = false;
    std::string help;
    std::vector<std::string> choices; ///< allowed values for text keys, empty: any
};

namespace config_detail {

inline KeySpec real(std::string name, std::string def, std::string help) {
    return {std::move(name), KeyKind::real, std::move(def), false, std::move(help), {}};
}
inline KeySpec integer(std::string name, std::string def, std::string help) {
    return {std::move(name), KeyKind::integer, std::move(def), false, std::move(help), {}};
}
inline KeySpec text(std::string name, std::string def, std::string help, std::vector<std::string> choices = {}) {
    return {std::move(name), KeyKind::text, std::move(def), false, std::move(help), std::move(choices)};
}
inline KeySpec flag(std::string name, std::string help) {
    return {std::move(name), KeyKind::flag, "", false, std::move(help), {}};
}
inline KeySpec required(KeySpec k) {
    k.required = true;
    return k;
}

inline std::vector<KeySpec> rough_p_key() { return {real("p", "2.5", "rough path exponent, 2 <= p < 3")}; }

inline std::vector<KeySpec> driver_keys() {
    return {required(text("driver", "", "path or rough path CSV, or brownian:seed,n,d[,T] / brownian:n,d[,T]")),
            text("field", "sin", "vector field", {"constant", "linear", "sin", "custom-table"}),
            real("field-param", "1", "c for constant, a for linear"),
            text("table", "", "CSV with columns y,f for custom-table"),
            real("y0", "1", "initial value"),
            integer("mesh", "1", "stride through the driver grid")};
}

inline std::vector<KeySpec> heat_keys() {
    return {integer("nx", "128", "grid points on the periodic unit interval"),
            real("dt", "0", "time step (default dx^2 / 4)"),
            real("T", "0.02", "horizon"),
            integer("nu", "1", "diffusion switch 0 or 1"),
            text("V", "0.5", "constant velocity or CSV of grid values"),
            text("driver", "brownian", "rough path CSV or brownian[:seed[,d]] on the dt grid"),
            text("u0", "sin", "initial datum: sin, bump or CSV of grid values"),
            flag("force", "step even when the diffusive CFL condition fails"),
            integer("snapshots", "11", "number of stored snapshots")};
}

template <class... Lists>
std::vector<KeySpec> join(Lists... lists) {
    std::vector<KeySpec> out;
    (out.insert(out.end(), lists.begin(), lists.end()), ...);
    return out;
}

} // namespace config_detail

/// Declared keys per subcommand. `seed`, `output` and `config` exist for all.
inline const std::map<std::string, std::vector<KeySpec>>& subcommand_keys() {
    using namespace config_detail;
    static const std::map<std::string, std::vector<KeySpec>> keys{
        {"lift",
         join(std::vector<KeySpec>{required(text("driver", "", "path CSV or brownian:seed,n,d[,T]")),
                                   flag("all-pairs", "write every grid pair instead of consecutive steps")},
              rough_p_key())},
        {"pvar",
         {required(text("input", "", "path CSV, or rough path CSV with --two-index")),
          required(real("p", "", "variation exponent, p >= 1")), real("from", "", "left end (default first time)"),
          real("to", "", "right end (default last time)"),
          flag("two-index", "take the variation of the level-2 map of a rough path CSV"),
          flag("table", "write the control table s,t,omega")}},
        {"gronwall-check",
         {required(text("g", "", "CSV t,G")), required(text("omega1", "", "CSV s,t,omega or pvar:<path.csv>:<q>[:<scale>]")),
          text("omega2", "zero", "CSV s,t,omega, pvar:<path.csv>:<q>[:<scale>] or zero"),
          required(real("C", "", "hypothesis constant, > 0")), required(real("L", "", "smallness threshold, > 0")),
          required(real("kappa", "", "exponent, >= 1"))}},
        {"solve-rde", join(driver_keys(), rough_p_key(), std::vector<KeySpec>{integer("depth", "6", "scaling report depth")})},
        {"solve-reflected",
         join(driver_keys(), rough_p_key(),
              std::vector<KeySpec>{text("scheme", "projection", "reflection scheme", {"projection", "penalized"}),
                                   real("epsilon", "", "penalization parameter (default sqrt(h))")})},
        {"uniqueness-probe",
         join(driver_keys(), rough_p_key(),
              std::vector<KeySpec>{text("strides", "16,8,4,2,1", "comma separated strides, coarse to fine"),
                                   real("epsilon-factor", "1", "epsilon = factor * sqrt(h)")})},
        {"solve-heat", join(heat_keys(), rough_p_key())},
        {"energy-check",
         join(heat_keys(), rough_p_key(),
              std::vector<KeySpec>{real("C", "", "Gronwall constant (default: fitted on this run)"),
                                   real("L", "", "smallness threshold (default: >= 4 greedy intervals)"),
                                   integer("max-observations", "257", "observation grid size cap")})},
        {"run-all", {text("suite", "smoke", "experiment suite", {"smoke", "acceptance"})}},
    };
    return keys;
}

namespace config_detail {

inline std::string valid_keys(const std::string& sub) {
    std::string out = "config, output, seed";
    for (const auto& k : subcommand_keys().at(sub)) {
        out += ", " + k.name;
    }
    return out;
}

inline std::string valid_subcommands() {
    std::string out;
    for (const auto& [name, keys] : subcommand_keys()) {
        out += (out.empty() ? "" : ", ") + name;
    }
    return out;
}

inline CLI::Validator rough_exponent() {
    return CLI::Validator(
        [](std::string& v) -> std::string {
            try {
                const double p = std::stod(v);
                if (p >= 2.0 && p < 3.0) {
                    return {};
                }
            } catch (const std::logic_error&) {
                return "p expects a real number, got '" + v + "'";
            }
            return "p must lie in [2, 3), got " + v;
        },
        "in [2,3)");
}

} // namespace config_detail

/// Parses `args` = {subcommand, flags...}. A `--config FILE` of `key = value`
/// lines supplies values; command-line flags take precedence. Unknown keys,
/// values of the wrong type and missing required keys raise ConfigError.
inline ExperimentConfig parse_config(std::span<const std::string> args) {
    using namespace config_detail;
    if (args.empty()) {
        throw ConfigError("missing subcommand; expected one of: " + valid_subcommands());
    }
    const std::string sub = args.front();
    const auto found = subcommand_keys().find(sub);
    if (found == subcommand_keys().end()) {
        throw ConfigError("unknown subcommand '" + sub + "'; expected one of: " + valid_subcommands());
    }
    CLI::App app("roughgron " + sub, "roughgron " + sub);
    app.set_config("--config", "", "file of key = value lines");
    app.allow_config_extras(CLI::config_extras_mode::error);
    // values such as brownian:1,64,1 are single strings, not arrays
    app.get_config_formatter_base()->arrayDelimiter(';');

    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string seed_text = "0";
    std::string output = ".";
    app.add_option("--seed", seed_text, "random seed")->check(CLI::NonNegativeNumber);
    app.add_option("--output", output, "output directory");
    for (const auto& key : found->second) {
        if (key.kind == KeyKind::flag) {
            flags[key.name] = false;
            app.add_flag("--" + key.name, flags[key.name], key.help);
            continue;
        }
        std::string& slot = values[key.name];
        CLI::Option* opt = app.add_option("--" + key.name, slot, key.help);
        if (!key.default_value.empty()) {
            slot = key.default_value;
            opt->capture_default_str();
        }
        if (key.required) {
            opt->required();
        }
        if (key.name == "p" && sub != "pvar") {
            opt->check(rough_exponent());
        } else if (key.kind == KeyKind::real) {
            opt->check(CLI::Number);
        } else if (key.kind == KeyKind::integer) {
            opt->check(CLI::NonNegativeNumber & CLI::TypeValidator<std::uint64_t>());
        } else if (!key.choices.empty()) {
            opt->check(CLI::IsMember(key.choices));
        }
    }

    std::vector<std::string> rest(args.begin() + 1, args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ConfigError& e) {
        throw ConfigError(std::string(e.what()) + "; valid keys: " + valid_keys(sub));
    } catch (const CLI::ExtrasError& e) {
        throw ConfigError(std::string(e.what()) + "; valid keys: " + valid_keys(sub));
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    ExperimentConfig cfg;
    cfg.subcommand = sub;
    cfg.output_dir = output;
    try {
        cfg.seed = std::stoull(seed_text);
    } catch (const std::logic_error&) {
        throw ConfigError("seed expects a nonnegative integer, got '" + seed_text + "'");
    }
    for (auto& [name, v] : values) {
        if (!v.empty()) {
            cfg.params[name] = v;
        }
    }
    for (const auto& [name, on] : flags) {
        if (on) {
            cfg.params[name] = "true";
        }
    }
    return cfg;
}

inline std::string usage() {
    std::ostringstream os;
    os << "usage: roughgron <subcommand> [--config FILE] [--key value ...]\n\nsubcommands:\n";
    for (const auto& [name, keys] : subcommand_keys()) {
        os << "  " << name << ": " << config_detail::valid_keys(name) << '\n';
    }
    return os.str();
}

} // namespace roughgron
