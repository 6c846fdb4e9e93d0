#pragma once

// Subcommand implementations for the roughgron executable. Each command
// reads its inputs, writes CSV files into the output directory and returns
// the process exit code: 0 pass, 1 failure, 2 usage error.

#include "roughgron/config.hpp"
#include "roughgron/csv.hpp"
#include "roughgron/errors.hpp"
#include "roughgron/experiments.hpp"
#include "roughgron/gronwall.hpp"
#include "roughgron/rde.hpp"
#include "roughgron/reflected.hpp"
#include "roughgron/rough_core.hpp"
#include "roughgron/rpde_heat.hpp"
#include "roughgron/variation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace roughgron::cli {

namespace fs = std::filesystem;

enum ExitCode : int { pass = 0, failure = 1, usage_error = 2 };

inline std::ifstream open_input(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open '" + path + "'");
    }
    return is;
}

inline std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    const fs::path target = cfg.output_dir / name;
    std::ofstream os(target, std::ios::binary);
    if (!os) {
        throw ConfigError("cannot write '" + target.string() + "'");
    }
    return os;
}

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& field : csv::split(text)) {
        out.push_back(csv::parse_number(field));
    }
    return out;
}

inline std::vector<std::string> header_of(const std::string& path) {
    std::ifstream is = open_input(path);
    std::string line;
    std::getline(is, line);
    return csv::split(line);
}

/// `brownian:seed,n,d[,T]`, `brownian:n,d[,T]` (seed from the config), a
/// rough path CSV (header starting s,t) or a path CSV lifted piecewise
/// linearly.
inline RoughPath load_driver(const std::string& spec, double p, std::uint64_t seed) {
    const std::string prefix = "brownian:";
    if (spec.rfind(prefix, 0) == 0) {
        const auto nums = parse_list(spec.substr(prefix.size()));
        std::uint64_t s = seed;
        std::size_t at = 0;
        if (nums.size() == 3 || nums.size() == 4) {
            s = static_cast<std::uint64_t>(nums[0]);
            at = 1;
        } else if (nums.size() != 2) {
            throw ConfigError("brownian driver expects seed,n,d[,T] or n,d");
        }
        const auto n = static_cast<std::size_t>(nums[at]);
        const auto d = static_cast<std::size_t>(nums[at + 1]);
        const double horizon = nums.size() > at + 2 ? nums[at + 2] : 1.0;
        return brownian_sample_lift(s, n, d, horizon, p).second;
    }
    const auto header = header_of(spec);
    std::ifstream is = open_input(spec);
    if (header.size() >= 2 && header[0] == "s" && header[1] == "t") {
        return csv::read_rough_path(is, p);
    }
    return lift_piecewise_linear(csv::read_path(is), p);
}

inline VectorField load_field(const ExperimentConfig& cfg, std::size_t noise_dim) {
    const std::string& name = cfg.text("field");
    const double param = cfg.real("field-param");
    if (name == "constant") {
        return fields::constant(param, noise_dim);
    }
    if (name == "linear") {
        return fields::linear(param, noise_dim);
    }
    if (name == "sin") {
        return fields::sine(noise_dim);
    }
    if (!cfg.has("table")) {
        throw ConfigError("field custom-table needs --table");
    }
    std::ifstream is = open_input(cfg.text("table"));
    const csv::Table t = csv::read_table(is);
    if (t.header.size() != 2) {
        throw ConfigError("custom-table CSV needs two columns y,f");
    }
    std::vector<double> nodes, values;
    for (const auto& row : t.rows) {
        nodes.push_back(row[0]);
        values.push_back(row[1]);
    }
    return fields::tabulated(std::move(nodes), std::move(values), noise_dim);
}

inline std::vector<std::size_t> mesh_of(const ExperimentConfig& cfg, const RoughPath& rp) {
    return strided_subgrid(rp.size(), static_cast<std::size_t>(cfg.integer("mesh")));
}

inline void certificate_block(std::ostream& os, const GronwallCertificate& c, double observed_sup,
                              const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    os << "certificate {\n";
    for (const auto& [k, v] : extra) {
        os << "  " << k << " = " << v << '\n';
    }
    os << "  alpha = " << csv::format_number(c.alpha) << '\n'
       << "  bound = " << csv::format_number(c.bound) << '\n'
       << "  observed_sup = " << csv::format_number(observed_sup) << '\n'
       << "  hypothesis_worst_defect = " << csv::format_number(c.hypothesis_worst_defect) << '\n'
       << "  tolerance = " << csv::format_number(c.tolerance) << '\n'
       << "  pairs_checked = " << c.binding_pairs_checked << '\n'
       << "  pairs_skipped = " << c.pairs_skipped << '\n'
       << "  applicable = " << (c.applicable ? "true" : "false") << '\n'
       << "}\n";
}

inline int cmd_lift(const ExperimentConfig& cfg, std::ostream& out) {
    const RoughPath rp = load_driver(cfg.text("driver"), cfg.real("p"), cfg.seed);
    auto os = open_output(cfg, "rough_path.csv");
    csv::write_rough_path(os, rp, cfg.flag("all-pairs"));
    double chen = 0.0;
    for (std::size_t k = 0; k + 2 < rp.size(); ++k) {
        chen = std::max(chen, chen_defect_at(rp, 0, k + 1, rp.size() - 1) / chen_scale(rp, 0, k + 1, rp.size() - 1));
    }
    out << "lifted " << rp.size() << " points in dimension " << rp.dim() << "; max relative Chen defect "
        << csv::format_number(chen) << '\n';
    return pass;
}

inline int cmd_pvar(const ExperimentConfig& cfg, std::ostream& out) {
    const double p = cfg.real("p");
    require_variation_exponent(p);
    std::ifstream is = open_input(cfg.text("input"));
    std::vector<double> times;
    Control control = Control::zero({0.0, 1.0});
    if (cfg.flag("two-index")) {
        auto rp = std::make_shared<const RoughPath>(csv::read_rough_path(is, 2.5));
        times.assign(rp->times().begin(), rp->times().end());
        control = control_from_pvar_2index(
            times, [rp](std::size_t i, std::size_t j) { return rp->level2_norm(i, j); }, p, "level2");
    } else {
        const SampledPath path = csv::read_path(is);
        times.assign(path.times().begin(), path.times().end());
        control = control_from_pvar(path, p);
    }
    const std::size_t i0 = cfg.has("from") ? grid_index(times, cfg.real("from")) : 0;
    const std::size_t i1 = cfg.has("to") ? grid_index(times, cfg.real("to")) : times.size() - 1;
    if (i1 < i0) {
        throw DomainError("pvar needs from <= to");
    }
    out << "pvar " << csv::format_number(std::pow(control(i0, i1), 1.0 / p)) << '\n';
    if (cfg.flag("table")) {
        auto os = open_output(cfg, "pvar_control.csv");
        csv::write_header(os, {"s", "t", "omega"});
        for (std::size_t i = i0; i <= i1; ++i) {
            for (std::size_t j = i + 1; j <= i1; ++j) {
                const std::array<double, 3> row{times[i], times[j], control(i, j)};
                csv::write_row(os, row);
            }
        }
    }
    return pass;
}

/// A control on `grid` read from an `s,t,omega` table (every pair needed),
/// from `pvar:<path.csv>:<q>[:<scale>]`, or `zero`.
inline Control load_control(const std::string& spec, const std::vector<double>& grid) {
    if (spec == "zero") {
        return Control::zero(grid);
    }
    if (spec.rfind("pvar:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(spec.substr(5));
        for (std::string part; std::getline(ss, part, ':');) {
            parts.push_back(part);
        }
        if (parts.size() < 2 || parts.size() > 3) {
            throw ConfigError("control spec expects pvar:<path.csv>:<q>[:<scale>]");
        }
        std::ifstream is = open_input(parts[0]);
        const SampledPath path = csv::read_path(is);
        if (path.size() != grid.size()) {
            throw ConfigError("control path and G must share the time grid");
        }
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (std::abs(path.times()[k] - grid[k]) > 1e-12 * (1.0 + std::abs(grid[k]))) {
                throw ConfigError("control path and G must share the time grid");
            }
        }
        const Control base = control_from_pvar(path, csv::parse_number(parts[1]));
        const double scale = parts.size() == 3 ? csv::parse_number(parts[2]) : 1.0;
        return experiments::scaled_control(base, scale, "pvar");
    }
    std::ifstream is = open_input(spec);
    const csv::Table t = csv::read_table(is);
    if (t.header.size() != 3) {
        throw ConfigError("control CSV needs columns s,t,omega");
    }
    const std::size_t n = grid.size();
    auto values = std::make_shared<std::vector<double>>(n * n, std::nan(""));
    for (const auto& row : t.rows) {
        const std::size_t i = grid_index(grid, row[0]);
        const std::size_t j = grid_index(grid, row[1]);
        (*values)[i * n + j] = row[2];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::isnan((*values)[i * n + j])) {
                throw ConfigError("control CSV misses the pair (" + csv::format_number(grid[i]) + ", " +
                                  csv::format_number(grid[j]) + ")");
            }
        }
    }
    return Control(grid, [values, n](std::size_t i, std::size_t j) { return (*values)[i * n + j]; }, "table");
}

inline int cmd_gronwall_check(const ExperimentConfig& cfg, std::ostream& out) {
    std::ifstream is = open_input(cfg.text("g"));
    const csv::Table t = csv::read_table(is);
    if (t.header.size() != 2) {
        throw ConfigError("G CSV needs columns t,G");
    }
    std::vector<double> grid, G;
    for (const auto& row : t.rows) {
        grid.push_back(row[0]);
        G.push_back(row[1]);
    }
    GronwallInput in{G,
                     load_control(cfg.text("omega1"), grid),
                     load_control(cfg.text("omega2"), grid),
                     cfg.real("C"),
                     cfg.real("L"),
                     cfg.real("kappa")};
    const GronwallVerdict v = gronwall_verify(in);
    out << (v.holds ? "PASS" : "FAIL") << ": hypothesis " << (v.certificate.applicable ? "holds" : "fails")
        << ", sup G " << csv::format_number(v.observed_sup) << " vs bound " << csv::format_number(v.certificate.bound)
        << '\n';
    certificate_block(out, v.certificate, v.observed_sup);
    auto os = open_output(cfg, "certificate.txt");
    certificate_block(os, v.certificate, v.observed_sup);
    return v.holds ? pass : failure;
}

inline int cmd_solve_rde(const ExperimentConfig& cfg, std::ostream& out) {
    const RoughPath rp = load_driver(cfg.text("driver"), cfg.real("p"), cfg.seed);
    const VectorField vf = load_field(cfg, rp.dim());
    const RDESolution sol = solve_step2(vf, rp, Eigen::VectorXd::Constant(1, cfg.real("y0")), mesh_of(cfg, rp));
    {
        auto os = open_output(cfg, "trajectory.csv");
        csv::write_header(os, {"t", "y_1"});
        for (std::size_t k = 0; k < sol.y.size(); ++k) {
            const std::array<double, 2> row{sol.times[k], sol.y[k][0]};
            csv::write_row(os, row);
        }
    }
    if (sol.truncated) {
        out << "solution truncated: " << sol.diagnostic << '\n';
        return failure;
    }
    const auto rows = remainder_scaling_report(sol, vf, rp, static_cast<std::size_t>(cfg.integer("depth")));
    auto os = open_output(cfg, "scaling.csv");
    csv::write_header(os, {"depth", "sup_ratio"});
    for (const auto& r : rows) {
        const std::array<double, 2> row{static_cast<double>(r.depth), r.sup_ratio};
        csv::write_row(os, row);
    }
    out << "solved " << sol.y.size() - 1 << " steps; y_T = " << csv::format_number(sol.y.back()[0]) << '\n';
    return pass;
}

inline int cmd_solve_reflected(const ExperimentConfig& cfg, std::ostream& out) {
    const RoughPath rp = load_driver(cfg.text("driver"), cfg.real("p"), cfg.seed);
    const VectorField vf = load_field(cfg, rp.dim());
    const auto mesh = mesh_of(cfg, rp);
    const double y0 = cfg.real("y0");
    auto os = open_output(cfg, "trajectory.csv");
    csv::write_header(os, {"t", "y", "m"});
    auto dump = [&](std::span<const double> t, std::span<const double> y, std::span<const double> m) {
        for (std::size_t k = 0; k < t.size(); ++k) {
            const std::array<double, 3> row{t[k], y[k], m[k]};
            csv::write_row(os, row);
        }
    };
    if (cfg.text("scheme") == "projection") {
        const ReflectedSolution sol = solve_reflected_step2(vf, rp, y0, mesh);
        dump(sol.times, sol.y, sol.m);
        out << "projection scheme: m_T = " << csv::format_number(sol.m.back()) << ", complementarity defect "
            << csv::format_number(complementarity_defect(sol)) << '\n';
        return pass;
    }
    double h = 0.0;
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        h = std::max(h, rp.times()[mesh[k + 1]] - rp.times()[mesh[k]]);
    }
    const double eps = cfg.has("epsilon") ? cfg.real("epsilon") : std::sqrt(h);
    const PenalizedSolution sol = solve_reflected_penalized(vf, rp, y0, mesh, eps);
    dump(sol.times, sol.y, sol.m);
    out << "penalized scheme: epsilon = " << csv::format_number(eps) << ", min y "
        << csv::format_number(*std::min_element(sol.y.begin(), sol.y.end())) << '\n';
    if (sol.stability_warning) {
        out << "warning: h / epsilon > 1 on some step\n";
    }
    return pass;
}

inline int cmd_uniqueness_probe(const ExperimentConfig& cfg, std::ostream& out) {
    const RoughPath rp = load_driver(cfg.text("driver"), cfg.real("p"), cfg.seed);
    const VectorField vf = load_field(cfg, rp.dim());
    std::vector<std::size_t> strides;
    for (double s : parse_list(cfg.text("strides"))) {
        if (!(s >= 1.0) || s != std::floor(s)) {
            throw ConfigError("strides must be positive integers");
        }
        strides.push_back(static_cast<std::size_t>(s) * static_cast<std::size_t>(cfg.integer("mesh")));
    }
    const auto rows = uniqueness_probe(vf, rp, cfg.real("y0"), strides, cfg.real("epsilon-factor"));
    auto os = open_output(cfg, "probe.csv");
    csv::write_header(os, {"h", "sup_distance"});
    bool trend = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::array<double, 2> row{rows[k].h, rows[k].sup_distance};
        csv::write_row(os, row);
        out << "h = " << csv::format_number(rows[k].h) << "  sup distance = " << csv::format_number(rows[k].sup_distance)
            << '\n';
        if (k > 0) {
            trend = trend && rows[k].sup_distance <= 1.2 * rows[k - 1].sup_distance;
        }
    }
    trend = trend && rows.back().sup_distance <= 0.2 * rows.front().sup_distance;
    out << (trend ? "PASS" : "FAIL") << ": distances " << (trend ? "decrease" : "do not decrease") << " in trend\n";
    return trend ? pass : failure;
}

struct HeatProblem {
    PeriodicGrid grid;
    GridDriver driver;
    Eigen::VectorXd u0;
    double nu;
};

inline Eigen::VectorXd grid_column(const std::string& path, std::size_t nx, std::size_t column_from_end = 0) {
    std::ifstream is = open_input(path);
    const csv::Table t = csv::read_table(is);
    if (t.rows.size() != nx) {
        throw ConfigError("'" + path + "' needs one row per grid point (" + std::to_string(nx) + ")");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(nx));
    const std::size_t col = t.header.size() - 1 - std::min(column_from_end, t.header.size() - 1);
    for (std::size_t i = 0; i < nx; ++i) {
        v[static_cast<Eigen::Index>(i)] = t.rows[i][col];
    }
    return v;
}

inline HeatProblem load_heat(const ExperimentConfig& cfg) {
    const PeriodicGrid grid(static_cast<std::size_t>(cfg.integer("nx")));
    const double p = cfg.real("p");
    const std::uint64_t nu_flag = cfg.integer("nu");
    if (nu_flag > 1) {
        throw ConfigError("nu must be 0 or 1");
    }
    double dt = cfg.real("dt");
    if (dt == 0.0) {
        dt = grid.dx * grid.dx / 4.0;
    }
    if (!(dt > 0.0)) {
        throw ConfigError("dt must be positive");
    }
    const std::string& spec = cfg.text("driver");
    RoughPath rp = [&] {
        if (spec.rfind("brownian", 0) == 0) {
            std::uint64_t seed = cfg.seed;
            std::size_t d = 1;
            if (spec.size() > 8) {
                if (spec[8] != ':') {
                    throw ConfigError("heat driver expects brownian[:seed[,d]]");
                }
                const auto nums = parse_list(spec.substr(9));
                if (nums.empty() || nums.size() > 2) {
                    throw ConfigError("heat driver expects brownian[:seed[,d]]");
                }
                seed = static_cast<std::uint64_t>(nums[0]);
                d = nums.size() == 2 ? static_cast<std::size_t>(nums[1]) : 1;
            }
            const auto steps = static_cast<std::size_t>(std::llround(cfg.real("T") / dt));
            return brownian_sample_lift(seed, std::max<std::size_t>(steps, 2), d, dt * static_cast<double>(std::max<std::size_t>(steps, 2)), p).second;
        }
        return load_driver(spec, p, cfg.seed);
    }();
    std::vector<Eigen::VectorXd> velocity;
    const std::string& vspec = cfg.text("V");
    double vconst = 0.0;
    bool is_number = true;
    try {
        vconst = cfg.real("V");
    } catch (const ConfigError&) {
        is_number = false;
    }
    for (std::size_t k = 0; k < rp.dim(); ++k) {
        velocity.push_back(is_number ? heat_profiles::constant(grid, vconst)
                                     : grid_column(vspec, grid.nx, rp.dim() - 1 - std::min(k, rp.dim() - 1)));
    }
    Eigen::VectorXd u0;
    const std::string& uspec = cfg.text("u0");
    if (uspec == "sin") {
        u0 = heat_profiles::sine(grid);
    } else if (uspec == "bump") {
        u0 = heat_profiles::bump(grid);
    } else {
        u0 = grid_column(uspec, grid.nx);
    }
    return {grid, build_transport_driver(grid, std::move(velocity), std::move(rp)), std::move(u0),
            static_cast<double>(nu_flag)};
}

inline RPDETrajectory run_heat(const ExperimentConfig& cfg, const HeatProblem& hp) {
    StepOptions opt;
    opt.force = cfg.flag("force");
    return solve_heat(hp.driver, hp.u0, hp.nu, opt);
}

inline int cmd_solve_heat(const ExperimentConfig& cfg, std::ostream& out) {
    const HeatProblem hp = load_heat(cfg);
    const RPDETrajectory traj = run_heat(cfg, hp);
    const std::size_t n = traj.u.size();
    const std::size_t snaps = std::max<std::size_t>(2, static_cast<std::size_t>(cfg.integer("snapshots")));
    {
        auto os = open_output(cfg, "snapshots.csv");
        std::vector<std::string> header{"t"};
        for (std::size_t i = 0; i < hp.grid.nx; ++i) {
            header.push_back("u_" + std::to_string(i + 1));
        }
        csv::write_header(os, header);
        std::size_t last = n;
        for (std::size_t s = 0; s < snaps; ++s) {
            const std::size_t k = s * (n - 1) / (snaps - 1);
            if (k == last) {
                continue;
            }
            last = k;
            std::vector<double> row{traj.times[k]};
            row.insert(row.end(), traj.u[k].data(), traj.u[k].data() + traj.u[k].size());
            csv::write_row(os, row);
        }
    }
    auto os = open_output(cfg, "energy.csv");
    csv::write_header(os, {"t", "G"});
    for (std::size_t k = 0; k < n; ++k) {
        const std::array<double, 2> row{traj.times[k], traj.G[k]};
        csv::write_row(os, row);
    }
    out << "solved " << n - 1 << " steps; G_0 = " << csv::format_number(traj.G.front())
        << ", G_T = " << csv::format_number(traj.G.back()) << ", max transport Courant number "
        << csv::format_number(traj.max_transport_courant) << '\n';
    if (traj.max_transport_courant > 1.0) {
        out << "warning: transport step exceeds the grid spacing\n";
    }
    return pass;
}

inline int cmd_energy_check(const ExperimentConfig& cfg, std::ostream& out) {
    const HeatProblem hp = load_heat(cfg);
    const RPDETrajectory traj = run_heat(cfg, hp);
    EnergyCheckOptions opt;
    opt.C = cfg.optional_real("C");
    opt.L = cfg.optional_real("L");
    opt.max_observations = std::max<std::size_t>(3, static_cast<std::size_t>(cfg.integer("max-observations")));
    const EnergyReport rep = energy_bound_check(traj, hp.driver, opt);
    const std::vector<std::pair<std::string, std::string>> extra{
        {"C", csv::format_number(rep.C) + (rep.C_fitted ? " (fitted)" : "")},
        {"L", csv::format_number(rep.L)},
        {"kappa", csv::format_number(rep.kappa)},
        {"omega_A_total", csv::format_number(rep.omega_A_total)},
        {"omega1_total", csv::format_number(rep.omega1_total)},
        {"binding_term", rep.binding_term},
        {"observations", std::to_string(rep.observations)},
        {"greedy_intervals", std::to_string(rep.greedy_intervals)},
    };
    out << (rep.holds ? "PASS" : "FAIL") << ": sup G " << csv::format_number(rep.observed_sup_G) << " vs bound "
        << csv::format_number(rep.certificate.bound) << '\n';
    certificate_block(out, rep.certificate, rep.observed_sup_G, extra);
    auto os = open_output(cfg, "certificate.txt");
    certificate_block(os, rep.certificate, rep.observed_sup_G, extra);
    return rep.holds ? pass : failure;
}

inline std::string criterion_line(const experiments::CriterionResult& r, bool with_time) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail;
    if (with_time) {
        os << " (" << std::fixed << std::setprecision(2) << r.seconds << " s)";
    }
    return os.str();
}

inline int cmd_run_all(const ExperimentConfig& cfg, std::ostream& out) {
    using namespace experiments;
    const Suite suite = parse_suite(cfg.text("suite"));
    auto results = run_criteria(suite, [&](const CriterionResult& r) { out << criterion_line(r, true) << '\n' << std::flush; });
    const SuiteFiles first = suite_files(results);
    const SuiteFiles second = suite_files(run_criteria(suite));
    CriterionResult det = determinism(first, second);
    out << criterion_line(det, false) << '\n';
    results.push_back(det);
    write_files(cfg.output_dir, suite_files(results));
    std::size_t failed = 0;
    for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
    }
    out << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? pass : failure;
}

/// Full command line (without the program name) to exit code.
inline int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    try {
        if (args.empty() || args.front() == "--help" || args.front() == "-h") {
            (args.empty() ? err : out) << usage();
            return args.empty() ? usage_error : pass;
        }
        const ExperimentConfig cfg = parse_config(args);
        static const std::map<std::string, std::function<int(const ExperimentConfig&, std::ostream&)>> table{
            {"lift", cmd_lift},
            {"pvar", cmd_pvar},
            {"gronwall-check", cmd_gronwall_check},
            {"solve-rde", cmd_solve_rde},
            {"solve-reflected", cmd_solve_reflected},
            {"uniqueness-probe", cmd_uniqueness_probe},
            {"solve-heat", cmd_solve_heat},
            {"energy-check", cmd_energy_check},
            {"run-all", cmd_run_all},
        };
        return table.at(cfg.subcommand)(cfg, out);
    } catch (const HelpRequested& h) {
        out << h.what();
        return pass;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return failure;
    }
}

} // namespace roughgron::cli
