// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: configuration parsing, run orchestration and the
// CSV / JSON output schemas. Requires CLI11.hpp and json.hpp on the include path.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <unistd.h>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chain_escape/asymptotics.hpp"
#include "chain_escape/energy.hpp"
#include "chain_escape/equilibrium.hpp"
#include "chain_escape/integrator.hpp"
#include "chain_escape/spectral.hpp"

namespace chain_escape::cli {

enum class InitialCondition { zero, equilibrium, file };
enum class Method { spectral, verlet };
enum class Format { csv, json };

struct RunConfig {
    std::string command;
    LatticeParams params;
    InitialCondition ic = InitialCondition::zero;
    std::string ic_path;
    Method method = Method::spectral;
    long half_width = 512;
    double t_end = 200.0;
    double dt = 0.0;  ///< resolved to 0.1 / Omega_max when not given
    long stride = 100;
    long window_N = 10;
    std::size_t nodes = 0;  ///< spectral nodes, 0 = automatic
    long site = 0;          ///< site k for the asymptotics scan
    std::vector<double> times;
    std::string output = "-";
    Format format = Format::csv;
};

inline const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names{"equilibrium", "evolve", "energy-scan", "asymptotics", "escape"};
    return names;
}

namespace detail {

inline Error usage(const std::string& msg) { return Error(ErrorKind::usage, msg); }

inline void validate(RunConfig& c, bool dt_given)
{
    try {
        c.params.validate();
    } catch (const Error& e) {
        throw usage(std::string("invalid parameters: ") + e.what());
    }
    if (!dt_given) c.dt = default_dt(c.params);
    if (c.half_width < 1) throw usage("half_width must be >= 1");
    if (c.window_N < 0) throw usage("window_N must be >= 0");
    if (c.stride < 1) throw usage("stride must be >= 1");
    if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) throw usage("t_end must be finite and >= 0");
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw usage("dt must be > 0");
    if (c.method == Method::verlet && !(c.dt < verlet_stability_bound(c.params)))
        throw usage("method=verlet requires dt < 2/sqrt(4 omega^2 + omega0^2) = " +
                    std::to_string(verlet_stability_bound(c.params)));
    if (c.ic == InitialCondition::file && c.ic_path.empty()) throw usage("ic=file requires --ic-file");
    const bool evolves = c.command != "equilibrium";
    if (evolves && c.window_N > c.half_width) throw usage("window_N must not exceed half_width");
    if (evolves && c.ic != InitialCondition::file) {
        const long need = required_half_width(c.params, c.window_N, c.t_end);
        if (c.half_width < need)
            throw usage("half_width >= window_N + ceil(omega * t_end) + 8 violated: need " + std::to_string(need) +
                        ", got " + std::to_string(c.half_width));
    }
    if (c.nodes != 0 && c.nodes < 2 * static_cast<std::size_t>(2 * c.half_width + 1))
        throw usage("nodes must be 0 (auto) or >= 2 * (2 * half_width + 1)");
    for (double t : c.times)
        if (!(t > 0.0)) throw usage("asymptotic sample times must be > 0");
}

}  // namespace detail

/// Parses arguments (without the program name). Values from --config
/// (key=value lines) are overridden by explicit flags; unknown keys are errors.
[[nodiscard]] inline RunConfig parse_config(const std::vector<std::string>& args)
{
    RunConfig c;
    CLI::App app{"Pinned harmonic chain with a constant force on site 0"};
    app.set_config("--config", "", "key=value configuration file");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::string ic = "zero", method = "spectral", format = "csv";
    auto* dt_opt = app.add_option("--dt", c.dt, "Verlet step (default 0.1/Omega_max); spectral sample unit");
    app.add_option("--a", c.params.a, "lattice spacing");
    app.add_option("--omega", c.params.omega, "coupling frequency");
    app.add_option("--omega0", c.params.omega0, "pinning frequency");
    app.add_option("--f", c.params.f, "force on site 0");
    app.add_option("--ic", ic, "initial condition")->check(CLI::IsMember({"zero", "equilibrium", "file"}));
    app.add_option("--ic-file", c.ic_path, "JSON state file for --ic file");
    app.add_option("--method", method, "time evolution route")->check(CLI::IsMember({"spectral", "verlet"}));
    app.add_option("--half-width", c.half_width, "window half-width");
    app.add_option("--t-end", c.t_end, "final time");
    app.add_option("--stride", c.stride, "steps between samples");
    app.add_option("--window-N", c.window_N, "escape window half-width N");
    app.add_option("--nodes", c.nodes, "spectral nodes (0 = auto)");
    app.add_option("--k", c.site, "site for the asymptotics scan");
    app.add_option("--times", c.times, "sample times for the asymptotics scan");
    app.add_option("--output,-o", c.output, "output path ('-' = stdout)");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    for (const auto& name : subcommands()) app.add_subcommand(name)->fallthrough();
    app.require_subcommand(0, 1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw Error(ErrorKind::usage, e.what());
    }
    for (const auto* sub : app.get_subcommands()) c.command = sub->get_name();
    c.ic = ic == "zero" ? InitialCondition::zero : ic == "equilibrium" ? InitialCondition::equilibrium : InitialCondition::file;
    c.method = method == "verlet" ? Method::verlet : Method::spectral;
    c.format = format == "json" ? Format::json : Format::csv;
    detail::validate(c, dt_opt->count() > 0);
    return c;
}

// ---------------------------------------------------------------------------
// State files

[[nodiscard]] inline nlohmann::json state_to_json(const LatticeState& s, const LatticeParams& p)
{
    return {{"lo", s.lo},
            {"hi", s.hi},
            {"t", s.t},
            {"q", s.q},
            {"v", s.v},
            {"params", {{"a", p.a}, {"omega", p.omega}, {"omega0", p.omega0}, {"f", p.f}}}};
}

[[nodiscard]] inline LatticeState state_from_json(const nlohmann::json& j)
{
    try {
        LatticeState s(j.at("lo").get<long>(), j.at("hi").get<long>(), j.at("t").get<double>());
        s.q = j.at("q").get<std::vector<double>>();
        s.v = j.at("v").get<std::vector<double>>();
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::io, std::string("malformed state file: ") + e.what());
    }
}

[[nodiscard]] inline LatticeState read_state_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open state file " + path);
    try {
        return state_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::io, "cannot parse state file " + path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Tables

/// Shortest decimal that round-trips to the same double.
[[nodiscard]] inline std::string format_number(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json meta = nlohmann::json::object();

    [[nodiscard]] std::string to_csv() const
    {
        std::string out = "# chain-escape v1 " + command + "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += format_number(row[i]);
            }
            out += '\n';
        }
        return out;
    }

    [[nodiscard]] std::string to_json() const
    {
        nlohmann::json j = {{"schema", "chain-escape v1 " + command}, {"columns", columns}, {"rows", rows}};
        if (!meta.empty()) j["meta"] = meta;
        return j.dump(1) + "\n";
    }
};

/// Writes via a temporary file in the same directory followed by rename.
inline void write_output(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) throw Error(ErrorKind::io, "write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::io, "cannot move output into place at " + path);
    }
}

// ---------------------------------------------------------------------------
// Orchestration

[[nodiscard]] inline LatticeState initial_state(const RunConfig& c)
{
    switch (c.ic) {
    case InitialCondition::file: return read_state_file(c.ic_path);
    case InitialCondition::equilibrium:
        return equilibrium_state(xi_profile(c.params, -c.half_width, c.half_width));
    case InitialCondition::zero: break;
    }
    return LatticeState::zeros(c.half_width);
}

[[nodiscard]] inline Trajectory simulate(const RunConfig& c, const LatticeState& init)
{
    const auto b = default_boundary(c.params, init.lo, init.hi);
    if (c.t_end < init.t)
        throw Error(ErrorKind::configuration, "t_end precedes the initial state's time stamp");
    if (c.method == Method::verlet) return evolve_verlet(c.params, init, c.t_end, c.dt, c.stride, b, c.window_N);
    std::size_t nodes = c.nodes;
    if (nodes != 0 && nodes < 2 * init.size()) throw Error(ErrorKind::aliasing, "nodes too small for the state window");
    auto traj = spectral_trajectory(c.params, init, c.t_end, c.dt * static_cast<double>(c.stride), b, nodes);
    check_padding(traj, c.window_N, c.t_end - init.t);
    return traj;
}

[[nodiscard]] inline Table equilibrium_table(const RunConfig& c)
{
    const auto prof = xi_profile(c.params, -c.half_width, c.half_width);
    const auto res = xi_residual(prof);
    Table t{"equilibrium", {"k", "xi", "residual"}, {}, {{"C", prof.C}, {"U_xi", prof.U_xi}}};
    for (long k = prof.lo; k <= prof.hi; ++k) {
        const auto i = static_cast<std::size_t>(k - prof.lo);
        t.rows.push_back({static_cast<double>(k), prof.xi[i], res[i]});
    }
    return t;
}

[[nodiscard]] inline Table evolve_table(const Trajectory& traj)
{
    Table t{"evolve", {"t", "k", "q", "v"}, {}, {}};
    for (const auto& s : traj.samples)
        for (long k = s.lo; k <= s.hi; ++k) t.rows.push_back({s.t, static_cast<double>(k), s.q_at(k), s.v_at(k)});
    return t;
}

[[nodiscard]] inline Table energy_scan_table(const RunConfig& c, const Trajectory& traj)
{
    Table t{"energy-scan", {"t", "k", "T_k", "U_k", "H_k"}, {}, {}};
    for (const auto& s : traj.samples)
        for (const auto& e : particle_energies(c.params, s, -c.window_N, c.window_N, traj.boundary))
            t.rows.push_back({s.t, static_cast<double>(e.k), e.T, e.U, e.H});
    return t;
}

[[nodiscard]] inline Table escape_table(const RunConfig& c, const Trajectory& traj)
{
    const auto series = escape_series(traj, c.window_N);
    Table t{"escape", {"t", "H_window", "tail", "H_total", "H_hom"}, {}, {}};
    for (const auto& r : series.rows) t.rows.push_back({r.t, r.window, r.tail, r.total, r.homogeneous});
    return t;
}

[[nodiscard]] inline std::vector<double> asymptotic_times(const RunConfig& c)
{
    if (!c.times.empty()) return c.times;
    std::vector<double> times;
    for (double t = 25.0; t <= c.t_end * (1.0 + 1e-12); t *= 2.0) times.push_back(t);
    if (times.empty()) times.push_back(c.t_end);
    return times;
}

[[nodiscard]] inline Table asymptotics_table(const RunConfig& c, const LatticeState& init)
{
    const auto times = asymptotic_times(c);
    const auto rows = residual_scan(c.params, init, c.site, times, c.nodes);
    Table t{"asymptotics", {"t", "zeta_exact", "zeta_pred", "scaled_residual"}, {}, {{"k", c.site}}};
    for (const auto& r : rows) t.rows.push_back({r.t, r.exact, r.predicted, r.scaled_residual});
    return t;
}

inline void report_warnings(const std::vector<std::string>& warnings, std::ostream& err)
{
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

/// Executes one configured run and writes its output.
inline void run(const RunConfig& c, std::ostream& err = std::cerr)
{
    if (c.command.empty())
        throw Error(ErrorKind::usage, "missing subcommand (equilibrium, evolve, energy-scan, asymptotics, escape)");
    if (c.command == "equilibrium") {
        const auto table = equilibrium_table(c);
        write_output(c.output, c.format == Format::csv ? table.to_csv() : table.to_json());
        return;
    }
    const LatticeState init = initial_state(c);
    if (c.command == "asymptotics") {
        const auto table = asymptotics_table(c, init);
        write_output(c.output, c.format == Format::csv ? table.to_csv() : table.to_json());
        return;
    }
    const Trajectory traj = simulate(c, init);
    report_warnings(traj.warnings, err);
    if (c.command == "evolve") {
        if (c.format == Format::json) {
            write_output(c.output, state_to_json(traj.samples.back(), c.params).dump(1) + "\n");
        } else {
            write_output(c.output, evolve_table(traj).to_csv());
        }
        return;
    }
    const Table table = c.command == "escape" ? escape_table(c, traj) : energy_scan_table(c, traj);
    write_output(c.output, c.format == Format::csv ? table.to_csv() : table.to_json());
}

/// Full CLI entry point; returns the process exit status.
inline int main(const std::vector<std::string>& args, std::ostream& err = std::cerr)
{
    if (std::find(args.begin(), args.end(), "--help") != args.end() ||
        std::find(args.begin(), args.end(), "-h") != args.end()) {
        err << "usage: chain_escape <equilibrium|evolve|energy-scan|asymptotics|escape> [--config FILE] [options]\n"
               "options: --a --omega --omega0 --f --ic {zero,equilibrium,file} --ic-file PATH\n"
               "         --method {spectral,verlet} --half-width --t-end --dt --stride --window-N\n"
               "         --nodes --k --times T... --output PATH --format {csv,json}\n";
        return 0;
    }
    try {
        run(parse_config(args), err);
        return 0;
    } catch (const Error& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: " << to_string(e.kind()) << ": " << msg << '\n';
        return e.kind() == ErrorKind::usage ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace chain_escape::cli
