#include "g0hs/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "g0hs/characteristics.hpp"
#include "g0hs/conserved.hpp"
#include "g0hs/decay.hpp"
#include "g0hs/errors.hpp"
#include "g0hs/evolution.hpp"
#include "g0hs/grid.hpp"
#include "g0hs/helmholtz.hpp"
#include "g0hs/kinks.hpp"
#include "g0hs/peakons.hpp"

namespace fs = std::filesystem;

namespace g0hs {

namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

// ---------------------------------------------------------------------
// config text -> key/value map
// ---------------------------------------------------------------------

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

/// Strict scalar parse: the whole token must be consumed and the value
/// must be finite.  Words like "inf"/"nan" fail the leading-character
/// test and fall through to text.
bool parse_scalar(const std::string& s, double* out) {
    if (s.empty()) return false;
    const char c = s[0];
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
        return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    if (!std::isfinite(v)) return false;
    *out = v;
    return true;
}

ConfigValue parse_value(const std::string& raw, int line) {
    if (raw.find(',') != std::string::npos) {
        std::vector<double> vals;
        size_t pos = 0;
        while (true) {
            const size_t comma = raw.find(',', pos);
            const std::string elem =
                trim(raw.substr(pos, comma == std::string::npos
                                         ? std::string::npos
                                         : comma - pos));
            double v = 0.0;
            if (!parse_scalar(elem, &v)) {
                char buf[96];
                std::snprintf(buf, sizeof buf,
                              "malformed array: element %zu is not a number",
                              vals.size() + 1);
                throw config_error(buf, line);
            }
            vals.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return ConfigValue::arr(std::move(vals));
    }
    double v = 0.0;
    if (parse_scalar(raw, &v)) return ConfigValue::num(v);
    if (raw.find_first_of(" \t") != std::string::npos)
        throw config_error("text values must be a single token", line);
    return ConfigValue::str(raw);
}

std::optional<Command> command_from(const std::string& word) {
    if (word == "simulate") return Command::simulate;
    if (word == "peakon") return Command::peakon;
    if (word == "kink") return Command::kink;
    if (word == "characteristics") return Command::characteristics;
    if (word == "decay") return Command::decay;
    if (word == "verify") return Command::verify;
    return std::nullopt;
}

struct ParsedText {
    std::optional<Command> command;
    std::map<std::string, ConfigValue> params;
    std::map<std::string, int> lines;  ///< key -> 1-based source line
};

ParsedText parse_syntax(const std::string& text) {
    ParsedText out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("unterminated [section] header", ln);
            section = trim(line.substr(1, line.size() - 2));
            if (!is_identifier(section))
                throw config_error("invalid section name", ln);
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("expected `key = value`", ln);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!is_identifier(key))
            throw config_error("invalid key name '" + key + "'", ln);
        if (section.empty())
            throw config_error("key outside any [section]", ln);
        if (value.empty())
            throw config_error("empty value for key '" + key + "'", ln);
        if (section == "run" && key == "command") {
            if (out.command)
                throw config_error("duplicate key 'run.command'", ln);
            out.command = command_from(value);
            if (!out.command)
                throw config_error("unknown command '" + value + "'", ln);
            continue;
        }
        const std::string full = section + "." + key;
        if (out.params.count(full))
            throw config_error("duplicate key '" + full + "'", ln);
        out.params[full] = parse_value(value, ln);
        out.lines[full] = ln;
    }
    return out;
}

// ---------------------------------------------------------------------
// per-command validation
// ---------------------------------------------------------------------

int line_of(const ParsedText& p, const std::string& key) {
    auto it = p.lines.find(key);
    return it == p.lines.end() ? 0 : it->second;
}

const ConfigValue& require(const ParsedText& p, Command c,
                           const std::string& key) {
    auto it = p.params.find(key);
    if (it == p.params.end())
        throw config_error("missing required key '" + key + "' for command " +
                           to_string(c));
    return it->second;
}

double as_number(const ParsedText& p, const std::string& key) {
    const ConfigValue& v = p.params.at(key);
    if (v.kind != ConfigValue::Kind::number)
        throw config_error("'" + key + "' must be a single number",
                           line_of(p, key));
    return v.number;
}

int as_int(const ParsedText& p, const std::string& key) {
    const double v = as_number(p, key);
    if (v != std::floor(v) || std::abs(v) > 2147483647.0)
        throw config_error("'" + key + "' must be an integer",
                           line_of(p, key));
    return static_cast<int>(v);
}

std::string as_text(const ParsedText& p, const std::string& key) {
    const ConfigValue& v = p.params.at(key);
    if (v.kind != ConfigValue::Kind::text)
        throw config_error("'" + key + "' must be a word, not a number",
                           line_of(p, key));
    return v.text;
}

/// Arrays may be written as a single scalar; a one-element list and a
/// scalar mean the same thing.
std::vector<double> as_array(const ParsedText& p, const std::string& key) {
    const ConfigValue& v = p.params.at(key);
    if (v.kind == ConfigValue::Kind::number) return {v.number};
    if (v.kind == ConfigValue::Kind::array) return v.array;
    throw config_error("'" + key + "' must be a number or a numeric list",
                       line_of(p, key));
}

void require_positive(const ParsedText& p, const std::string& key) {
    if (!(as_number(p, key) > 0.0))
        throw config_error("'" + key + "' must be > 0", line_of(p, key));
}

/// k = 0 is excluded by a domain rule, not a syntax rule: the transport
/// coefficient u^k degenerates to 1 and the equation is linear.
int validated_k(const ParsedText& p, Command c) {
    const int k = as_int(p, "equation.k");
    if (k == 0)
        throw config_error(
            "equation.k = 0 is rejected: the transport speed u^0 = 1 makes "
            "the equation linear, outside this laboratory's scope",
            line_of(p, "equation.k"));
    if (k < 0 && c != Command::peakon)
        throw config_error("'equation.k' must be >= 1 for command " +
                               to_string(c),
                           line_of(p, "equation.k"));
    return k;
}

bool uses_pde(Command c) {
    return c == Command::simulate || c == Command::characteristics ||
           c == Command::decay;
}

void validate_and_fill(Command cmd, ParsedText& p) {
    // -- allowed key set ------------------------------------------------
    std::set<std::string> allowed = {"output.dir"};
    if (uses_pde(cmd)) {
        allowed.insert({"grid.x_min", "grid.dx", "grid.n", "grid.boundary",
                        "equation.k", "time.t_end", "time.cfl",
                        "time.snapshot_every", "time.monitor_every",
                        "initial.name"});
        auto it = p.params.find("initial.name");
        const std::string name =
            it != p.params.end() && it->second.kind == ConfigValue::Kind::text
                ? it->second.text
                : "";
        if (name == "gaussian")
            allowed.insert({"initial.a", "initial.w", "initial.x0"});
        else if (name == "exp_decay")
            allowed.insert({"initial.a", "initial.theta", "initial.x0"});
        else if (name == "bump_momentum")
            allowed.insert({"initial.a"});
        else if (name == "peakon")
            allowed.insert({"initial.c", "initial.q0", "initial.mollify"});
    }
    if (cmd == Command::characteristics) allowed.insert("characteristics.seeds");
    if (cmd == Command::decay)
        allowed.insert({"decay.tail_fraction", "decay.eps"});
    if (cmd == Command::peakon)
        allowed.insert({"equation.k", "time.t_end", "time.dt", "peakon.p",
                        "peakon.q", "peakon.c", "peakon.q0"});
    if (cmd == Command::kink)
        allowed.insert({"equation.k", "time.t_end", "time.dt", "kink.c",
                        "kink.b", "kink.p"});

    for (const auto& [key, value] : p.params)
        if (!allowed.count(key))
            throw config_error("unknown key '" + key + "' for command " +
                                   to_string(cmd),
                               line_of(p, key));

    // -- required keys and domain rules ---------------------------------
    require(p, cmd, "output.dir");
    if (as_text(p, "output.dir").empty())
        throw config_error("'output.dir' must be a path",
                           line_of(p, "output.dir"));

    if (uses_pde(cmd)) {
        for (const char* key :
             {"grid.x_min", "grid.dx", "grid.n", "grid.boundary", "equation.k",
              "time.t_end", "initial.name"})
            require(p, cmd, key);
        require_positive(p, "grid.dx");
        as_number(p, "grid.x_min");
        if (as_int(p, "grid.n") < 8)
            throw config_error("'grid.n' must be at least 8",
                               line_of(p, "grid.n"));
        const std::string b = as_text(p, "grid.boundary");
        if (b != "periodic" && b != "decaying")
            throw config_error(
                "'grid.boundary' must be `periodic` or `decaying`",
                line_of(p, "grid.boundary"));
        validated_k(p, cmd);
        require_positive(p, "time.t_end");

        // defaults
        p.params.emplace("time.cfl", ConfigValue::num(0.3));
        p.params.emplace("time.snapshot_every", ConfigValue::num(0.1));
        p.params.emplace("time.monitor_every", ConfigValue::num(0.05));
        if (!(as_number(p, "time.cfl") > 0.0) || as_number(p, "time.cfl") > 1.0)
            throw config_error("'time.cfl' must be in (0, 1]",
                               line_of(p, "time.cfl"));
        require_positive(p, "time.snapshot_every");
        require_positive(p, "time.monitor_every");
        // snapshot files are named with six decimals of the time
        if (as_number(p, "time.snapshot_every") < 1e-6)
            throw config_error("'time.snapshot_every' must be at least 1e-6",
                               line_of(p, "time.snapshot_every"));

        const std::string name = as_text(p, "initial.name");
        if (name == "gaussian") {
            for (const char* key : {"initial.a", "initial.w", "initial.x0"})
                require(p, cmd, key);
            require_positive(p, "initial.w");
            as_number(p, "initial.a");
            as_number(p, "initial.x0");
        } else if (name == "exp_decay") {
            for (const char* key : {"initial.a", "initial.theta", "initial.x0"})
                require(p, cmd, key);
            require_positive(p, "initial.a");
            require_positive(p, "initial.theta");
            as_number(p, "initial.x0");
        } else if (name == "bump_momentum") {
            require(p, cmd, "initial.a");
            // the scheme transports nonnegative momentum; a sign-flipped
            // bump would be silently frozen by the positivity limiter
            require_positive(p, "initial.a");
        } else if (name == "peakon") {
            for (const char* key : {"initial.c", "initial.q0"})
                require(p, cmd, key);
            require_positive(p, "initial.c");
            as_number(p, "initial.q0");
            if (p.params.count("initial.mollify")) {
                const std::string m = as_text(p, "initial.mollify");
                if (m != "true" && m != "false")
                    throw config_error(
                        "'initial.mollify' must be `true` or `false`",
                        line_of(p, "initial.mollify"));
            }
        } else {
            throw config_error(
                "unknown initial datum '" + name +
                    "' (choose gaussian, exp_decay, bump_momentum or peakon)",
                line_of(p, "initial.name"));
        }
    }

    if (cmd == Command::characteristics) {
        require(p, cmd, "characteristics.seeds");
        const std::vector<double> seeds = as_array(p, "characteristics.seeds");
        for (size_t i = 0; i + 1 < seeds.size(); ++i)
            if (!(seeds[i] < seeds[i + 1]))
                throw config_error(
                    "'characteristics.seeds' must be strictly increasing",
                    line_of(p, "characteristics.seeds"));
    }

    if (cmd == Command::decay) {
        p.params.emplace("decay.tail_fraction", ConfigValue::num(0.15));
        p.params.emplace("decay.eps", ConfigValue::num(1e-10));
        const double tf = as_number(p, "decay.tail_fraction");
        if (!(tf > 0.0 && tf < 0.4))
            throw config_error("'decay.tail_fraction' must lie in (0, 0.4)",
                               line_of(p, "decay.tail_fraction"));
        require_positive(p, "decay.eps");
    }

    if (cmd == Command::peakon || cmd == Command::kink) {
        validated_k(p, cmd);
        require(p, cmd, "time.t_end");
        require(p, cmd, "time.dt");
        require_positive(p, "time.t_end");
        require_positive(p, "time.dt");
    }

    if (cmd == Command::peakon) {
        const bool has_pq =
            p.params.count("peakon.p") || p.params.count("peakon.q");
        const bool has_c =
            p.params.count("peakon.c") || p.params.count("peakon.q0");
        if (has_pq && has_c)
            throw config_error(
                "give either peakon.p + peakon.q (general state) or "
                "peakon.c + peakon.q0 (single traveling pulse), not both");
        if (has_c) {
            require(p, cmd, "peakon.c");
            require(p, cmd, "peakon.q0");
            require_positive(p, "peakon.c");
            as_number(p, "peakon.q0");
        } else {
            require(p, cmd, "peakon.p");
            require(p, cmd, "peakon.q");
            const std::vector<double> pp = as_array(p, "peakon.p");
            const std::vector<double> qq = as_array(p, "peakon.q");
            if (pp.size() != qq.size() || pp.empty())
                throw config_error(
                    "'peakon.p' and 'peakon.q' must be nonempty lists of "
                    "equal length");
        }
    }

    if (cmd == Command::kink) {
        for (const char* key : {"kink.c", "kink.b", "kink.p"})
            require(p, cmd, key);
        const std::vector<double> c = as_array(p, "kink.c");
        const std::vector<double> b = as_array(p, "kink.b");
        const std::vector<double> q = as_array(p, "kink.p");
        if (c.size() != b.size() || c.size() != q.size() || c.empty())
            throw config_error(
                "'kink.c', 'kink.b' and 'kink.p' must be nonempty lists of "
                "equal length");
    }
}

// ---------------------------------------------------------------------
// initial data
// ---------------------------------------------------------------------

/// Displacement from x0 to x, wrapped to the principal branch on
/// periodic grids so a pulse centered anywhere keeps its shape.
double displacement(const Grid& g, double x, double x0) {
    const double d = x - x0;
    if (g.boundary == Boundary::periodic) return std::remainder(d, g.length());
    return d;
}

/// Discrete Gaussian convolution with standard deviation sigma; the
/// kernel is truncated at 6 sigma.  Used to smooth crest kinks of the
/// built-in data: with sigma = dx/2 the kernel is in effect the
/// three-point average (e^-2, 1, e^-2)/(1 + 2 e^-2), i.e. the crest is
/// smoothed over a span of three cells.  Wider smoothing would change
/// the physics, not just the resolution: a crest-mollified peakon's
/// exact crest velocity drops by about 1.7 sigma, so the smoothing
/// must stay at sub-cell scale for the wave to travel at c on the
/// grid.  Each output is divided by the kernel weight actually used,
/// so near the ends of a decaying grid the average stays a partition
/// of unity and an exponential tail keeps its rate instead of being
/// damped by the missing neighbors.
Field mollify(const Field& f, double sigma) {
    const Grid& g = f.grid;
    const int r = std::max(1, static_cast<int>(std::ceil(6.0 * sigma / g.dx)));
    std::vector<double> w(2 * r + 1);
    for (int j = -r; j <= r; ++j) {
        const double z = j * g.dx / sigma;
        w[j + r] = std::exp(-0.5 * z * z);
    }
    Field out(g);
    for (int i = 0; i < g.n; ++i) {
        double acc = 0.0, used = 0.0;
        for (int j = -r; j <= r; ++j) {
            int idx = i + j;
            if (g.boundary == Boundary::periodic) {
                idx %= g.n;
                if (idx < 0) idx += g.n;
            } else if (idx < 0 || idx >= g.n) {
                continue;
            }
            acc += w[j + r] * f[idx];
            used += w[j + r];
        }
        out[i] = acc / used;
    }
    return out;
}

double num(const RunSpec& s, const std::string& key) {
    return s.params.at(key).number;
}

std::string text(const RunSpec& s, const std::string& key) {
    return s.params.at(key).text;
}

std::vector<double> array(const RunSpec& s, const std::string& key) {
    const ConfigValue& v = s.params.at(key);
    if (v.kind == ConfigValue::Kind::number) return {v.number};
    return v.array;
}

Grid grid_from(const RunSpec& s) {
    Grid g;
    g.x_min = num(s, "grid.x_min");
    g.dx = num(s, "grid.dx");
    g.n = static_cast<int>(num(s, "grid.n"));
    g.boundary = text(s, "grid.boundary") == "periodic" ? Boundary::periodic
                                                        : Boundary::decaying;
    return g;
}

Field initial_field(const RunSpec& s, const Grid& g) {
    const std::string name = text(s, "initial.name");
    Field u(g);
    if (name == "gaussian") {
        const double a = num(s, "initial.a"), w = num(s, "initial.w"),
                     x0 = num(s, "initial.x0");
        for (int i = 0; i < g.n; ++i) {
            const double d = displacement(g, g.x(i), x0) / w;
            u[i] = a * std::exp(-0.5 * d * d);
        }
        return u;
    }
    if (name == "exp_decay") {
        const double a = num(s, "initial.a"), th = num(s, "initial.theta"),
                     x0 = num(s, "initial.x0");
        for (int i = 0; i < g.n; ++i)
            u[i] = a * std::exp(-th * std::abs(displacement(g, g.x(i), x0)));
        return mollify(u, 0.5 * g.dx);  // crest kink -> resolvable profile
    }
    if (name == "bump_momentum") {
        const double a = num(s, "initial.a");
        Field m(g);
        for (int i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            m[i] = std::abs(x) < 1.0 ? a * std::exp(-1.0 / (1.0 - x * x)) : 0.0;
        }
        return HelmholtzSolver(g).inv_helmholtz(m);
    }
    // peakon
    const double c = num(s, "initial.c"), q0 = num(s, "initial.q0");
    const int k = static_cast<int>(num(s, "equation.k"));
    const double amp = std::pow(c, 1.0 / k);
    for (int i = 0; i < g.n; ++i)
        u[i] = amp * std::exp(-std::abs(displacement(g, g.x(i), q0)));
    const bool moll = s.params.count("initial.mollify") &&
                      text(s, "initial.mollify") == "true";
    return moll ? mollify(u, 0.5 * g.dx) : u;
}

// ---------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------

using FileList = std::vector<std::pair<std::string, std::string>>;

std::string snapshot_name(double t) {
    char b[48];
    std::snprintf(b, sizeof b, "u_t%.6f.csv", t);
    return b;
}

std::string field_csv(const Field& u) {
    std::string out = "x,u\n";
    out.reserve(out.size() + static_cast<size_t>(u.n()) * 48);
    for (int i = 0; i < u.n(); ++i) {
        out += fmt17(u.grid.x(i));
        out += ',';
        out += fmt17(u[i]);
        out += '\n';
    }
    return out;
}

void add_snapshots(FileList& files, const Trajectory& traj) {
    for (size_t s = 0; s < traj.times.size(); ++s)
        files.emplace_back(snapshot_name(traj.times[s]),
                           field_csv(traj.snapshots[s]));
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() +
                                 "' for writing");
    out << content;
    out.flush();
    if (!out)
        throw std::runtime_error("error writing '" + path.string() + "'");
}

/// Write every produced file plus the run.json manifest that lists all
/// of them (itself included), the echoed configuration, and the grid
/// when the command has one.
void write_run(const RunSpec& spec, const Grid* grid, const FileList& files,
               const ordered_json& results) {
    const fs::path dir(spec.output_dir);
    fs::create_directories(dir);
    ordered_json man;
    man["command"] = to_string(spec.command);
    man["config"] = canonical_config(spec);
    if (grid) {
        man["grid"] = {{"x_min", grid->x_min},
                       {"dx", grid->dx},
                       {"n", grid->n},
                       {"boundary", to_string(grid->boundary)}};
    }
    std::vector<std::string> names = {"run.json"};
    for (const auto& [name, content] : files) names.push_back(name);
    man["outputs"] = names;
    man["results"] = results;
    for (const auto& [name, content] : files)
        write_text_file(dir / name, content);
    write_text_file(dir / "run.json", man.dump(2) + "\n");
}

// ---------------------------------------------------------------------
// command handlers
// ---------------------------------------------------------------------

SolverConfig solver_config(const RunSpec& s) {
    SolverConfig cfg;
    cfg.k = static_cast<int>(num(s, "equation.k"));
    cfg.t_end = num(s, "time.t_end");
    cfg.cfl = num(s, "time.cfl");
    cfg.snapshot_every = num(s, "time.snapshot_every");
    cfg.monitor_every = num(s, "time.monitor_every");
    return cfg;
}

int run_simulate(const RunSpec& spec) {
    const Grid g = grid_from(spec);
    const Trajectory traj = simulate(initial_field(spec, g), solver_config(spec));
    const HelmholtzSolver solver(g);
    const ConservationReport rep = report(solver, traj);
    FileList files;
    add_snapshots(files, traj);
    files.emplace_back("conserved.csv", to_csv(rep));
    double h0_drift = 0.0;
    for (double v : rep.h0) h0_drift = std::max(h0_drift, std::abs(v - rep.h0[0]));
    ordered_json results = {{"snapshots", traj.times.size()},
                            {"h0_initial", rep.h0[0]},
                            {"h0_drift", h0_drift}};
    write_run(spec, &g, files, results);
    return 0;
}

int run_characteristics(const RunSpec& spec) {
    const Grid g = grid_from(spec);
    const Trajectory traj = simulate(initial_field(spec, g), solver_config(spec));
    const FlowMap fm = flow(traj, array(spec, "characteristics.seeds"));
    const double lag_err = lagrangian_momentum_error(traj, fm);
    FileList files;
    add_snapshots(files, traj);
    files.emplace_back("flow.csv", to_csv(fm));
    ordered_json results = {{"seeds", fm.seeds.size()},
                            {"lagrangian_momentum_error", lag_err}};
    write_run(spec, &g, files, results);
    return 0;
}

int run_decay(const RunSpec& spec) {
    const Grid g = grid_from(spec);
    const Trajectory traj = simulate(initial_field(spec, g), solver_config(spec));
    const DecayHistory hist =
        decay_persistence(traj, num(spec, "decay.tail_fraction"));
    if (hist.times.empty())
        throw insufficient_tail_error(
            "decay: no snapshot has a usable tail at the requested fraction");
    const double eps = num(spec, "decay.eps");
    std::string support = "t,support_radius\n";
    for (size_t s = 0; s < traj.times.size(); ++s) {
        support += fmt17(traj.times[s]);
        support += ',';
        support += fmt17(support_radius(traj.snapshots[s], eps));
        support += '\n';
    }
    double min_theta = std::numeric_limits<double>::infinity();
    for (const DecayEstimate& e : hist.estimates)
        min_theta = std::min(min_theta, std::min(e.theta_left, e.theta_right));
    FileList files;
    add_snapshots(files, traj);
    files.emplace_back("decay.csv", to_csv(hist));
    files.emplace_back("support.csv", std::move(support));
    ordered_json results = {{"fitted_snapshots", hist.times.size()},
                            {"min_theta", min_theta}};
    write_run(spec, &g, files, results);
    return 0;
}

int run_peakon(const RunSpec& spec) {
    PeakonEnsemble e;
    e.k = static_cast<int>(num(spec, "equation.k"));
    if (spec.params.count("peakon.c")) {
        // single traveling pulse given by speed: amplitude p = c^(1/k)
        e.p = {std::pow(num(spec, "peakon.c"), 1.0 / e.k)};
        e.q = {num(spec, "peakon.q0")};
    } else {
        e.p = array(spec, "peakon.p");
        e.q = array(spec, "peakon.q");
    }
    const PeakonTrajectory traj =
        integrate_peakons(e, num(spec, "time.t_end"), num(spec, "time.dt"));
    FileList files;
    files.emplace_back("trajectory.csv", to_csv(traj));
    ordered_json results = {{"pulses", e.p.size()},
                            {"records", traj.times.size()}};
    write_run(spec, nullptr, files, results);
    return 0;
}

int run_kink(const RunSpec& spec) {
    KinkEnsemble e;
    e.k = static_cast<int>(num(spec, "equation.k"));
    e.c = array(spec, "kink.c");
    e.b = array(spec, "kink.b");
    e.p = array(spec, "kink.p");
    const KinkTrajectory traj =
        integrate_kinks(e, num(spec, "time.t_end"), num(spec, "time.dt"));
    FileList files;
    files.emplace_back("trajectory.csv", to_csv(traj));
    ordered_json results = {{"cliffs", e.c.size()},
                            {"records", traj.times.size()}};
    write_run(spec, nullptr, files, results);
    return 0;
}

// ---------------------------------------------------------------------
// verify: built-in scenario list
// ---------------------------------------------------------------------

/// Minimal reader for the CSVs this process just wrote: header row of
/// column names, then numeric rows.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw std::runtime_error("column '" + name + "' not found");
    }
};

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    CsvTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        size_t pos = 0;
        while (true) {
            const size_t comma = line.find(',', pos);
            cells.push_back(line.substr(
                pos, comma == std::string::npos ? std::string::npos
                                                : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        std::vector<double> row(cells.size());
        for (size_t i = 0; i < cells.size(); ++i)
            row[i] = std::strtod(cells[i].c_str(), nullptr);
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct ScenarioResult {
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string note;  ///< one-line human description of the check
};

struct Scenario {
    const char* name;
    const char* body;  ///< config without the [output] section
    ScenarioResult (*check)(const fs::path& dir);
};

ScenarioResult check_conservation(const fs::path& dir) {
    const CsvTable t = read_csv(dir / "conserved.csv");
    const int c = t.column("h0");
    ScenarioResult r;
    const double h0_0 = t.rows.at(0).at(c);
    for (const auto& row : t.rows)
        r.measured = std::max(r.measured, std::abs(row.at(c) - h0_0));
    r.threshold = 1e-6 * (1.0 + std::abs(h0_0));
    r.passed = r.measured <= r.threshold;
    r.note = "max |h0(t) - h0(0)| over the run";
    return r;
}

ScenarioResult check_single_pulse(const fs::path& dir) {
    const CsvTable t = read_csv(dir / "trajectory.csv");
    const auto& last = t.rows.back();
    const double time = last.at(t.column("t"));
    const double q = last.at(t.column("q_1"));
    ScenarioResult r;
    r.measured = std::abs(q - 4.0 * time);  // speed c = 4, q0 = 0
    r.threshold = 1e-9;
    r.passed = r.measured <= r.threshold;
    r.note = "|q(t) - c t| for the speed-4 pulse";
    return r;
}

ScenarioResult check_expanding_cliffs(const fs::path& dir) {
    const CsvTable t = read_csv(dir / "trajectory.csv");
    const auto& last = t.rows.back();
    const double time = last.at(t.column("t"));
    const double p = last.at(t.column("p_1"));
    ScenarioResult r;
    r.measured = std::abs(p - exact_symmetric_kink_position(1.0, time));
    r.threshold = 1e-9;
    r.passed = r.measured <= r.threshold;
    r.note = "|p(t) - closed form| for the symmetric pair";
    return r;
}

ScenarioResult check_tail_rate(const fs::path& dir) {
    const CsvTable t = read_csv(dir / "decay.csv");
    const int cl = t.column("theta_left"), cr = t.column("theta_right");
    ScenarioResult r;
    r.measured = std::numeric_limits<double>::infinity();
    for (const auto& row : t.rows)
        r.measured = std::min(r.measured, std::min(row.at(cl), row.at(cr)));
    r.threshold = 0.45;
    r.passed = r.measured >= r.threshold;
    r.note = "min fitted tail rate along the run (floor, not cap)";
    return r;
}

constexpr const char* kConservationBody = R"(
[run]
command = simulate
[grid]
x_min = -40
dx = 0.0390625
n = 2049
boundary = decaying
[equation]
k = 1
[time]
t_end = 2
[initial]
name = bump_momentum
a = 1
)";

constexpr const char* kSinglePulseBody = R"(
[run]
command = peakon
[equation]
k = 2
[time]
t_end = 1
dt = 0.001
[peakon]
c = 4
q0 = 0
)";

constexpr const char* kExpandingCliffsBody = R"(
[run]
command = kink
[equation]
k = 1
[time]
t_end = 2
dt = 0.001
[kink]
c = 0, 0
b = 1, 1
p = 1, -1
)";

constexpr const char* kTailRateBody = R"(
[run]
command = decay
[grid]
x_min = -40
dx = 0.0390625
n = 2049
boundary = decaying
[equation]
k = 1
[time]
t_end = 1
[initial]
name = exp_decay
a = 1
theta = 0.5
x0 = 0
)";

const Scenario kScenarios[] = {
    {"conservation", kConservationBody, check_conservation},
    {"single_pulse", kSinglePulseBody, check_single_pulse},
    {"expanding_cliffs", kExpandingCliffsBody, check_expanding_cliffs},
    {"tail_rate", kTailRateBody, check_tail_rate},
};

size_t worker_count(size_t jobs) {
    size_t cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
    if (const char* env = std::getenv("G0HS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw config_error("G0HS_THREADS must be a positive integer");
        cap = static_cast<size_t>(v);
    }
    return std::max<size_t>(1, std::min(jobs, cap));
}

int run_verify(const RunSpec& spec) {
    const size_t count = std::size(kScenarios);
    std::vector<ScenarioResult> results(count);
    std::vector<int> codes(count, 0);
    std::atomic<size_t> next{0};
    const fs::path dir(spec.output_dir);
    fs::create_directories(dir);

    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= count) return;
            const Scenario& sc = kScenarios[i];
            const fs::path sub = dir / sc.name;
            try {
                const std::string ini = std::string(sc.body) +
                                        "\n[output]\ndir = " + sub.string() +
                                        "\n";
                codes[i] = run(parse_config(ini));
                if (codes[i] == 0) results[i] = sc.check(sub);
            } catch (const std::exception& ex) {
                codes[i] = 1;
                results[i].note = ex.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (size_t w = worker_count(count); w > 0; --w)
        pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    std::string csv = "scenario,passed,measured,threshold\n";
    ordered_json summary = ordered_json::array();
    bool all = true;
    for (size_t i = 0; i < count; ++i) {
        const Scenario& sc = kScenarios[i];
        const ScenarioResult& r = results[i];
        const bool ok = codes[i] == 0 && r.passed;
        all = all && ok;
        if (codes[i] != 0)
            std::printf("[FAIL] %s: scenario run exited with code %d%s%s\n",
                        sc.name, codes[i], r.note.empty() ? "" : ": ",
                        r.note.c_str());
        else
            std::printf("[%s] %s: %s = %.6g (threshold %.6g)\n",
                        ok ? "PASS" : "FAIL", sc.name, r.note.c_str(),
                        r.measured, r.threshold);
        csv += std::string(sc.name) + ',' + (ok ? '1' : '0') + ',' +
               fmt17(r.measured) + ',' + fmt17(r.threshold) + '\n';
        summary.push_back({{"name", sc.name},
                           {"passed", ok},
                           {"measured", std::isfinite(r.measured) ? r.measured
                                                                  : 0.0},
                           {"threshold", r.threshold},
                           {"manifest", std::string(sc.name) + "/run.json"}});
    }
    FileList files;
    files.emplace_back("verify.csv", std::move(csv));
    ordered_json results_json = {{"scenarios", summary}, {"all_passed", all}};
    write_run(spec, nullptr, files, results_json);
    if (!all) throw std::runtime_error("verify: at least one scenario failed");
    return 0;
}

}  // namespace

// ---------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------

std::string to_string(Command c) {
    switch (c) {
        case Command::simulate: return "simulate";
        case Command::peakon: return "peakon";
        case Command::kink: return "kink";
        case Command::characteristics: return "characteristics";
        case Command::decay: return "decay";
        case Command::verify: return "verify";
    }
    return "?";
}

ConfigValue ConfigValue::num(double v) {
    ConfigValue c;
    c.kind = Kind::number;
    c.number = v;
    return c;
}

ConfigValue ConfigValue::arr(std::vector<double> v) {
    ConfigValue c;
    c.kind = Kind::array;
    c.array = std::move(v);
    return c;
}

ConfigValue ConfigValue::str(std::string v) {
    ConfigValue c;
    c.kind = Kind::text;
    c.text = std::move(v);
    return c;
}

RunSpec parse_config(const std::string& text) {
    ParsedText p = parse_syntax(text);
    if (!p.command)
        throw config_error("missing required key 'run.command'");
    validate_and_fill(*p.command, p);
    RunSpec spec;
    spec.command = *p.command;
    spec.params = std::move(p.params);
    spec.output_dir = spec.params.at("output.dir").text;
    return spec;
}

std::string canonical_config(const RunSpec& spec) {
    std::string out = "[run]\ncommand = " + to_string(spec.command) + "\n";
    static const char* kSections[] = {"grid",   "equation", "time",
                                      "initial", "peakon",   "kink",
                                      "characteristics", "decay", "output"};
    for (const char* sec : kSections) {
        const std::string prefix = std::string(sec) + ".";
        bool started = false;
        // params is an ordered map, so iteration (and the echo) is stable
        for (const auto& [key, value] : spec.params) {
            if (key.compare(0, prefix.size(), prefix) != 0) continue;
            if (!started) {
                out += "\n[" + std::string(sec) + "]\n";
                started = true;
            }
            out += key.substr(prefix.size()) + " = ";
            switch (value.kind) {
                case ConfigValue::Kind::number:
                    out += fmt17(value.number);
                    break;
                case ConfigValue::Kind::array:
                    for (size_t i = 0; i < value.array.size(); ++i) {
                        if (i) out += ", ";
                        out += fmt17(value.array[i]);
                    }
                    break;
                case ConfigValue::Kind::text:
                    out += value.text;
                    break;
            }
            out += "\n";
        }
    }
    return out;
}

int run(const RunSpec& spec) {
    const std::string name = to_string(spec.command);
    try {
        switch (spec.command) {
            case Command::simulate: return run_simulate(spec);
            case Command::peakon: return run_peakon(spec);
            case Command::kink: return run_kink(spec);
            case Command::characteristics: return run_characteristics(spec);
            case Command::decay: return run_decay(spec);
            case Command::verify: return run_verify(spec);
        }
        return 1;
    } catch (const config_error& e) {
        std::fprintf(stderr, "g0hs %s: %s\n", name.c_str(), e.what());
        return 2;
    } catch (const insufficient_tail_error& e) {
        std::fprintf(stderr, "g0hs %s: %s\n", name.c_str(), e.what());
        return 6;
    } catch (const singularity_error& e) {
        std::fprintf(stderr, "g0hs %s: %s\n", name.c_str(), e.what());
        return 5;
    } catch (const collision_event& e) {
        std::fprintf(stderr, "g0hs %s: %s\n", name.c_str(), e.what());
        return 4;
    } catch (const crossing_error& e) {
        std::fprintf(stderr, "g0hs %s: %s\n", name.c_str(), e.what());
        return 4;
    } catch (const blow_up_error& e) {
        std::fprintf(stderr, "g0hs %s: %s\n", name.c_str(), e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "g0hs %s: %s\n", name.c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "g0hs %s: %s\n", name.c_str(), e.what());
        return 1;
    }
}

}  // namespace g0hs
