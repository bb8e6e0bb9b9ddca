#ifndef G0HS_CLI_HPP
#define G0HS_CLI_HPP

#include <map>
#include <string>
#include <vector>

namespace g0hs {

/// What a run does: evolve the PDE, integrate one of the ODE
/// reductions, probe characteristics or tail decay, or execute the
/// built-in self-check scenario list.
enum class Command { simulate, peakon, kink, characteristics, decay, verify };

std::string to_string(Command c);

/// One configuration value: a scalar, a comma-separated numeric array,
/// or a bare word (boundary names, initial-datum names, paths, flags).
struct ConfigValue {
    enum class Kind { number, array, text };
    Kind kind = Kind::number;
    double number = 0.0;
    std::vector<double> array;
    std::string text;

    static ConfigValue num(double v);
    static ConfigValue arr(std::vector<double> v);
    static ConfigValue str(std::string v);
    bool operator==(const ConfigValue&) const = default;
};

/// A fully validated run description: the command, the scenario
/// parameters as a flat `section.key` map (defaults filled in), and the
/// directory all outputs land in.
struct RunSpec {
    Command command = Command::simulate;
    std::map<std::string, ConfigValue> params;
    std::string output_dir;

    bool operator==(const RunSpec&) const = default;
};

/// Parse the documented `key = value` / `[section]` config format and
/// validate it for the declared command: required keys present, unknown
/// keys rejected, domain rules (k != 0, positive widths, matching array
/// lengths, ...) enforced, defaults filled (cfl = 0.3,
/// snapshot_every = 0.1, monitor_every = 0.05, tail_fraction = 0.15).
/// Throws config_error; syntactic failures carry the 1-based line.
RunSpec parse_config(const std::string& text);

/// Serialize a RunSpec back to config text.  parse_config of the result
/// reproduces the identical RunSpec; the manifest embeds this echo.
std::string canonical_config(const RunSpec& spec);

/// Execute the run: write per-snapshot field CSVs, the per-module
/// trajectory/monitor CSVs, and a run.json manifest listing the inputs,
/// the grid, and every produced file.  Returns the process exit status:
/// 0 on success, otherwise a one-line diagnostic goes to stderr and the
/// code names the failure class: 2 validation, 3 blow-up, 4 collision
/// or characteristic crossing, 5 singularity, 6 insufficient tail.
int run(const RunSpec& spec);

}  // namespace g0hs

#endif
