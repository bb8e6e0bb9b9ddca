#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "g0hs/cli.hpp"
#include "g0hs/errors.hpp"

/// Command-line front end: reads a run configuration file, validates
/// it, and executes the requested command.  All behavior lives in the
/// library's parse_config/run; this wrapper only handles argv and IO.
int main(int argc, char** argv) {
    CLI::App app{
        "g0hs - a numerical laboratory for a family of nonlocal "
        "transport equations.\n"
        "Runs are described by a config file; see README.md for the "
        "format, the built-in initial data, and the exit-code taxonomy."};
    std::string config_path;
    bool echo = false;
    app.add_option("config", config_path,
                   "path to a `key = value` run configuration file")
        ->required();
    app.add_flag("--echo", echo,
                 "print the validated configuration (defaults filled) "
                 "and exit without running");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // bad usage is a validation failure
    }

    std::ifstream in(config_path);
    if (!in) {
        std::fprintf(stderr, "g0hs: cannot open '%s'\n", config_path.c_str());
        return 2;
    }
    std::stringstream text;
    text << in.rdbuf();

    try {
        const g0hs::RunSpec spec = g0hs::parse_config(text.str());
        if (echo) {
            std::fputs(g0hs::canonical_config(spec).c_str(), stdout);
            return 0;
        }
        return g0hs::run(spec);
    } catch (const g0hs::config_error& e) {
        if (e.line() > 0)
            std::fprintf(stderr, "g0hs: %s:%d: %s\n", config_path.c_str(),
                         e.line(), e.what());
        else
            std::fprintf(stderr, "g0hs: %s: %s\n", config_path.c_str(),
                         e.what());
        return 2;
    }
}
