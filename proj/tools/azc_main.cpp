#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "azc/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"azc - reference interpreter and runtime capability checker"};
    app.require_subcommand(1);

    std::string input_path;
    std::string corpus_dir;
    bool strict_rules = false;
    bool dump_context = false;
    bool machine_diagnostics = false;

    CLI::App* run = app.add_subcommand("run", "evaluate a program and print its final value");
    run->add_option("file", input_path, "source file (.azc)")->required();
    run->add_flag("--strict-rules", strict_rules,
                  "verbatim rule semantics: no scope-exit capability release");
    run->add_flag("--dump-context", dump_context, "print the four runtime tables afterwards");
    run->add_flag("--machine-diagnostics", machine_diagnostics,
                  "one-line machine-readable diagnostics");

    CLI::App* trace = app.add_subcommand("trace", "evaluate and print one event per rule");
    trace->add_option("file", input_path, "source file (.azc)")->required();
    trace->add_flag("--strict-rules", strict_rules);
    trace->add_flag("--machine-diagnostics", machine_diagnostics);

    CLI::App* matrix =
        app.add_subcommand("matrix", "reproduce the reference-state transition table");

    CLI::App* test = app.add_subcommand("test", "run a golden corpus directory");
    test->add_option("dir", corpus_dir, "directory of .azc/.expected pairs")->required();

    CLI11_PARSE(app, argc, argv);

    if (matrix->parsed()) {
        std::cout << azc::render_matrix();
        return 0;
    }
    if (test->parsed()) {
        azc::CorpusReport report = azc::run_corpus(corpus_dir);
        std::cout << report.to_string();
        return report.all_passed() ? 0 : 1;
    }

    azc::RunConfig config;
    config.strict_rules = strict_rules;
    config.dump_context = dump_context;
    config.machine_diagnostics = machine_diagnostics;
    config.trace = trace->parsed();

    azc::RunResult result = azc::run_file(input_path, config);
    std::cout << result.out;
    std::cerr << result.err;
    return result.exit_code;
}
