#include "azc/driver.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "azc/parser.hpp"

namespace azc {

namespace {

std::string first_line(const std::string& s) {
    size_t nl = s.find('\n');
    return nl == std::string::npos ? s : s.substr(0, nl);
}

} // namespace

RunResult run_source(const std::string& source, const RunConfig& config) {
    RunResult result;
    std::ostringstream out;

    EvalOptions options;
    options.strict_rules = config.strict_rules;
    options.trace = config.trace;
    Evaluator ev(options);

    auto flush_trace = [&] {
        if (!config.trace) return;
        for (const TraceEvent& e : ev.trace()) out << e.to_line() << "\n";
    };

    try {
        TermRef program = parse_source(source);
        RefId final_ref = ev.eval_program(program);
        flush_trace();
        out << (config.trace ? "result=" + ref_name(final_ref) + " value=" : "")
            << ev.render_value(final_ref) << "\n";
        if (config.dump_context) out << ev.context().dump();
        result.out = out.str();
        result.exit_code = 0;
    } catch (const StaticError& e) {
        flush_trace();
        result.out = out.str();
        result.err =
            config.machine_diagnostics ? render_machine(e.diag) + "\n" : render(e.diag, source);
        result.exit_code = 2;
    } catch (const RuntimeError& e) {
        flush_trace();
        result.out = out.str();
        Diagnostic d = e.to_diagnostic();
        result.err =
            config.machine_diagnostics ? render_machine(d) + "\n" : render(d, source);
        result.exit_code = 1;
    }
    return result;
}

RunResult run_file(const std::string& path, const RunConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        RunResult result;
        result.exit_code = 2;
        result.err = "static error[S-IO]: cannot open `" + path + "`\n";
        return result;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return run_source(buffer.str(), config);
}

bool CorpusReport::all_passed() const {
    return std::all_of(cases.begin(), cases.end(),
                       [](const CorpusCase& c) { return c.passed; });
}

std::string CorpusReport::to_string() const {
    std::ostringstream out;
    size_t passed = 0;
    for (const CorpusCase& c : cases) {
        out << (c.passed ? "pass" : "FAIL") << "  " << c.name << "\n";
        if (!c.passed) {
            out << "  expected:\n";
            std::istringstream exp(c.expected);
            for (std::string line; std::getline(exp, line);) out << "    " << line << "\n";
            out << "  actual:\n";
            std::istringstream act(c.actual);
            for (std::string line; std::getline(act, line);) out << "    " << line << "\n";
        }
        passed += c.passed;
    }
    if (cases.empty()) {
        out << "warning: corpus is empty\n";
    }
    out << passed << "/" << cases.size() << " passed\n";
    return out.str();
}

CorpusReport run_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    CorpusReport report;

    std::vector<fs::path> files;
    if (fs::is_directory(dir)) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().extension() == ".azc") files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    for (const fs::path& path : files) {
        fs::path expected_path = path;
        expected_path.replace_extension(".expected");
        if (!fs::exists(expected_path)) continue;

        std::ifstream source_in(path, std::ios::binary);
        std::ostringstream source_buf;
        source_buf << source_in.rdbuf();
        std::string source = source_buf.str();

        std::ifstream expected_in(expected_path, std::ios::binary);
        std::ostringstream expected_buf;
        expected_buf << expected_in.rdbuf();

        RunConfig config;
        config.trace = source.starts_with("//! trace");
        RunResult run = run_source(source, config);
        std::string actual =
            run.exit_code == 0 ? run.out : run.out + first_line(run.err) + "\n";

        CorpusCase c;
        c.name = path.filename().string();
        c.expected = expected_buf.str();
        c.actual = actual;
        c.passed = c.expected == c.actual;
        report.cases.push_back(std::move(c));
    }
    return report;
}

} // namespace azc
