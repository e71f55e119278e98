#ifndef AZC_DRIVER_HPP
#define AZC_DRIVER_HPP

#include <array>
#include <string>
#include <vector>

#include "azc/evaluator.hpp"

namespace azc {

struct RunConfig {
    bool strict_rules = false;
    bool dump_context = false;
    bool trace = false;
    bool machine_diagnostics = false;
};

/// Outcome of running one source text through the full pipeline.
/// exit_code: 0 success, 1 runtime error, 2 static error.
struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Parse, typecheck, evaluate; prints the final reference's value (and the
/// table dump / trace when asked).
RunResult run_source(const std::string& source, const RunConfig& config = {});

/// Reads the file and runs it. Missing files are static errors (exit 2).
RunResult run_file(const std::string& path, const RunConfig& config = {});

/// Renders the reference-state transition matrix by synthesizing one
/// micro-program per cell (see docs/matrix.md).
std::string render_matrix();

/// The raw 5x6 matrix (rows: unalloc/unique/shared/borrowed/moved; columns:
/// left then right operand positions of &-, :=, <-).
std::array<std::array<std::string, 6>, 5> matrix_cells();

struct CorpusCase {
    std::string name;
    bool passed = false;
    std::string expected;
    std::string actual;
};

struct CorpusReport {
    std::vector<CorpusCase> cases;
    bool all_passed() const;
    std::string to_string() const;
};

/// Runs every `.azc` file with an adjacent `.expected` file and diffs the
/// output byte-exactly. A `.azc` file whose first line is `//! trace` is
/// compared against its trace output instead of its run output.
CorpusReport run_corpus(const std::string& dir);

} // namespace azc

#endif
