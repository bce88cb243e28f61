#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "zl/complex.hpp"
#include "zl/errors.hpp"

namespace zl {

// Command-line driver.  Exit codes: 0 success, 2 computation or check
// failure (domain errors, failed verification), 64 usage error, 65 data
// error (missing or malformed data file).

struct UsageError : Error { using Error::Error; };  // bad flags -> 64
struct DataError : Error { using Error::Error; };   // bad data file -> 65

enum class Command { eval, compare, fit, moments, spectral_check, verify };
enum class OutputFormat { csv, json };

struct RunConfig {
    Command command = Command::eval;
    int k = 2;
    std::vector<Cplx> points;          // evaluation points, input order
    std::vector<std::string> methods;  // canonical method names, input order
    double tol = 1e-6;
    std::string table_path;            // spectral table (flag or env)
    OutputFormat output_format = OutputFormat::csv;
    long seed = 0;                     // fit-grid jitter; 0 = none

    // Command-specific settings.
    std::string coeffs = "main";        // fit: main | kober
    int fit_degree = 3;                 // fit --coeffs kober: series degree
    std::string sigma_grid;             // fit grid spec; empty = default
    bool linear_fit_grid = false;       // fit: linear instead of geometric
    std::vector<double> moment_ts;      // moments: T values
    std::string suite = "all";          // verify: identities|symmetries|all
    double c_exponent = 1.0;            // spectral-check ratio exponent
    long n_terms = 0;                   // series methods: 0 = auto by tol
    std::string coeff_source = "paper"; // theorem method: paper | fit
};

// Complex literal "a+bi" (optional spaces); bare reals and pure-imaginary
// forms like "0.5i", "i", "-i" are accepted.  Throws UsageError.
Cplx parse_complex(const std::string& text);

// Grid spec "start:stop:count" expanded to count values, linearly or
// geometrically spaced; the endpoints are hit exactly.  Throws UsageError.
std::vector<double> parse_grid_spec(const std::string& text, bool geometric);

struct ParsedArgs {
    RunConfig config;
    bool help_only = false;  // --help was requested; help_text is the report
    std::string help_text;
};

// Parse command-line arguments (excluding argv[0]).  Throws UsageError on
// malformed or inconsistent flags.
ParsedArgs parse_args(const std::vector<std::string>& args);

// Execute a validated config.  Report rows go to `out`, diagnostics to
// `err`.  Returns 0 or 2 (failed checks); throws zl exceptions for
// computation errors and DataError for data-file problems.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full driver: parse, run, and map exceptions to exit codes.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace zl
