/*=============================================================================
 * Error types shared across the library; the command-line front end maps them
 * to exit codes (1 usage, 2 data validation, 3 numerical failure).
 *===========================================================================*/
#pragma once
#include <stdexcept>

namespace pgfb {

/* malformed input file; message carries the file name and line number */
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* structurally invalid problem data: self-loop, duplicate edge, negative
 * coefficient, uncovered vertex, dimension mismatch between files */
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* invalid solver configuration: relaxation bound, mode incompatibility */
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* non-finite values produced during iterations */
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pgfb
