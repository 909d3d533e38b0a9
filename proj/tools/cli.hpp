/*=============================================================================
 * Command-line front end: solve (run one algorithm on an instance), synth
 * (generate grid instances), compare (run several configurations and emit a
 * combined objective-gap table). Exit codes: 0 success, 1 usage, 2 data
 * validation, 3 numerical failure.
 *===========================================================================*/
#pragma once

namespace pgfb_cli {

int cli_main(int argc, const char* const* argv);

} // namespace pgfb_cli
