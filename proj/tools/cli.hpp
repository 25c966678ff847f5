#pragma once

#include <iosfwd>

namespace formslab::cli {

// Runs the forms_lab front end. Results go to `out` (or the --output file);
// the one-line summary and diagnostics go to `err`.
//
// Exit codes: 0 ok, 2 configuration or parse error, 3 numerical failure
// (unmet stderr target, insufficient data), 4 overflow or search budget.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace formslab::cli
