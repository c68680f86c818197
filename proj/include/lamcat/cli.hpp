#pragma once

#include <iosfwd>

namespace lamcat {

/// Runs one command line. Tables go to --output (default: `out`);
/// diagnostics and usage text go to `err`.
///
/// Exit codes: 0 when every requested check passes, 1 when a check fails,
/// 2 on usage errors, 3 on numeric or consistency failures.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lamcat
