#pragma once

#include <iosfwd>

namespace irsma::cli {

/// Entry point of the irsma tool. Output goes to `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Quick oracle checks behind `irsma validate`; appends one line per check to `out`.
bool run_validation(std::ostream& out);

} // namespace irsma::cli
