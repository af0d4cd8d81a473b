#pragma once

#include <ostream>

namespace stepup::cli {

/// Parses argv, runs the command, writes the report (and bench CSV) to `out`
/// or to the requested files, and returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace stepup::cli
