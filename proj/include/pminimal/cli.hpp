#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pminimal::cli {

// Runs one command line (without the program name). Results go to out,
// diagnostics to err. Returns 0 on success, 1 on domain errors, 2 on syntax
// errors. An argument "-" is replaced by the contents of in.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pminimal::cli
