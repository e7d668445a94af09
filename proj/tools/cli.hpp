// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_TOOLS_CLI_HPP
#define LDAKIT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ldakit::cli {

// Dispatches one command. `args` excludes the program name. Output streams
// are injectable so tests can capture them.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);
int run(std::vector<std::string> args);

}  // namespace ldakit::cli

#endif  // LDAKIT_TOOLS_CLI_HPP
