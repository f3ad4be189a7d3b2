#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quon {

/// Entry point of the quon tool. Exit codes: 0 pass, 1 check failure,
/// 2 usage or parse error.
int run_cli(int argc, const char *const *argv);

/// Parses the "key = value" lines of a configuration file; blank lines and
/// '#' comments are skipped. Throws ParseError on a line without '='.
std::vector<std::pair<std::string, std::string>> parse_config(const std::string &text);

}  // namespace quon
