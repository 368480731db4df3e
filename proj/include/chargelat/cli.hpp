#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chargelat {

/// Runs one CLI invocation. Returns 0 on success, 1 when validation or a
/// regression check fails (the witness is in the report), 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chargelat
