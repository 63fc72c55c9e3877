#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace expolat::cli {

/// Runs one invocation (arguments without the program name) and writes a
/// single JSON document to `out`. Returns 0 on success or a true property,
/// 1 when the checked property is false, 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace expolat::cli
