#pragma once

#include <string>
#include <vector>

namespace tollane {

// CLI entry point; args exclude the program name. Exit status: 0 on
// success, 2 on configuration errors, 3 on solver precondition or
// feasibility failures.
int run_command(const std::vector<std::string>& args);

}  // namespace tollane
