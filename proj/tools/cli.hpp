#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weakkam {

/// Exit codes: 0 success, 1 configuration or input error, 2 finished but
/// flagged (no convergence, calibration defect above tolerance, failed check).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Defaults of every config field, as JSON text.
std::string default_config();

}  // namespace weakkam
