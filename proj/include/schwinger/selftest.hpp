#pragma once

#include <string>
#include <vector>

namespace schwinger {

struct SelfTestResult {
    std::string name;
    double value = 0.0;      // measured deviation
    double tolerance = 0.0;  // pass iff value <= tolerance
    bool passed = false;
};

/// Quick identity and oracle checks against dense linear algebra (N <= 6).
std::vector<SelfTestResult> run_selftest();

} // namespace schwinger
