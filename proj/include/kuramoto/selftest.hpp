#pragma once

#include "kuramoto/config.hpp"

#include <string>
#include <vector>

namespace kuramoto {

struct SelfCheck {
    std::string name;
    bool pass = false;
    double error = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

// perturb shifts the expected value of the three-oscillator constant so the failing path can be exercised.
std::vector<SelfCheck> run_selftest(double perturb = 0.0);
json selftest_json(const std::vector<SelfCheck>& checks);

} // namespace kuramoto
