#pragma once

#include <functional>
#include <string>
#include <vector>

#include "slcs2/policy.hpp"

namespace slcs2 {

struct OperationResult {
    int delivered = 0;
    int packets = 0;
    long stepsUsed = 0;
    long timeLimit = 0;
    std::vector<int> contributions;  // per agent: delivered packets it carried
};

// receives one serialized JSON record per line: an init record, then one per step
using EventLogger = std::function<void(const std::string&)>;

OperationResult run_operation(World& world, Policy& policy, const LearningConfig& learn,
                              const EventLogger* log = nullptr);

} // namespace slcs2
