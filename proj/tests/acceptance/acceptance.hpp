#pragma once

#include <string>

#include <json.hpp>

namespace acceptance {

struct Outcome {
    bool pass = false;
    std::string summary;         // one line, printed after PASS/FAIL
    nlohmann::json report;       // deterministic payload, compared byte-for-byte by criterion 11
};

Outcome levi_oracle();            // 1
Outcome bump_certification();     // 2
Outcome ball_nucleus_empty();     // 3
Outcome tube_invariance();        // 4
Outcome monotonicity();           // 5
Outcome confluence();             // 6
Outcome affine_equivariance();    // 7
Outcome round_trip();             // 8
Outcome local_maximum();          // 9
Outcome continuity_probes();      // 10
Outcome reproducibility();        // 11

}  // namespace acceptance
