#pragma once

#include "salad/bler_model.hpp"

namespace salad {

/// Result of inner-loop MCS selection. When no MCS meets the target the
/// lowest index is returned with feasible = false; a scheduler always needs
/// some decision.
struct IllaDecision {
    int mcs = 0;
    double predicted_bler = 1.0;
    bool feasible = false;
};

/// Largest MCS whose predicted BLER does not exceed the target.
IllaDecision select_mcs_illa(const BlerTable& table, double gamma_est_db, double target,
                             int tbs_bits);

/// MCS maximizing SE(u) * (1 - BLER) subject to BLER <= target; ties broken
/// toward the lower (more reliable) index.
IllaDecision select_mcs_maxse(const BlerTable& table, double gamma_est_db, double target,
                              int tbs_bits);

}  // namespace salad
