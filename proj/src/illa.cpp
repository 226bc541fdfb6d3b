#include "salad/illa.hpp"

namespace salad {

IllaDecision select_mcs_illa(const BlerTable& table, double gamma_est_db, double target,
                             int tbs_bits) {
    IllaDecision best;
    bool found = false;
    for (const auto& m : table.mcs_table().entries()) {
        const double p = table.bler(m.index, gamma_est_db, tbs_bits);
        if (p <= target) {
            best.mcs = m.index;
            best.predicted_bler = p;
            best.feasible = true;
            found = true;
        }
    }
    if (!found) {
        const int lowest = table.mcs_table().lowest();
        best.mcs = lowest;
        best.predicted_bler = table.bler(lowest, gamma_est_db, tbs_bits);
        best.feasible = false;
    }
    return best;
}

IllaDecision select_mcs_maxse(const BlerTable& table, double gamma_est_db, double target,
                              int tbs_bits) {
    IllaDecision best;
    bool found = false;
    double best_value = -1.0;
    for (const auto& m : table.mcs_table().entries()) {
        const double p = table.bler(m.index, gamma_est_db, tbs_bits);
        if (p > target) continue;
        const double value = m.se * (1.0 - p);
        if (value > best_value) {  // strict: ties keep the lower index
            best_value = value;
            best.mcs = m.index;
            best.predicted_bler = p;
            best.feasible = true;
            found = true;
        }
    }
    if (!found) {
        const int lowest = table.mcs_table().lowest();
        best.mcs = lowest;
        best.predicted_bler = table.bler(lowest, gamma_est_db, tbs_bits);
        best.feasible = false;
    }
    return best;
}

}  // namespace salad
