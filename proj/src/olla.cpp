#include "salad/olla.hpp"

#include "salad/error.hpp"

namespace salad {

void OllaConfig::validate() const {
    if (!(target > 0.0 && target < 1.0)) {
        throw ConfigError("OLLA target must lie in (0, 1)");
    }
    if (!(delta_nack > 0.0)) {
        throw ConfigError("OLLA delta_nack must be positive");
    }
}

void olla_on_feedback(OllaState& state, const OllaConfig& cfg, bool nack) {
    if (nack) {
        state.offset_db -= cfg.delta_nack;
    } else {
        state.offset_db += cfg.delta_ack();
    }
}

double sa_increment(double delta_nack, double target, bool nack) {
    return delta_nack / (1.0 - target) * (target - (nack ? 1.0 : 0.0));
}

void olla_sa_update(OllaState& state, const OllaConfig& cfg, bool nack) {
    state.offset_db += sa_increment(cfg.delta_nack, cfg.target, nack);
}

double olla_estimate(const OllaState& state) {
    return state.reported_sinr_db + state.offset_db;
}

IllaDecision olla_select(const OllaState& state, const OllaConfig& cfg, const BlerTable& table,
                         int tbs_bits) {
    return select_mcs_illa(table, olla_estimate(state), cfg.target, tbs_bits);
}

}  // namespace salad
