#pragma once

#include "salad/illa.hpp"

namespace salad {

/// Outer-loop link adaptation parameters. The ACK step is derived from the
/// NACK step so that the long-term NACK fraction settles at the target:
/// tau * delta_nack = (1 - tau) * delta_ack.
struct OllaConfig {
    double target = 0.1;      // long-term BLER target tau
    double delta_nack = 1.0;  // dB decrease per NACK

    double delta_ack() const { return target / (1.0 - target) * delta_nack; }
    void validate() const;
};

struct OllaState {
    double offset_db = 0.0;        // additive correction Delta
    double reported_sinr_db = 0.0; // latest CQI-derived SINR, kept at 0 without reports
};

/// Offset form: Delta += delta_ack on ACK, Delta -= delta_nack on NACK.
void olla_on_feedback(OllaState& state, const OllaConfig& cfg, bool nack);

/// Stochastic-approximation rewrite of the same update:
/// Delta += delta_nack / (1 - tau) * (tau - nack). Trajectories of both forms
/// coincide; the equivalence is asserted in tests.
void olla_sa_update(OllaState& state, const OllaConfig& cfg, bool nack);

/// The SA-form increment with arbitrary (possibly time-varying) stepsize and
/// target. Used stand-alone for the time-adaptive variant.
double sa_increment(double delta_nack, double target, bool nack);

double olla_estimate(const OllaState& state);

IllaDecision olla_select(const OllaState& state, const OllaConfig& cfg, const BlerTable& table,
                         int tbs_bits);

}  // namespace salad
