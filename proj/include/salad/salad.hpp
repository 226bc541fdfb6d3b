#pragma once

#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "salad/bler_model.hpp"
#include "salad/illa.hpp"
#include "salad/teacher.hpp"
#include "salad/types.hpp"

namespace salad {

/// Self-adaptive link adaptation parameters. Field names double as scenario
/// file keys. Defaults are the manually designed configuration.
struct SaladConfig {
    double epsilon = 1.0;     // student learning rate
    double rho = 0.25;        // bias-score ratio threshold for probing
    int window = 15;          // bias-score window T, in delivered feedbacks
    double p_probe = 0.15;    // probing probability once the ratio exceeds rho
    double tau_probe = 0.999; // instantaneous BLER target while probing
    double k_E = 0.01;        // integral gain on the BLER error
    double tau = 0.1;         // long-term BLER target
    int N_eps = 0;            // distillation period in slots; 0 keeps epsilon fixed
    bool adjust_only_when_not_probing = false;  // skip the integral adjustment on probe slots

    void validate() const;
};

/// Per-feedback record kept for the bias score and for distillation.
/// predicted_bler and scale_used_db are the clipped values that entered the
/// student update, evaluated at the then-current stale estimate.
struct FeedbackRecord {
    long slot = 0;
    int mcs = 0;
    int tbs_bits = 0;
    double predicted_bler = 0.5;
    double scale_used_db = 1.0;
    bool nack = false;
};

struct BiasScore {
    double score = 0.0;     // mean of (predicted BLER - NACK flag)
    double variance = 0.0;  // under the null that all predictions are calibrated
    double ratio() const;
};

/// Windowed calibration bias score over the T most recent records.
/// Requires records.size() >= T; callers treat shorter histories as not
/// ready. Variance is positive whenever predictions are clipped away from
/// {0, 1}.
BiasScore bias_score(std::span<const FeedbackRecord> records, int window);

/// True iff the normalized score exceeds rho AND a uniform draw falls below
/// p_probe. Consumes exactly one draw, and only when the threshold holds, so
/// replays are exact.
bool probe_decision(const BiasScore& score, double rho, double p_probe, std::mt19937_64& rng);

struct SaladState {
    double gamma_est_db = 0.0;      // student estimate (offset on top of reported SINR)
    double integral_error = 0.0;    // E = sum of (tau - nack) over delivered feedbacks
    double epsilon = 1.0;           // current learning rate
    double reported_sinr_db = 0.0;  // latest CQI-derived SINR, 0 when agnostic
    std::deque<FeedbackRecord> history;
};

/// Everything one scheduled slot produces, for traces.
struct SaladStepResult {
    std::optional<IllaDecision> decision;
    std::optional<double> bias_ratio;  // set once the window is full
    bool probed = false;
    std::optional<double> instant_target;
};

struct SlotContext {
    long slot = 0;
    bool scheduled = false;
    int tbs_bits = 0;
    std::span<const HarqFeedback> feedbacks;
    bool allow_distill = true;  // cleared by the post-horizon drain
};

struct DistillEvent {
    long slot = 0;
    bool ok = false;
    double selected_epsilon = 0.0;
    int selected_knots = 0;
    std::string message;
};

/// Knot candidates and learning-rate grid used by the periodic distillation.
struct DistillOptions {
    std::vector<double> epsilon_grid;  // defaults to 0.1 .. 3.0, step 0.1
    std::vector<int> knot_candidates = {2, 3, 5, 9, 17};
    double beta = 0.0;
    std::size_t min_batch = 8;

    static DistillOptions defaults();
};

/// Full SALAD adapter: student SINR inference from ACK/NACK, hypothesis-test
/// probing, integral BLER-target control, and periodic teacher distillation
/// of the learning rate. One instance per run; not thread-safe.
class SaladAdapter {
public:
    SaladAdapter(const BlerTable& table, SaladConfig config, std::mt19937_64 probe_rng,
                 DistillOptions distill = DistillOptions::defaults());

    /// Student update, integral-error update, and record bookkeeping for one
    /// delivered feedback.
    void on_feedback(const HarqFeedback& fb);

    /// Ingest a CQI-derived SINR report; the student estimate becomes an
    /// offset on top of it.
    void on_report(double reported_sinr_db) { state_.reported_sinr_db = reported_sinr_db; }

    /// One slot of the full algorithm: process feedbacks, then (if scheduled)
    /// score, probe, set the instantaneous target, and select the MCS; then
    /// distill every N_eps slots.
    SaladStepResult step(const SlotContext& ctx);

    std::optional<BiasScore> current_bias_score() const;
    double instantaneous_target(bool probing) const;

    /// Runs teacher distillation when `slot` is a multiple of N_eps and the
    /// window holds enough records; failures leave epsilon unchanged and are
    /// recorded as events.
    void maybe_distill(long slot);

    double estimate_db() const { return state_.reported_sinr_db + state_.gamma_est_db; }
    const SaladState& state() const { return state_; }
    SaladState& state() { return state_; }
    const SaladConfig& config() const { return config_; }
    const std::vector<DistillEvent>& distill_log() const { return distill_log_; }

private:
    void prune_history(long now_slot);

    const BlerTable& table_;
    SaladConfig config_;
    DistillOptions distill_;
    SaladState state_;
    std::mt19937_64 probe_rng_;
    std::vector<DistillEvent> distill_log_;
};

}  // namespace salad
