#pragma once

#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "salad/scenario.hpp"
#include "salad/types.hpp"

namespace salad {

/// Fixed-delay HARQ feedback pipe. Feedback for a transmission at slot t is
/// due at t + delay, deferred to the next schedulable slot when a mask is
/// set. FIFO order is preserved.
class HarqQueue {
public:
    HarqQueue(int delay_slots, std::vector<bool> slot_mask);

    void push(long tx_slot, const HarqFeedback& fb);
    /// All feedbacks due exactly at `slot`, in arrival order.
    std::vector<HarqFeedback> pop_due(long slot);
    bool empty() const { return pending_.empty(); }
    std::size_t size() const { return pending_.size(); }

private:
    long delivery_slot(long tx_slot) const;

    int delay_ = 0;
    std::vector<bool> mask_;
    std::deque<std::pair<long, HarqFeedback>> pending_;  // (due slot, feedback)
};

/// One row per simulated slot; the unit every metric is computed from.
/// Optional fields are empty on unscheduled slots or for adapters that do
/// not produce them.
struct SlotTrace {
    long slot = 0;
    double true_sinr_db = 0.0;
    double est_sinr_db = 0.0;
    std::optional<int> mcs;
    std::optional<int> tbs;
    std::optional<bool> nack;
    std::optional<double> instant_target;
    std::optional<double> bias_ratio;
    std::optional<bool> probe_flag;
    std::optional<double> integral_error;
};

struct DeliveryEvent {
    long slot = 0;  // delivery slot
    bool nack = false;
};

struct Metrics {
    long slots = 0;
    long transmissions = 0;
    long nacks = 0;
    long feedbacks_delivered = 0;
    double long_term_bler = 0.0;
    double normalized_tp = 0.0;
    double mean_se = 0.0;
    int sliding_window = 50;
    std::vector<std::pair<long, double>> sliding_bler;  // (slot, value); undefined slots omitted
    std::optional<long> adaptation_time_slots;          // after the first channel step
};

struct RunResult {
    std::vector<SlotTrace> trace;
    std::vector<DeliveryEvent> deliveries;
    Metrics metrics;
    std::vector<DistillEvent> distill_events;  // salad only
    double final_integral_error = 0.0;         // salad only
};

/// Bernoulli ACK/NACK draw against the unclipped BLER at the true SINR.
/// Consumes exactly one uniform, so paired runs stay aligned.
bool draw_outcome(const BlerTable& table, int mcs, double gamma_true_db, int tbs_bits,
                  std::mt19937_64& rng);

/// First-round normalized throughput: acknowledged bits per slot, scaled by
/// mean scheduled SE over the minimum table SE.
double normalized_tp(const std::vector<SlotTrace>& trace, const BlerTable& table);

/// NACK fraction among feedbacks delivered within the trailing window, one
/// point per slot that saw at least one delivery in the window.
std::vector<std::pair<long, double>> sliding_bler(const std::vector<DeliveryEvent>& deliveries,
                                                  long n_slots, int window);

Metrics compute_metrics(const std::vector<SlotTrace>& trace,
                        const std::vector<DeliveryEvent>& deliveries, const BlerTable& table,
                        const Scenario& scenario);

/// Slot loop: deliver due feedbacks, let the adapter decide, draw the outcome
/// at the true SINR, enqueue delayed feedback. After the horizon the queue is
/// drained so every transmission is acknowledged. Fully deterministic given
/// the scenario (channel and probing draws use separate streams).
RunResult run_scenario(const Scenario& scenario, const BlerTable& table);

/// Resolves the scenario's table reference ("builtin" or a file path).
RunResult run_scenario(const Scenario& scenario);

}  // namespace salad
