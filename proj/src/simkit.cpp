#include "salad/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "salad/rng.hpp"

namespace salad {

HarqQueue::HarqQueue(int delay_slots, std::vector<bool> slot_mask)
    : delay_(delay_slots), mask_(std::move(slot_mask)) {
    if (delay_ < 0) {
        throw ConfigError("HARQ delay must be non-negative");
    }
    if (!mask_.empty() && std::find(mask_.begin(), mask_.end(), true) == mask_.end()) {
        throw ConfigError("slot mask must allow at least one slot");
    }
}

long HarqQueue::delivery_slot(long tx_slot) const {
    long due = tx_slot + delay_;
    if (!mask_.empty()) {
        while (!mask_[static_cast<std::size_t>(due) % mask_.size()]) {
            ++due;
        }
    }
    return due;
}

void HarqQueue::push(long tx_slot, const HarqFeedback& fb) {
    pending_.emplace_back(delivery_slot(tx_slot), fb);
}

std::vector<HarqFeedback> HarqQueue::pop_due(long slot) {
    std::vector<HarqFeedback> due;
    while (!pending_.empty() && pending_.front().first <= slot) {
        due.push_back(pending_.front().second);
        pending_.pop_front();
    }
    return due;
}

bool draw_outcome(const BlerTable& table, int mcs, double gamma_true_db, int tbs_bits,
                  std::mt19937_64& rng) {
    const double bler = table.bler(mcs, gamma_true_db, tbs_bits);
    return uniform01(rng) < bler;
}

namespace {

// Uniform per-slot view over the three adapters the runner drives.
class AdapterRuntime {
public:
    virtual ~AdapterRuntime() = default;
    virtual void deliver(const HarqFeedback& fb) = 0;
    virtual void report(double /*sinr_db*/) {}
    virtual IllaDecision select(long slot, int tbs_bits, double true_sinr_db) = 0;
    virtual void end_slot(long /*slot*/) {}
    virtual void drain_slot(long slot) { end_slot(slot); }
    virtual double estimate_db(double true_sinr_db) const = 0;
    virtual std::optional<double> instant_target() const { return std::nullopt; }
    virtual std::optional<double> bias_ratio() const { return std::nullopt; }
    virtual std::optional<bool> probe_flag() const { return std::nullopt; }
    virtual std::optional<double> integral_error() const { return std::nullopt; }
    virtual std::vector<DistillEvent> distill_events() const { return {}; }
};

class OllaRuntime final : public AdapterRuntime {
public:
    OllaRuntime(const BlerTable& table, OllaConfig cfg) : table_(table), cfg_(cfg) {
        cfg_.validate();
    }

    void deliver(const HarqFeedback& fb) override { olla_on_feedback(state_, cfg_, fb.nack); }
    void report(double sinr_db) override { state_.reported_sinr_db = sinr_db; }

    IllaDecision select(long /*slot*/, int tbs_bits, double /*true_sinr_db*/) override {
        last_target_ = cfg_.target;
        return olla_select(state_, cfg_, table_, tbs_bits);
    }

    double estimate_db(double /*true_sinr_db*/) const override { return olla_estimate(state_); }
    std::optional<double> instant_target() const override { return last_target_; }

private:
    const BlerTable& table_;
    OllaConfig cfg_;
    OllaState state_;
    std::optional<double> last_target_;
};

class OracleRuntime final : public AdapterRuntime {
public:
    OracleRuntime(const BlerTable& table, double target) : table_(table), target_(target) {}

    void deliver(const HarqFeedback&) override {}

    IllaDecision select(long /*slot*/, int tbs_bits, double true_sinr_db) override {
        return select_mcs_illa(table_, true_sinr_db, target_, tbs_bits);
    }

    double estimate_db(double true_sinr_db) const override { return true_sinr_db; }
    std::optional<double> instant_target() const override { return target_; }

private:
    const BlerTable& table_;
    double target_;
};

class SaladRuntime final : public AdapterRuntime {
public:
    SaladRuntime(const BlerTable& table, SaladConfig cfg, std::mt19937_64 probe_rng)
        : adapter_(table, cfg, probe_rng) {}

    void deliver(const HarqFeedback& fb) override { pending_.push_back(fb); }
    void report(double sinr_db) override { adapter_.on_report(sinr_db); }

    IllaDecision select(long slot, int tbs_bits, double /*true_sinr_db*/) override {
        SlotContext ctx;
        ctx.slot = slot;
        ctx.scheduled = true;
        ctx.tbs_bits = tbs_bits;
        ctx.feedbacks = pending_;
        last_ = adapter_.step(ctx);
        pending_.clear();
        stepped_this_slot_ = true;
        return *last_.decision;
    }

    void end_slot(long slot) override { finish_slot(slot, true); }
    void drain_slot(long slot) override { finish_slot(slot, false); }

    double estimate_db(double /*true_sinr_db*/) const override { return adapter_.estimate_db(); }
    std::optional<double> instant_target() const override { return last_.instant_target; }
    std::optional<double> bias_ratio() const override { return last_.bias_ratio; }
    std::optional<bool> probe_flag() const override {
        return last_.decision ? std::optional<bool>(last_.probed) : std::nullopt;
    }
    std::optional<double> integral_error() const override {
        return adapter_.state().integral_error;
    }
    std::vector<DistillEvent> distill_events() const override { return adapter_.distill_log(); }

    const SaladAdapter& adapter() const { return adapter_; }

private:
    void finish_slot(long slot, bool allow_distill) {
        if (!stepped_this_slot_) {
            SlotContext ctx;
            ctx.slot = slot;
            ctx.scheduled = false;
            ctx.feedbacks = pending_;
            ctx.allow_distill = allow_distill;
            last_ = adapter_.step(ctx);
            pending_.clear();
        }
        stepped_this_slot_ = false;
    }

    SaladAdapter adapter_;
    std::vector<HarqFeedback> pending_;
    SaladStepResult last_;
    bool stepped_this_slot_ = false;
};

std::unique_ptr<AdapterRuntime> make_adapter(const Scenario& sc, const BlerTable& table) {
    switch (sc.adapter) {
        case AdapterKind::olla:
            return std::make_unique<OllaRuntime>(table, sc.olla);
        case AdapterKind::oracle:
            return std::make_unique<OracleRuntime>(table, sc.olla.target);
        case AdapterKind::salad:
            return std::make_unique<SaladRuntime>(table, sc.salad_cfg,
                                                  make_rng(sc.seed, RngStream::probe));
    }
    throw ConfigError("unknown adapter kind");
}

}  // namespace

double normalized_tp(const std::vector<SlotTrace>& trace, const BlerTable& table) {
    if (trace.empty()) return 0.0;
    double acked_bits = 0.0;
    double se_sum = 0.0;
    long scheduled = 0;
    for (const auto& row : trace) {
        if (!row.mcs) continue;
        ++scheduled;
        se_sum += table.se(*row.mcs);
        if (row.nack && !*row.nack) {
            acked_bits += static_cast<double>(*row.tbs);
        }
    }
    if (scheduled == 0) return 0.0;
    const double tp_first_round = acked_bits / static_cast<double>(trace.size());
    const double se_sched = se_sum / static_cast<double>(scheduled);
    return tp_first_round * se_sched / table.mcs_table().min_se();
}

std::vector<std::pair<long, double>> sliding_bler(const std::vector<DeliveryEvent>& deliveries,
                                                  long n_slots, int window) {
    std::vector<std::pair<long, double>> series;
    if (window < 1 || n_slots <= 0) return series;
    std::size_t lo = 0, hi = 0;
    long nacks = 0;
    for (long slot = 0; slot < n_slots; ++slot) {
        while (hi < deliveries.size() && deliveries[hi].slot <= slot) {
            nacks += deliveries[hi].nack ? 1 : 0;
            ++hi;
        }
        while (lo < hi && deliveries[lo].slot <= slot - window) {
            nacks -= deliveries[lo].nack ? 1 : 0;
            ++lo;
        }
        const std::size_t count = hi - lo;
        if (count > 0) {
            series.emplace_back(slot, static_cast<double>(nacks) / static_cast<double>(count));
        }
    }
    return series;
}

Metrics compute_metrics(const std::vector<SlotTrace>& trace,
                        const std::vector<DeliveryEvent>& deliveries, const BlerTable& table,
                        const Scenario& scenario) {
    Metrics m;
    m.slots = static_cast<long>(trace.size());
    m.sliding_window = scenario.sliding_window;
    for (const auto& row : trace) {
        if (!row.mcs) continue;
        ++m.transmissions;
        if (row.nack && *row.nack) ++m.nacks;
        m.mean_se += table.se(*row.mcs);
    }
    if (m.transmissions > 0) {
        m.long_term_bler = static_cast<double>(m.nacks) / static_cast<double>(m.transmissions);
        m.mean_se /= static_cast<double>(m.transmissions);
    }
    m.feedbacks_delivered = static_cast<long>(deliveries.size());
    m.normalized_tp = normalized_tp(trace, table);
    m.sliding_bler = sliding_bler(deliveries, m.slots, scenario.sliding_window);

    const auto& switches = scenario.channel.switch_slots();
    if (!switches.empty() && !trace.empty()) {
        const long switch_slot = switches.front();
        for (const auto& row : trace) {
            if (row.slot < switch_slot) continue;
            if (std::abs(row.est_sinr_db - row.true_sinr_db) < 1.0) {
                m.adaptation_time_slots = row.slot - switch_slot;
                break;
            }
        }
    }
    return m;
}

RunResult run_scenario(const Scenario& scenario, const BlerTable& table) {
    scenario.validate();

    RunResult result;
    result.trace.reserve(static_cast<std::size_t>(scenario.n_slots));

    auto adapter = make_adapter(scenario, table);
    auto channel_rng = make_rng(scenario.seed, RngStream::channel);
    HarqQueue queue(scenario.harq_delay, scenario.slot_mask);

    for (long t = 0; t < scenario.n_slots; ++t) {
        const double truth = scenario.channel.at(t);

        if (scenario.cqi_period_slots > 0 && t % scenario.cqi_period_slots == 0) {
            adapter->report(truth);
        }

        for (const auto& fb : queue.pop_due(t)) {
            adapter->deliver(fb);
            result.deliveries.push_back({t, fb.nack});
        }

        SlotTrace row;
        row.slot = t;
        row.true_sinr_db = truth;

        const bool scheduled = scenario.schedulable(t);
        if (scheduled) {
            const int tbs = scenario.tbs_at(t);
            const IllaDecision decision = adapter->select(t, tbs, truth);
            row.est_sinr_db = adapter->estimate_db(truth);
            const bool nack = draw_outcome(table, decision.mcs, truth, tbs, channel_rng);
            queue.push(t, HarqFeedback{t, decision.mcs, tbs, nack});
            row.mcs = decision.mcs;
            row.tbs = tbs;
            row.nack = nack;
            row.instant_target = adapter->instant_target();
            row.bias_ratio = adapter->bias_ratio();
            row.probe_flag = adapter->probe_flag();
        }
        adapter->end_slot(t);
        if (!scheduled) {
            row.est_sinr_db = adapter->estimate_db(truth);
        }
        row.integral_error = adapter->integral_error();
        result.trace.push_back(row);
    }

    // Drain: every transmission must be acknowledged by end of run.
    for (long t = scenario.n_slots; !queue.empty(); ++t) {
        for (const auto& fb : queue.pop_due(t)) {
            adapter->deliver(fb);
            result.deliveries.push_back({t, fb.nack});
        }
        adapter->drain_slot(t);
    }

    result.distill_events = adapter->distill_events();
    if (auto ie = adapter->integral_error()) {
        result.final_integral_error = *ie;
    }
    result.metrics = compute_metrics(result.trace, result.deliveries, table, scenario);
    return result;
}

RunResult run_scenario(const Scenario& scenario) {
    if (scenario.bler_table_ref == "builtin") {
        return run_scenario(scenario, BlerTable::bundled_default());
    }
    const BlerTable table = BlerTable::load(scenario.bler_table_ref);
    return run_scenario(scenario, table);
}

}  // namespace salad
