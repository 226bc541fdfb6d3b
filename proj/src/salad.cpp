#include "salad/salad.hpp"

#include <cmath>

#include "salad/rng.hpp"

namespace salad {

void SaladConfig::validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("salad epsilon must be positive");
    if (!(rho > 0.0)) throw ConfigError("salad rho must be positive");
    if (window < 1) throw ConfigError("salad window must be at least 1");
    if (!(p_probe > 0.0 && p_probe <= 1.0)) throw ConfigError("salad p_probe must lie in (0, 1]");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("salad tau must lie in (0, 1)");
    if (!(tau_probe > tau && tau_probe <= 1.0)) {
        throw ConfigError("salad tau_probe must lie in (tau, 1]");
    }
    if (!(k_E > 0.0)) throw ConfigError("salad k_E must be positive");
    if (N_eps < 0) throw ConfigError("salad N_eps must be non-negative (0 disables distillation)");
}

double BiasScore::ratio() const {
    return score / std::sqrt(variance);
}

BiasScore bias_score(std::span<const FeedbackRecord> records, int window) {
    const std::size_t T = static_cast<std::size_t>(window);
    BiasScore out;
    const std::size_t begin = records.size() - T;
    for (std::size_t i = begin; i < records.size(); ++i) {
        const auto& r = records[i];
        out.score += r.predicted_bler - (r.nack ? 1.0 : 0.0);
        out.variance += r.predicted_bler * (1.0 - r.predicted_bler);
    }
    out.score /= static_cast<double>(T);
    out.variance /= static_cast<double>(T) * static_cast<double>(T);
    return out;
}

bool probe_decision(const BiasScore& score, double rho, double p_probe, std::mt19937_64& rng) {
    if (!(score.ratio() > rho)) {
        return false;  // no draw consumed below threshold
    }
    return uniform01(rng) < p_probe;
}

DistillOptions DistillOptions::defaults() {
    DistillOptions opts;
    for (int i = 1; i <= 30; ++i) {
        opts.epsilon_grid.push_back(0.1 * i);
    }
    return opts;
}

SaladAdapter::SaladAdapter(const BlerTable& table, SaladConfig config, std::mt19937_64 probe_rng,
                           DistillOptions distill)
    : table_(table), config_(config), distill_(std::move(distill)), probe_rng_(probe_rng) {
    config_.validate();
    state_.epsilon = config_.epsilon;
}

void SaladAdapter::on_feedback(const HarqFeedback& fb) {
    state_.integral_error += config_.tau - (fb.nack ? 1.0 : 0.0);

    const auto& entry = table_.resolve(fb.mcs, fb.tbs_bits);
    const double est = estimate_db();
    const double raw_bler = 1.0 - sigmoid((est - entry.center_db) / entry.scale_db);
    const auto [bler, scale] = table_.clip_bler_scale(raw_bler, entry.scale_db);

    state_.gamma_est_db += state_.epsilon / scale * (bler - (fb.nack ? 1.0 : 0.0));

    FeedbackRecord rec;
    rec.slot = fb.slot;
    rec.mcs = fb.mcs;
    rec.tbs_bits = fb.tbs_bits;
    rec.predicted_bler = bler;
    rec.scale_used_db = scale;
    rec.nack = fb.nack;
    state_.history.push_back(rec);
}

std::optional<BiasScore> SaladAdapter::current_bias_score() const {
    if (state_.history.size() < static_cast<std::size_t>(config_.window)) {
        return std::nullopt;
    }
    std::vector<FeedbackRecord> tail(state_.history.end() - config_.window, state_.history.end());
    return bias_score(tail, config_.window);
}

double SaladAdapter::instantaneous_target(bool probing) const {
    const double base = probing ? config_.tau_probe : config_.tau;
    if (probing && config_.adjust_only_when_not_probing) {
        return base;
    }
    const double adjusted = base + config_.k_E * state_.integral_error;
    return adjusted < 0.0 ? 0.0 : (adjusted > 1.0 ? 1.0 : adjusted);
}

SaladStepResult SaladAdapter::step(const SlotContext& ctx) {
    for (const auto& fb : ctx.feedbacks) {
        on_feedback(fb);
    }

    SaladStepResult result;
    if (ctx.scheduled) {
        bool probing = false;
        if (auto score = current_bias_score()) {
            result.bias_ratio = score->ratio();
            probing = probe_decision(*score, config_.rho, config_.p_probe, probe_rng_);
        }
        result.probed = probing;
        const double target = instantaneous_target(probing);
        result.instant_target = target;
        result.decision = select_mcs_illa(table_, estimate_db(), target, ctx.tbs_bits);
    }

    if (ctx.allow_distill) {
        maybe_distill(ctx.slot);
    }
    prune_history(ctx.slot);
    return result;
}

void SaladAdapter::prune_history(long now_slot) {
    // Keep the distillation window plus enough records for the bias score.
    const long cutoff = now_slot - static_cast<long>(config_.N_eps);
    while (state_.history.size() > static_cast<std::size_t>(config_.window) &&
           state_.history.front().slot < cutoff) {
        state_.history.pop_front();
    }
}

void SaladAdapter::maybe_distill(long slot) {
    if (config_.N_eps <= 0 || slot <= 0 || slot % config_.N_eps != 0) {
        return;
    }
    DistillEvent event;
    event.slot = slot;
    event.selected_epsilon = state_.epsilon;

    HistoryBatch batch;
    const long window_start = slot - static_cast<long>(config_.N_eps);
    for (const auto& r : state_.history) {
        if (r.slot < window_start) continue;
        const auto& entry = table_.resolve(r.mcs, r.tbs_bits);
        batch.samples.push_back({r.slot, r.nack, entry.center_db, entry.scale_db});
    }

    if (batch.size() < distill_.min_batch) {
        event.message = "history too short";
        distill_log_.push_back(event);
        return;
    }
    if (batch.last_slot() == batch.first_slot()) {
        event.message = "degenerate window";
        distill_log_.push_back(event);
        return;
    }

    try {
        TeacherFitOptions fit_opts;
        fit_opts.theta_init = estimate_db();
        const int k = select_knots_cv(batch, distill_.knot_candidates, distill_.beta, fit_opts);
        const SplineModel teacher = fit_teacher(batch, k, distill_.beta, fit_opts);
        const double eps = distill_learning_rate(batch, teacher, distill_.epsilon_grid,
                                                 table_.bler_clip(), table_.scale_clip());
        state_.epsilon = eps;
        event.ok = true;
        event.selected_epsilon = eps;
        event.selected_knots = k;
    } catch (const FitError& e) {
        event.message = e.what();
    }
    distill_log_.push_back(event);
}

}  // namespace salad
