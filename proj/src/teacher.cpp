#include "salad/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace salad {

namespace {

// log(sigmoid(z)) without overflow on either tail.
double log_sigmoid(double z) {
    if (z >= 0.0) {
        return -std::log1p(std::exp(-z));
    }
    return z - std::log1p(std::exp(z));
}

}  // namespace

SplineModel::Basis SplineModel::basis_at(double slot) const {
    if (knots.size() < 2 || theta.size() != knots.size()) {
        throw std::logic_error("spline model needs K >= 2 knots with matching heights");
    }
    if (slot < knots.front() || slot > knots.back()) {
        throw std::out_of_range("slot outside the spline knot span");
    }
    auto it = std::upper_bound(knots.begin(), knots.end(), slot);
    std::size_t hi = static_cast<std::size_t>(it - knots.begin());
    if (hi == knots.size()) --hi;  // right endpoint
    if (hi == 0) ++hi;
    const std::size_t lo = hi - 1;
    const double t = (slot - knots[lo]) / (knots[hi] - knots[lo]);
    return Basis{lo, 1.0 - t, t};
}

double SplineModel::eval(double slot) const {
    const Basis b = basis_at(slot);
    return b.w_left * theta[b.k] + b.w_right * theta[b.k + 1];
}

double bce_loss(const SplineModel& model, const HistoryBatch& batch) {
    double loss = 0.0;
    for (const auto& s : batch.samples) {
        const double z = (model.eval(static_cast<double>(s.slot)) - s.center_db) / s.scale_db;
        // BLER = sigmoid(-z); ACK likelihood = sigmoid(z)
        loss += s.nack ? -log_sigmoid(-z) : -log_sigmoid(z);
    }
    return loss;
}

LossGrad bce_loss_and_grad(const SplineModel& model, const HistoryBatch& batch) {
    const std::size_t K = model.theta.size();
    LossGrad out;
    out.grad.assign(K, 0.0);

    for (const auto& s : batch.samples) {
        const SplineModel::Basis b = model.basis_at(static_cast<double>(s.slot));
        const double est = b.w_left * model.theta[b.k] + b.w_right * model.theta[b.k + 1];
        const double z = (est - s.center_db) / s.scale_db;
        const double bler = sigmoid(-z);
        out.loss += s.nack ? -log_sigmoid(-z) : -log_sigmoid(z);
        const double factor = ((s.nack ? 1.0 : 0.0) - bler) / s.scale_db;
        out.grad[b.k] += factor * b.w_left;
        out.grad[b.k + 1] += factor * b.w_right;
    }

    const double beta = model.beta;
    if (beta > 0.0) {
        for (std::size_t k = 1; k < K; ++k) {
            const double d = model.theta[k] - model.theta[k - 1];
            out.loss += beta * d * d;
            out.grad[k] += 2.0 * beta * d;
            out.grad[k - 1] -= 2.0 * beta * d;
        }
    }
    return out;
}

SplineModel fit_teacher(const HistoryBatch& batch, int knot_count, double beta,
                        const TeacherFitOptions& opts) {
    if (batch.empty()) {
        throw FitError("teacher fit needs a non-empty batch");
    }
    if (knot_count < 2) {
        throw FitError("teacher fit needs at least two knots");
    }
    if (static_cast<std::size_t>(knot_count) > batch.size()) {
        throw FitError("teacher fit needs at least as many samples as knots");
    }

    double first = static_cast<double>(batch.first_slot());
    double last = static_cast<double>(batch.last_slot());
    if (opts.span) {
        first = opts.span->first;
        last = opts.span->second;
    }
    if (!(last > first)) {
        throw FitError("teacher fit needs a window spanning more than one slot");
    }

    SplineModel model;
    model.beta = beta;
    model.knots.resize(static_cast<std::size_t>(knot_count));
    for (int k = 0; k < knot_count; ++k) {
        model.knots[static_cast<std::size_t>(k)] =
            first + (last - first) * k / static_cast<double>(knot_count - 1);
    }
    model.theta.assign(static_cast<std::size_t>(knot_count), opts.theta_init);

    LossGrad cur = bce_loss_and_grad(model, batch);
    if (!std::isfinite(cur.loss)) {
        throw FitError("teacher fit: non-finite initial loss");
    }

    double step = opts.step_db;
    std::vector<double> candidate(model.theta.size());
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        double gmax = 0.0;
        for (double g : cur.grad) gmax = std::max(gmax, std::abs(g));
        if (gmax < opts.grad_tol) break;

        bool accepted = false;
        while (step >= 1e-12) {
            for (std::size_t k = 0; k < candidate.size(); ++k) {
                candidate[k] = model.theta[k] - step * cur.grad[k];
            }
            SplineModel trial = model;
            trial.theta = candidate;
            LossGrad next = bce_loss_and_grad(trial, batch);
            if (!std::isfinite(next.loss)) {
                throw FitError("teacher fit: non-finite loss during descent");
            }
            if (next.loss <= cur.loss) {
                model.theta = candidate;
                cur = std::move(next);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return model;
}

int select_knots_cv(const HistoryBatch& batch, std::span<const int> candidates, double beta,
                    const TeacherFitOptions& opts) {
    if (candidates.empty()) {
        throw FitError("knot selection needs at least one candidate");
    }
    std::vector<int> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end());
    if (candidates.size() == 1) {
        return sorted.front();
    }

    HistoryBatch train, test;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        (i % 2 == 0 ? train : test).samples.push_back(batch.samples[i]);
    }
    if (train.size() < 2 || test.empty()) {
        return sorted.front();
    }

    TeacherFitOptions fit_opts = opts;
    if (!fit_opts.span) {
        // Both halves must stay inside the knot span.
        fit_opts.span = {static_cast<double>(batch.first_slot()),
                         static_cast<double>(batch.last_slot())};
    }

    int best_k = sorted.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (int k : sorted) {
        if (static_cast<std::size_t>(k) > train.size()) continue;
        SplineModel model = fit_teacher(train, k, beta, fit_opts);
        const double score = bce_loss(model, test);
        if (score < best_score) {  // strict: ties keep the smaller K
            best_score = score;
            best_k = k;
        }
    }
    return best_k;
}

double distill_learning_rate(const HistoryBatch& batch, const SplineModel& teacher,
                             std::span<const double> epsilon_grid, ClipInterval bler_clip,
                             ClipInterval scale_clip) {
    if (epsilon_grid.empty()) {
        throw FitError("distillation needs a non-empty learning-rate grid");
    }
    if (batch.empty()) {
        throw FitError("distillation needs a non-empty batch");
    }
    std::vector<double> grid(epsilon_grid.begin(), epsilon_grid.end());
    std::sort(grid.begin(), grid.end());

    // Teacher targets at each sample slot, computed once.
    std::vector<double> target(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        target[i] = teacher.eval(static_cast<double>(batch.samples[i].slot));
    }

    double best_eps = grid.front();
    double best_err = std::numeric_limits<double>::infinity();
    for (double eps : grid) {
        double est = target.front();  // student starts at the teacher's first value
        double err = 0.0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const double d = est - target[i];
            err += d * d;
            const auto& s = batch.samples[i];
            const double raw_bler = sigmoid(-(est - s.center_db) / s.scale_db);
            const double bler = bler_clip.clamp(raw_bler);
            const double scale = scale_clip.clamp(s.scale_db);
            est += eps / scale * (bler - (s.nack ? 1.0 : 0.0));
        }
        if (err < best_err) {  // strict: ties keep the smaller epsilon
            best_err = err;
            best_eps = eps;
        }
    }
    return best_eps;
}

}  // namespace salad
