#pragma once

#include <optional>
#include <span>
#include <vector>

#include "salad/bler_model.hpp"

namespace salad {

/// First-order spline over slot time: triangle basis functions centered at
/// uniform knots, one height per knot, plus a total-variation coefficient for
/// the squared-difference regularizer.
struct SplineModel {
    std::vector<double> knots;  // strictly increasing slot positions, K >= 2
    std::vector<double> theta;  // knot heights in dB
    double beta = 0.0;          // total-variation coefficient, >= 0

    /// Linear interpolation between adjacent knots; equals theta[k] at
    /// knots[k]. Throws std::out_of_range outside the knot span.
    double eval(double slot) const;

    /// Triangle-basis weights at `slot`: at most two are nonzero; returned as
    /// (left knot index, left weight, right weight).
    struct Basis {
        std::size_t k = 0;
        double w_left = 1.0;
        double w_right = 0.0;
    };
    Basis basis_at(double slot) const;
};

/// One delivered feedback with its resolved sigmoid parameters, ready for
/// batch estimation in hindsight.
struct TeacherSample {
    long slot = 0;
    bool nack = false;
    double center_db = 0.0;
    double scale_db = 1.0;
};

struct HistoryBatch {
    std::vector<TeacherSample> samples;  // slots non-decreasing

    long first_slot() const { return samples.front().slot; }
    long last_slot() const { return samples.back().slot; }
    bool empty() const { return samples.empty(); }
    std::size_t size() const { return samples.size(); }
};

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;
};

/// Sum of per-sample binary cross-entropies of ACK/NACK against the sigmoid
/// BLER at the spline's SINR, without the regularizer.
double bce_loss(const SplineModel& model, const HistoryBatch& batch);

/// Full objective (BCE plus total-variation term) and its exact gradient.
LossGrad bce_loss_and_grad(const SplineModel& model, const HistoryBatch& batch);

struct TeacherFitOptions {
    double step_db = 0.5;     // initial gradient step, halved on loss increase
    int max_iters = 200;
    double grad_tol = 1e-6;   // infinity-norm stopping threshold
    double theta_init = 0.0;  // all knots start here
    // Knot span; defaults to the batch's [first_slot, last_slot].
    std::optional<std::pair<double, double>> span;
};

/// Batch gradient descent with backtracking; only loss-decreasing steps are
/// accepted, so the final loss never exceeds the initial one. Deterministic.
SplineModel fit_teacher(const HistoryBatch& batch, int knot_count, double beta,
                        const TeacherFitOptions& opts = {});

/// Cross-validated knot count: fit on even-indexed samples, score BCE on
/// odd-indexed ones, smallest candidate wins ties. Candidates larger than the
/// training half are skipped.
int select_knots_cv(const HistoryBatch& batch, std::span<const int> candidates, double beta,
                    const TeacherFitOptions& opts = {});

/// Replays the student recursion over the batch for each candidate learning
/// rate, starting from the teacher's value at the first slot, and returns the
/// rate whose trajectory stays closest to the teacher (squared error; ties
/// toward the smaller rate). BLER and scale are clipped as in the live
/// student update.
double distill_learning_rate(const HistoryBatch& batch, const SplineModel& teacher,
                             std::span<const double> epsilon_grid, ClipInterval bler_clip,
                             ClipInterval scale_clip);

}  // namespace salad
