#pragma once

#include <filesystem>
#include <vector>

#include "salad/error.hpp"

namespace salad {

/// Deterministic true-SINR trajectory, one dB value per slot.
class ChannelTrajectory {
public:
    enum class Kind { constant, step, multi_step, chirp, file_trace };

    static ChannelTrajectory constant(double level_db);
    /// Two levels with a single switch slot.
    static ChannelTrajectory step(double before_db, double after_db, long switch_slot);
    /// levels_db[i] holds until switch_slots[i]; requires one more level than
    /// switch slot, switch slots strictly increasing.
    static ChannelTrajectory multi_step(std::vector<double> levels_db,
                                        std::vector<long> switch_slots);
    /// Sinusoid whose frequency ramps linearly from freq_start to freq_end
    /// (cycles/slot) over ramp_slots.
    static ChannelTrajectory chirp(double center_db, double amplitude_db, double freq_start,
                                   double freq_end, long ramp_slots);
    /// One dB value per line; must cover every simulated slot.
    static ChannelTrajectory file_trace(const std::filesystem::path& path);
    static ChannelTrajectory from_samples(std::vector<double> samples_db);

    double at(long slot) const;
    Kind kind() const { return kind_; }

    /// Slots at which the level changes (steps only); used by the
    /// adaptation-time metric.
    const std::vector<long>& switch_slots() const { return switch_slots_; }

    /// Number of slots the trajectory can serve; -1 when unbounded.
    long length_limit() const;

private:
    ChannelTrajectory() = default;

    Kind kind_ = Kind::constant;
    double level_db_ = 0.0;
    std::vector<double> levels_db_;
    std::vector<long> switch_slots_;
    double center_db_ = 0.0;
    double amplitude_db_ = 0.0;
    double freq_start_ = 0.0;
    double freq_end_ = 0.0;
    long ramp_slots_ = 1;
    std::vector<double> samples_db_;
};

}  // namespace salad
