#include "salad/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace salad {

ChannelTrajectory ChannelTrajectory::constant(double level_db) {
    ChannelTrajectory c;
    c.kind_ = Kind::constant;
    c.level_db_ = level_db;
    return c;
}

ChannelTrajectory ChannelTrajectory::step(double before_db, double after_db, long switch_slot) {
    return multi_step({before_db, after_db}, {switch_slot});
}

ChannelTrajectory ChannelTrajectory::multi_step(std::vector<double> levels_db,
                                                std::vector<long> switch_slots) {
    if (levels_db.size() != switch_slots.size() + 1) {
        throw ConfigError("multi-step channel needs one more level than switch slots");
    }
    if (!std::is_sorted(switch_slots.begin(), switch_slots.end()) ||
        std::adjacent_find(switch_slots.begin(), switch_slots.end()) != switch_slots.end()) {
        throw ConfigError("switch slots must be strictly increasing");
    }
    ChannelTrajectory c;
    c.kind_ = levels_db.size() == 2 ? Kind::step : Kind::multi_step;
    c.levels_db_ = std::move(levels_db);
    c.switch_slots_ = std::move(switch_slots);
    return c;
}

ChannelTrajectory ChannelTrajectory::chirp(double center_db, double amplitude_db,
                                           double freq_start, double freq_end, long ramp_slots) {
    if (freq_start < 0.0 || freq_end < 0.0) {
        throw ConfigError("chirp frequencies must be non-negative");
    }
    if (ramp_slots < 1) {
        throw ConfigError("chirp ramp must span at least one slot");
    }
    ChannelTrajectory c;
    c.kind_ = Kind::chirp;
    c.center_db_ = center_db;
    c.amplitude_db_ = amplitude_db;
    c.freq_start_ = freq_start;
    c.freq_end_ = freq_end;
    c.ramp_slots_ = ramp_slots;
    return c;
}

ChannelTrajectory ChannelTrajectory::from_samples(std::vector<double> samples_db) {
    if (samples_db.empty()) {
        throw ConfigError("channel trace must contain at least one sample");
    }
    ChannelTrajectory c;
    c.kind_ = Kind::file_trace;
    c.samples_db_ = std::move(samples_db);
    return c;
}

ChannelTrajectory ChannelTrajectory::file_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open channel trace file: " + path.string());
    }
    std::vector<double> samples;
    double v = 0.0;
    while (in >> v) {
        samples.push_back(v);
    }
    return from_samples(std::move(samples));
}

double ChannelTrajectory::at(long slot) const {
    switch (kind_) {
        case Kind::constant:
            return level_db_;
        case Kind::step:
        case Kind::multi_step: {
            std::size_t i = 0;
            while (i < switch_slots_.size() && slot >= switch_slots_[i]) {
                ++i;
            }
            return levels_db_[i];
        }
        case Kind::chirp: {
            // Instantaneous frequency f(t) = f0 + (f1 - f0) * t / N; the phase
            // is its integral, so sweeps are smooth.
            const double t = static_cast<double>(slot);
            const double n = static_cast<double>(ramp_slots_);
            const double phase =
                2.0 * std::numbers::pi *
                (freq_start_ * t + (freq_end_ - freq_start_) * t * t / (2.0 * n));
            return center_db_ + amplitude_db_ * std::sin(phase);
        }
        case Kind::file_trace: {
            if (slot < 0 || static_cast<std::size_t>(slot) >= samples_db_.size()) {
                throw ConfigError("channel trace shorter than the simulated horizon");
            }
            return samples_db_[static_cast<std::size_t>(slot)];
        }
    }
    return level_db_;
}

long ChannelTrajectory::length_limit() const {
    if (kind_ == Kind::file_trace) {
        return static_cast<long>(samples_db_.size());
    }
    return -1;
}

}  // namespace salad
