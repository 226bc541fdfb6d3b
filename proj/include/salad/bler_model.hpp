#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "salad/error.hpp"

namespace salad {

/// One modulation-and-coding scheme: index and spectral efficiency in
/// bits/symbol (modulation order times code rate).
struct McsEntry {
    int index = 0;
    double se = 0.0;
};

/// Ordered MCS set. Indices and spectral efficiencies are strictly
/// increasing; immutable after construction.
class McsTable {
public:
    explicit McsTable(std::vector<McsEntry> entries);

    /// The 28-index PDSCH table (MCS table 2 spectral efficiencies).
    static const McsTable& default_table();

    double se(int mcs) const;  // throws LookupError on unknown index
    bool contains(int mcs) const;

    const std::vector<McsEntry>& entries() const { return entries_; }
    int lowest() const { return entries_.front().index; }
    int highest() const { return entries_.back().index; }
    double min_se() const { return entries_.front().se; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<McsEntry> entries_;
};

/// Sigmoid BLER curve parameters for one (MCS, CBS) pair:
/// BLER(gamma) = 1 - sigmoid((gamma - center) / scale), all in dB.
struct SigmoidBlerEntry {
    int mcs = 0;
    int cbs_bits = 0;
    double center_db = 0.0;
    double scale_db = 0.0;
    bool synthetic = false;  // interpolated rather than fitted from samples
};

struct ClipInterval {
    double lo = 0.0;
    double hi = 1.0;
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

inline constexpr ClipInterval kDefaultBlerClip{0.01, 0.99};
inline constexpr ClipInterval kDefaultScaleClip{0.5, 10.0};

double sigmoid(double z);

/// BLER lookup table backed by per-(MCS, CBS) sigmoid fits. A table may cover
/// only a subset of the base MCS set; selectors iterate the covered subset.
/// Immutable after construction and safe for concurrent reads.
class BlerTable {
public:
    BlerTable(std::vector<SigmoidBlerEntry> entries,
              const McsTable& base = McsTable::default_table(),
              ClipInterval bler_clip = kDefaultBlerClip,
              ClipInterval scale_clip = kDefaultScaleClip);

    /// Measured anchor rows plus synthetic rows interpolated over spectral
    /// efficiency so that every MCS index has CBS 100 and 2000 entries.
    static const BlerTable& bundled_default();

    /// Text format: `mcs,cbs,center_db,scale_db[,synthetic]` per line,
    /// `#` comments and an optional header allowed.
    static BlerTable load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    /// Nearest bundled CBS by absolute bit difference, ties toward larger.
    const SigmoidBlerEntry& resolve(int mcs, int tbs_bits) const;

    double bler(int mcs, double gamma_db, int tbs_bits) const;
    double bler_clipped(int mcs, double gamma_db, int tbs_bits) const;

    /// Clips a BLER value and a scale to the table intervals; idempotent.
    std::pair<double, double> clip_bler_scale(double bler, double scale_db) const;

    double se(int mcs) const { return mcs_.se(mcs); }
    const McsTable& mcs_table() const { return mcs_; }
    const std::vector<SigmoidBlerEntry>& entries() const { return entries_; }
    ClipInterval bler_clip() const { return bler_clip_; }
    ClipInterval scale_clip() const { return scale_clip_; }

private:
    McsTable mcs_;  // restricted to indices covered by entries_
    std::vector<SigmoidBlerEntry> entries_;  // sorted by (mcs, cbs)
    ClipInterval bler_clip_;
    ClipInterval scale_clip_;
};

struct SigmoidFit {
    double center_db = 0.0;
    double scale_db = 1.0;
    double mse = 0.0;
};

/// Least-squares fit of the translated/scaled sigmoid to (SNR dB, BLER)
/// samples: grid initialization followed by damped Gauss-Newton refinement,
/// stopping at a 1e-8 parameter step. Throws FitError when fewer than two
/// samples lie strictly inside (0, 1).
SigmoidFit fit_sigmoid(std::span<const std::pair<double, double>> snr_bler_points);

}  // namespace salad
