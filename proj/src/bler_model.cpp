#include "salad/bler_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace salad {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ConfigError("MCS table must not be empty");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].se <= 0.0) {
            throw ConfigError("MCS spectral efficiency must be positive");
        }
        if (i > 0 && (entries_[i].index <= entries_[i - 1].index ||
                      entries_[i].se <= entries_[i - 1].se)) {
            throw ConfigError("MCS indices and spectral efficiencies must be strictly increasing");
        }
    }
}

namespace {

// Spectral efficiencies of PDSCH MCS table 2, indices 0..27.
constexpr std::array<double, 28> kDefaultSe = {
    0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.6953, 1.9141, 2.1602, 2.4063,
    2.5703, 2.7305, 3.0293, 3.3223, 3.6094, 3.9023, 4.2129, 4.5234, 4.8164, 5.1152,
    5.3320, 5.5547, 5.8906, 6.2266, 6.5703, 6.9141, 7.1602, 7.4063,
};

struct AnchorRow {
    int mcs;
    int cbs;
    double center;
    double scale;
};

// Measured sigmoid parameters for a few (MCS, CBS) pairs; the bundled table
// interpolates the remaining indices from these over spectral efficiency.
constexpr std::array<AnchorRow, 10> kAnchorRows = {{
    {2, 100, -1.91, 0.44},
    {2, 2000, -2.01, 0.36},
    {6, 100, 4.84, 0.51},
    {6, 2000, 5.04, 0.20},
    {10, 100, 8.36, 0.52},
    {10, 2000, 9.04, 0.04},
    {14, 100, 12.20, 0.57},
    {14, 2000, 12.32, 0.38},
    {20, 100, 18.10, 0.69},
    {20, 2000, 18.54, 0.06},
}};

// Piecewise-linear y(x) with linear extrapolation beyond the anchor range.
double interp_linear(std::span<const double> xs, std::span<const double> ys, double x) {
    const std::size_t n = xs.size();
    std::size_t hi = 1;
    while (hi + 1 < n && xs[hi] < x) {
        ++hi;
    }
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
}

// Same, but constant beyond the anchor range (keeps scales positive).
double interp_clamped(std::span<const double> xs, std::span<const double> ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    return interp_linear(xs, ys, x);
}

}  // namespace

const McsTable& McsTable::default_table() {
    static const McsTable table = [] {
        std::vector<McsEntry> entries;
        entries.reserve(kDefaultSe.size());
        for (std::size_t i = 0; i < kDefaultSe.size(); ++i) {
            entries.push_back({static_cast<int>(i), kDefaultSe[i]});
        }
        return McsTable(std::move(entries));
    }();
    return table;
}

double McsTable::se(int mcs) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), mcs,
                               [](const McsEntry& e, int v) { return e.index < v; });
    if (it == entries_.end() || it->index != mcs) {
        throw LookupError("unknown MCS index " + std::to_string(mcs));
    }
    return it->se;
}

bool McsTable::contains(int mcs) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), mcs,
                               [](const McsEntry& e, int v) { return e.index < v; });
    return it != entries_.end() && it->index == mcs;
}

BlerTable::BlerTable(std::vector<SigmoidBlerEntry> entries, const McsTable& base,
                     ClipInterval bler_clip, ClipInterval scale_clip)
    : mcs_({{0, 1.0}}),  // placeholder, rebuilt below
      entries_(std::move(entries)),
      bler_clip_(bler_clip),
      scale_clip_(scale_clip) {
    if (entries_.empty()) {
        throw ConfigError("BLER table must contain at least one entry");
    }
    if (!(0.0 < bler_clip_.lo && bler_clip_.lo < bler_clip_.hi && bler_clip_.hi < 1.0)) {
        throw ConfigError("BLER clip interval must be nested in (0, 1)");
    }
    if (!(0.0 < scale_clip_.lo && scale_clip_.lo < scale_clip_.hi)) {
        throw ConfigError("scale clip interval must be nested in (0, inf)");
    }
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
        return a.mcs != b.mcs ? a.mcs < b.mcs : a.cbs_bits < b.cbs_bits;
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.scale_db <= 0.0) {
            throw ConfigError("sigmoid scale must be positive (mcs " + std::to_string(e.mcs) + ")");
        }
        if (e.cbs_bits <= 0) {
            throw ConfigError("CBS must be positive (mcs " + std::to_string(e.mcs) + ")");
        }
        if (!base.contains(e.mcs)) {
            throw ConfigError("BLER entry references MCS " + std::to_string(e.mcs) +
                              " missing from the MCS table");
        }
        if (i > 0 && entries_[i - 1].mcs == e.mcs && entries_[i - 1].cbs_bits == e.cbs_bits) {
            throw ConfigError("duplicate BLER entry (mcs " + std::to_string(e.mcs) + ", cbs " +
                              std::to_string(e.cbs_bits) + ")");
        }
    }
    // Centers must be non-decreasing in MCS for each CBS.
    std::map<int, std::pair<int, double>> last_per_cbs;  // cbs -> (mcs, center)
    for (const auto& e : entries_) {
        auto it = last_per_cbs.find(e.cbs_bits);
        if (it != last_per_cbs.end() && e.center_db < it->second.second) {
            throw ConfigError("center not non-decreasing in MCS for CBS " +
                              std::to_string(e.cbs_bits));
        }
        last_per_cbs[e.cbs_bits] = {e.mcs, e.center_db};
    }
    // Restrict the MCS table to covered indices.
    std::vector<McsEntry> covered;
    for (const auto& m : base.entries()) {
        bool present = std::any_of(entries_.begin(), entries_.end(),
                                   [&](const auto& e) { return e.mcs == m.index; });
        if (present) {
            covered.push_back(m);
        }
    }
    mcs_ = McsTable(std::move(covered));
}

const BlerTable& BlerTable::bundled_default() {
    static const BlerTable table = [] {
        const auto& mcs = McsTable::default_table();
        std::vector<SigmoidBlerEntry> entries;
        for (int cbs : {100, 2000}) {
            std::vector<double> xs, centers, scales;
            for (const auto& row : kAnchorRows) {
                if (row.cbs != cbs) continue;
                xs.push_back(mcs.se(row.mcs));
                centers.push_back(row.center);
                scales.push_back(row.scale);
            }
            for (const auto& m : mcs.entries()) {
                const bool anchor = std::any_of(kAnchorRows.begin(), kAnchorRows.end(),
                                                [&](const AnchorRow& r) {
                                                    return r.mcs == m.index && r.cbs == cbs;
                                                });
                SigmoidBlerEntry e;
                e.mcs = m.index;
                e.cbs_bits = cbs;
                e.center_db = interp_linear(xs, centers, m.se);
                e.scale_db = interp_clamped(xs, scales, m.se);
                e.synthetic = !anchor;
                if (anchor) {
                    auto it = std::find_if(kAnchorRows.begin(), kAnchorRows.end(),
                                           [&](const AnchorRow& r) {
                                               return r.mcs == m.index && r.cbs == cbs;
                                           });
                    e.center_db = it->center;
                    e.scale_db = it->scale;
                }
                entries.push_back(e);
            }
        }
        return BlerTable(std::move(entries));
    }();
    return table;
}

const SigmoidBlerEntry& BlerTable::resolve(int mcs, int tbs_bits) const {
    auto lo = std::lower_bound(entries_.begin(), entries_.end(), mcs,
                               [](const SigmoidBlerEntry& e, int v) { return e.mcs < v; });
    if (lo == entries_.end() || lo->mcs != mcs) {
        throw LookupError("no BLER entry for MCS " + std::to_string(mcs));
    }
    const SigmoidBlerEntry* best = nullptr;
    long best_dist = std::numeric_limits<long>::max();
    for (auto it = lo; it != entries_.end() && it->mcs == mcs; ++it) {
        const long dist = std::labs(static_cast<long>(it->cbs_bits) - tbs_bits);
        // ties toward the larger CBS: entries are sorted by cbs, so >= wins
        if (dist < best_dist || (dist == best_dist && it->cbs_bits > best->cbs_bits)) {
            best = &*it;
            best_dist = dist;
        }
    }
    return *best;
}

double BlerTable::bler(int mcs, double gamma_db, int tbs_bits) const {
    const auto& e = resolve(mcs, tbs_bits);
    return 1.0 - sigmoid((gamma_db - e.center_db) / e.scale_db);
}

double BlerTable::bler_clipped(int mcs, double gamma_db, int tbs_bits) const {
    return bler_clip_.clamp(bler(mcs, gamma_db, tbs_bits));
}

std::pair<double, double> BlerTable::clip_bler_scale(double bler, double scale_db) const {
    return {bler_clip_.clamp(bler), scale_clip_.clamp(scale_db)};
}

BlerTable BlerTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open BLER table file: " + path.string());
    }
    std::vector<SigmoidBlerEntry> entries;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (trimmed.rfind("mcs", 0) == 0) continue;  // header row
        std::replace(trimmed.begin(), trimmed.end(), ',', ' ');
        std::istringstream ss(trimmed);
        SigmoidBlerEntry e;
        int synthetic = 0;
        if (!(ss >> e.mcs >> e.cbs_bits >> e.center_db >> e.scale_db)) {
            throw ConfigError("malformed BLER table row at " + path.string() + ":" +
                              std::to_string(line_no));
        }
        if (ss >> synthetic) {
            e.synthetic = synthetic != 0;
        }
        entries.push_back(e);
    }
    return BlerTable(std::move(entries));
}

void BlerTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write BLER table file: " + path.string());
    }
    out << "# sigmoid BLER table: BLER(gamma) = 1 - sigmoid((gamma - center_db) / scale_db)\n";
    out << "# synthetic=1 marks rows interpolated over spectral efficiency, not fitted\n";
    out << "mcs,cbs,center_db,scale_db,synthetic\n";
    char buf[160];
    for (const auto& e : entries_) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%d\n", e.mcs, e.cbs_bits, e.center_db,
                      e.scale_db, e.synthetic ? 1 : 0);
        out << buf;
    }
}

SigmoidFit fit_sigmoid(std::span<const std::pair<double, double>> points) {
    std::size_t interior = 0;
    for (const auto& [x, y] : points) {
        if (y > 0.0 && y < 1.0) ++interior;
    }
    if (points.size() < 2 || interior < 2) {
        throw FitError("sigmoid fit needs at least two BLER samples strictly inside (0, 1)");
    }

    const auto sse = [&](double c, double s) {
        double acc = 0.0;
        for (const auto& [x, y] : points) {
            const double r = (1.0 - sigmoid((x - c) / s)) - y;
            acc += r * r;
        }
        return acc;
    };

    auto [min_x, max_x] = std::minmax_element(
        points.begin(), points.end(),
        [](const auto& a, const auto& b) { return a.first < b.first; });

    // Coarse grid for initialization.
    double best_c = 0.0, best_s = 1.0, best = std::numeric_limits<double>::infinity();
    const double c_lo = min_x->first - 2.0, c_hi = max_x->first + 2.0;
    for (int i = 0; i <= 40; ++i) {
        const double c = c_lo + (c_hi - c_lo) * i / 40.0;
        for (int j = 0; j <= 24; ++j) {
            const double s = 0.05 * std::pow(10.0 / 0.05, j / 24.0);
            const double v = sse(c, s);
            if (v < best) {
                best = v;
                best_c = c;
                best_s = s;
            }
        }
    }

    // Damped Gauss-Newton on (c, q = ln s).
    double c = best_c, q = std::log(best_s);
    double lambda = 1e-6;
    for (int iter = 0; iter < 200; ++iter) {
        const double s = std::exp(q);
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        for (const auto& [x, y] : points) {
            const double z = (x - c) / s;
            const double sg = sigmoid(z);
            const double r = (1.0 - sg) - y;
            const double w = sg * (1.0 - sg);
            const double d_c = w / s;        // d pred / d c
            const double d_q = w * z;        // d pred / d q, via dz/dq = -z
            jtj00 += d_c * d_c;
            jtj01 += d_c * d_q;
            jtj11 += d_q * d_q;
            jtr0 += d_c * r;
            jtr1 += d_q * r;
        }
        const double a = jtj00 + lambda, b = jtj01, d = jtj11 + lambda;
        const double det = a * d - b * b;
        if (det <= 0.0 || !std::isfinite(det)) break;
        const double dc = -(d * jtr0 - b * jtr1) / det;
        const double dq = -(a * jtr1 - b * jtr0) / det;
        const double cur = sse(c, std::exp(q));
        const double nxt = sse(c + dc, std::exp(q + dq));
        if (nxt <= cur) {
            c += dc;
            q += dq;
            lambda = std::max(lambda * 0.5, 1e-12);
        } else {
            lambda *= 10.0;
            if (lambda > 1e8) break;
            continue;
        }
        if (std::max(std::abs(dc), std::abs(dq)) < 1e-8) break;
    }

    const double s = std::exp(q);
    if (!std::isfinite(c) || !std::isfinite(s) || s <= 0.0) {
        throw FitError("sigmoid fit diverged");
    }
    SigmoidFit fit;
    fit.center_db = c;
    fit.scale_db = s;
    fit.mse = sse(c, s) / static_cast<double>(points.size());
    return fit;
}

}  // namespace salad
