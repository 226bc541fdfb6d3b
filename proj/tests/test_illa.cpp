#include <doctest.h>

#include <cmath>

#include "salad/illa.hpp"
#include "salad/rng.hpp"

using namespace salad;

namespace {

// Table restricted to the measured anchor rows, CBS 2000 only.
BlerTable anchor_table() {
    return BlerTable({{2, 2000, -2.01, 0.36, false},
                      {6, 2000, 5.04, 0.20, false},
                      {10, 2000, 9.04, 0.04, false},
                      {14, 2000, 12.32, 0.38, false},
                      {20, 2000, 18.54, 0.06, false}});
}

BlerTable anchor_table_cbs100() {
    return BlerTable({{2, 100, -1.91, 0.44, false},
                      {6, 100, 4.84, 0.51, false},
                      {10, 100, 8.36, 0.52, false},
                      {14, 100, 12.20, 0.57, false},
                      {20, 100, 18.10, 0.69, false}});
}

}  // namespace

TEST_CASE("target one admits every MCS") {
    const auto& table = BlerTable::bundled_default();
    const IllaDecision d = select_mcs_illa(table, 0.0, 1.0, 2000);
    CHECK(d.mcs == table.mcs_table().highest());
    CHECK(d.feasible);
}

TEST_CASE("hopeless SINR falls back to the lowest MCS") {
    const auto& table = BlerTable::bundled_default();
    const IllaDecision d = select_mcs_illa(table, -100.0, 0.1, 2000);
    CHECK(d.mcs == table.mcs_table().lowest());
    CHECK_FALSE(d.feasible);
    CHECK(d.predicted_bler > 0.1);
}

TEST_CASE("threshold inversion on the anchor table") {
    // feasibility threshold is center + scale*ln(9); at 9.5 dB MCS 10
    // (threshold ~9.128) passes while MCS 14 (~13.15) does not
    const BlerTable table = anchor_table();
    const IllaDecision d = select_mcs_illa(table, 9.5, 0.1, 2000);
    CHECK(d.mcs == 10);
    CHECK(d.feasible);
    CHECK(table.bler(10, 9.5, 2000) <= 0.1);
    CHECK(table.bler(14, 9.5, 2000) > 0.1);
}

TEST_CASE("max-SE selection matches brute force") {
    const BlerTable table = anchor_table_cbs100();
    auto rng = make_rng(21, RngStream::noise);
    for (int trial = 0; trial < 200; ++trial) {
        const double gamma = -10.0 + 40.0 * uniform01(rng);
        const double target = trial % 2 == 0 ? 0.5 : 0.1;
        const IllaDecision d = select_mcs_maxse(table, gamma, target, 100);

        // independent argmax over all entries
        int best_mcs = -1;
        double best_value = -1.0;
        for (const auto& m : table.mcs_table().entries()) {
            const double p = table.bler(m.index, gamma, 100);
            if (p > target) continue;
            const double v = m.se * (1.0 - p);
            if (v > best_value) {
                best_value = v;
                best_mcs = m.index;
            }
        }
        if (best_mcs < 0) {
            CHECK_FALSE(d.feasible);
            CHECK(d.mcs == table.mcs_table().lowest());
        } else {
            CHECK(d.feasible);
            CHECK(d.mcs == best_mcs);
        }
    }
}

TEST_CASE("max-SE handles an empty feasible set and single-MCS tables") {
    // target 0 is unattainable: the sigmoid BLER stays strictly positive
    const auto& table = BlerTable::bundled_default();
    const IllaDecision d = select_mcs_maxse(table, 0.0, 0.0, 2000);
    CHECK_FALSE(d.feasible);
    CHECK(d.mcs == table.mcs_table().lowest());

    const BlerTable single({{6, 2000, 5.04, 0.20, false}});
    for (double gamma : {-50.0, 0.0, 50.0}) {
        CHECK(select_mcs_maxse(single, gamma, 1.0, 2000).mcs == 6);
        CHECK(select_mcs_illa(single, gamma, 1.0, 2000).mcs == 6);
    }
}

TEST_CASE("selected MCS is monotone in the estimate and in the target") {
    const auto& table = BlerTable::bundled_default();
    int last_illa = -1, last_maxse = -1;
    for (double gamma = -10.0; gamma <= 30.0; gamma += 0.25) {
        const int illa = select_mcs_illa(table, gamma, 0.1, 2000).mcs;
        const int maxse = select_mcs_maxse(table, gamma, 0.1, 2000).mcs;
        CHECK(illa >= last_illa);
        CHECK(maxse >= last_maxse);
        last_illa = illa;
        last_maxse = maxse;
    }
    int last = -1;
    for (double target = 0.01; target <= 1.0; target += 0.01) {
        const int mcs = select_mcs_illa(table, 8.0, target, 2000).mcs;
        CHECK(mcs >= last);
        last = mcs;
    }
}

TEST_CASE("illa selection is maximal") {
    const auto& table = BlerTable::bundled_default();
    auto rng = make_rng(5, RngStream::noise);
    for (int trial = 0; trial < 100; ++trial) {
        const double gamma = -5.0 + 30.0 * uniform01(rng);
        const IllaDecision d = select_mcs_illa(table, gamma, 0.1, 2000);
        for (const auto& m : table.mcs_table().entries()) {
            if (table.bler(m.index, gamma, 2000) <= 0.1) {
                CHECK(d.mcs >= m.index);
            }
        }
        if (d.feasible) {
            CHECK(d.predicted_bler == doctest::Approx(table.bler(d.mcs, gamma, 2000)));
            CHECK(d.predicted_bler <= 0.1);
        }
    }
}
