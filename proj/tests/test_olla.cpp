#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "salad/olla.hpp"
#include "salad/rng.hpp"

using namespace salad;

TEST_CASE("offset moves by the configured steps") {
    const OllaConfig cfg{0.1, 1.0};
    OllaState state;
    olla_on_feedback(state, cfg, false);
    CHECK(state.offset_db == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    state = OllaState{};
    olla_on_feedback(state, cfg, true);
    CHECK(state.offset_db == doctest::Approx(-1.0));
}

TEST_CASE("nine ACKs cancel one NACK at a ten percent target") {
    const OllaConfig cfg{0.1, 1.0};
    OllaState state;
    for (int i = 0; i < 9; ++i) olla_on_feedback(state, cfg, false);
    olla_on_feedback(state, cfg, true);
    CHECK(std::abs(state.offset_db) < 1e-12);
}

TEST_CASE("SA rewrite produces the same branch increments") {
    const OllaConfig cfg{0.1, 1.0};
    CHECK(sa_increment(cfg.delta_nack, cfg.target, false) ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(sa_increment(cfg.delta_nack, cfg.target, true) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("both update forms trace identical trajectories") {
    auto rng = make_rng(17, RngStream::noise);
    for (int run = 0; run < 5; ++run) {
        const OllaConfig cfg{0.05 + 0.4 * uniform01(rng), 0.1 + 1.9 * uniform01(rng)};
        OllaState offset_form, sa_form;
        double max_diff = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const bool nack = uniform01(rng) < 0.3;
            olla_on_feedback(offset_form, cfg, nack);
            olla_sa_update(sa_form, cfg, nack);
            max_diff = std::max(max_diff,
                                std::abs(olla_estimate(offset_form) - olla_estimate(sa_form)));
        }
        CHECK(max_diff <= 1e-9);
    }
}

TEST_CASE("expected drift vanishes at the target NACK rate") {
    const OllaConfig cfg{0.1, 1.0};
    const double drift = cfg.target * (-cfg.delta_nack) + (1.0 - cfg.target) * cfg.delta_ack();
    CHECK(std::abs(drift) < 1e-12);
}

TEST_CASE("estimate is reported SINR plus offset") {
    OllaState state;
    CHECK(olla_estimate(state) == doctest::Approx(0.0));
    state.reported_sinr_db = 5.0;
    state.offset_db = -1.0;
    CHECK(olla_estimate(state) == doctest::Approx(4.0));
    // a CQI report overwrites the baseline but keeps the offset
    state.offset_db = -2.0;
    state.reported_sinr_db = 7.0;
    CHECK(olla_estimate(state) == doctest::Approx(5.0));
}

TEST_CASE("within-slot feedback order does not change the offset") {
    const OllaConfig cfg{0.1, 0.7};
    std::vector<bool> batch = {true, false, false, true, false, false, false};
    OllaState forward, reversed;
    for (bool nack : batch) olla_on_feedback(forward, cfg, nack);
    std::reverse(batch.begin(), batch.end());
    for (bool nack : batch) olla_on_feedback(reversed, cfg, nack);
    CHECK(forward.offset_db == doctest::Approx(reversed.offset_db).epsilon(1e-12));
}

TEST_CASE("selection delegates to the inner loop") {
    const auto& table = BlerTable::bundled_default();
    const OllaConfig cfg{0.1, 1.0};
    OllaState state;
    state.reported_sinr_db = 10.0;

    const IllaDecision via_olla = olla_select(state, cfg, table, 2000);
    const IllaDecision direct = select_mcs_illa(table, 10.0, 0.1, 2000);
    CHECK(via_olla.mcs == direct.mcs);

    state.offset_db = -200.0;
    CHECK(olla_select(state, cfg, table, 2000).mcs == table.mcs_table().lowest());

    state.offset_db = 0.0;
    const OllaConfig permissive{0.999999, 1.0};
    state.reported_sinr_db = 1000.0;
    CHECK(olla_select(state, permissive, table, 2000).mcs == table.mcs_table().highest());
}

TEST_CASE("config validation") {
    const auto validate = [](double target, double delta_nack) {
        OllaConfig{target, delta_nack}.validate();
    };
    CHECK_THROWS_AS(validate(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(validate(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(validate(0.1, 0.0), ConfigError);
    CHECK_NOTHROW(validate(0.1, 1.0));
}
