#include <doctest.h>

#include "salad/scenario.hpp"

using namespace salad;

namespace {

const char* kMinimal = R"(
[channel]
kind = constant
level_db = 10
n_slots = 100
)";

const char* kFull = R"(
# two-level comparison scenario
[channel]
kind = multi_step
n_slots = 4000
levels_db = 5, 15
switch_slots = 2000

[traffic]
tbs_bits = 2000

[harq]
delay_slots = 5
slot_mask = 1111111001

[adapter]
algo = salad
tau = 0.1
epsilon = 1.5
rho = 0.3
window = 13
p_probe = 0.2
tau_probe = 0.95
k_E = 0.02
N_eps = 100
adjust_only_when_not_probing = true
seed = 9

[metrics]
sliding_window = 25
)";

}  // namespace

TEST_CASE("minimal scenario uses documented defaults") {
    const Scenario sc = Scenario::from_string(kMinimal);
    CHECK(sc.n_slots == 100);
    CHECK(sc.harq_delay == 5);
    CHECK(sc.adapter == AdapterKind::olla);
    CHECK(sc.olla.target == doctest::Approx(0.1));
    CHECK(sc.olla.delta_nack == doctest::Approx(1.0));
    CHECK(sc.tbs_at(0) == 2000);
    CHECK(sc.seed == 1);
    CHECK(sc.sliding_window == 50);
    CHECK(sc.schedulable(17));
}

TEST_CASE("full scenario round-trips every key") {
    const Scenario sc = Scenario::from_string(kFull);
    CHECK(sc.n_slots == 4000);
    CHECK(sc.channel.at(1999) == doctest::Approx(5.0));
    CHECK(sc.channel.at(2000) == doctest::Approx(15.0));
    CHECK(sc.adapter == AdapterKind::salad);
    CHECK(sc.salad_cfg.epsilon == doctest::Approx(1.5));
    CHECK(sc.salad_cfg.rho == doctest::Approx(0.3));
    CHECK(sc.salad_cfg.window == 13);
    CHECK(sc.salad_cfg.p_probe == doctest::Approx(0.2));
    CHECK(sc.salad_cfg.tau_probe == doctest::Approx(0.95));
    CHECK(sc.salad_cfg.k_E == doctest::Approx(0.02));
    CHECK(sc.salad_cfg.tau == doctest::Approx(0.1));
    CHECK(sc.salad_cfg.N_eps == 100);
    CHECK(sc.salad_cfg.adjust_only_when_not_probing);
    CHECK(sc.seed == 9);
    CHECK(sc.sliding_window == 25);
    CHECK(sc.schedulable(6));
    CHECK_FALSE(sc.schedulable(7));
    CHECK_FALSE(sc.schedulable(8));
    CHECK(sc.schedulable(9));
}

TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS_WITH_AS(Scenario::from_string("[channel]\nn_slots = 10\nbogus = 1\n"),
                         doctest::Contains("bogus"), ConfigError);
    CHECK_THROWS_WITH_AS(Scenario::from_string("[nonsense]\nx = 1\n"),
                         doctest::Contains("nonsense"), ConfigError);
    CHECK_THROWS_AS(Scenario::from_string("[adapter]\nalgo = magic\n"), ConfigError);
}

TEST_CASE("value parsing is strict") {
    CHECK_THROWS_AS(Scenario::from_string("[channel]\nn_slots = ten\n"), ConfigError);
    CHECK_THROWS_AS(Scenario::from_string("[channel]\nn_slots = 10\n[harq]\nslot_mask = 10x\n"),
                    ConfigError);
    CHECK_THROWS_AS(Scenario::from_string("[channel]\nn_slots = 10\n[harq]\nslot_mask = 000\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        Scenario::from_string("[channel]\nn_slots = 10\n[traffic]\ntbs_bits = 5\ntbs_list = 1\n"),
        ConfigError);
    CHECK_THROWS_AS(Scenario::from_string("[channel]\nkind = step\nn_slots = 10\n"), ConfigError);
}

TEST_CASE("overrides replace file values before validation") {
    const Scenario sc = Scenario::from_string(
        kMinimal, {"adapter.algo=salad", "adapter.epsilon=0.5", "channel.n_slots=7"});
    CHECK(sc.adapter == AdapterKind::salad);
    CHECK(sc.salad_cfg.epsilon == doctest::Approx(0.5));
    CHECK(sc.n_slots == 7);
    CHECK_THROWS_AS(Scenario::from_string(kMinimal, {"notdotted"}), ConfigError);
    CHECK_THROWS_AS(Scenario::from_string(kMinimal, {"channel.bogus=1"}), ConfigError);
}

TEST_CASE("traffic modes") {
    const Scenario list = Scenario::from_string(
        "[channel]\nn_slots = 10\n[traffic]\ntbs_list = 100, 200, 300\n");
    CHECK(list.tbs_at(0) == 100);
    CHECK(list.tbs_at(4) == 200);

    // 2 Mbps at 500 us per slot = 1000 bits per slot
    const Scenario load = Scenario::from_string(
        "[channel]\nn_slots = 10\n[traffic]\noffered_load_mbps = 2\nslot_duration_us = 500\n");
    CHECK(load.tbs_at(3) == 1000);
}

TEST_CASE("duplicate keys are rejected") {
    CHECK_THROWS_AS(parse_config_text("[a]\nx = 1\nx = 2\n"), ConfigError);
}
