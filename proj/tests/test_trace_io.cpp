#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "salad/trace_io.hpp"

using namespace salad;

TEST_CASE("trace CSV format and round-trip") {
    std::vector<SlotTrace> trace(3);
    trace[0].slot = 0;
    trace[0].true_sinr_db = 10.123456789;
    trace[0].est_sinr_db = 0.0;
    trace[1].slot = 1;
    trace[1].true_sinr_db = 10.0;
    trace[1].est_sinr_db = 9.5;
    trace[1].mcs = 12;
    trace[1].tbs = 2000;
    trace[1].nack = true;
    trace[1].instant_target = 0.1;
    trace[1].bias_ratio = -0.25;
    trace[1].probe_flag = false;
    trace[1].integral_error = -0.9;
    trace[2].slot = 2;
    trace[2].est_sinr_db = 1e-7;

    const std::string csv = trace_to_csv(trace);
    CHECK(csv.rfind("slot,true_sinr_db,est_sinr_db,mcs,tbs,nack,instant_target,bias_ratio,"
                    "probe_flag,integral_error\n", 0) == 0);
    CHECK(csv.find("1,10,9.5,12,2000,1,0.1,-0.25,0,-0.9\n") != std::string::npos);
    CHECK(csv.find("10.1234568") != std::string::npos);  // 9 significant digits

    const auto path = std::filesystem::temp_directory_path() / "salad_trace_roundtrip.csv";
    write_trace_csv(path, trace);
    const auto back = read_trace_csv(path);
    REQUIRE(back.size() == trace.size());
    CHECK(back[1].mcs == trace[1].mcs);
    CHECK(back[1].nack == trace[1].nack);
    CHECK(back[1].bias_ratio == doctest::Approx(*trace[1].bias_ratio));
    CHECK_FALSE(back[0].mcs.has_value());
    CHECK_FALSE(back[2].nack.has_value());
    std::filesystem::remove(path);
}

TEST_CASE("trace reader rejects malformed input") {
    const auto path = std::filesystem::temp_directory_path() / "salad_trace_bad.csv";
    {
        std::ofstream out(path);
        out << "not,a,trace\n";
    }
    CHECK_THROWS_AS(read_trace_csv(path), ConfigError);
    {
        std::ofstream out(path);
        out << kTraceHeader << "\n0,1.0\n";
    }
    CHECK_THROWS_AS(read_trace_csv(path), ConfigError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_trace_csv(path), IoError);
}

TEST_CASE("metrics JSON is stable and complete") {
    Metrics m;
    m.slots = 10;
    m.transmissions = 8;
    m.nacks = 2;
    m.feedbacks_delivered = 8;
    m.long_term_bler = 0.25;
    m.normalized_tp = 123.5;
    m.mean_se = 2.5;
    m.sliding_window = 5;
    m.sliding_bler = {{3, 0.5}, {4, 0.25}};
    const std::string a = metrics_to_json(m);
    const std::string b = metrics_to_json(m);
    CHECK(a == b);
    CHECK(a.find("\"long_term_bler\": 0.25") != std::string::npos);
    CHECK(a.find("\"adaptation_time_slots\": null") != std::string::npos);
    m.adaptation_time_slots = 42;
    CHECK(metrics_to_json(m).find("\"adaptation_time_slots\": 42") != std::string::npos);
}
