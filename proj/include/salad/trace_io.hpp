#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "salad/simkit.hpp"

namespace salad {

/// Fixed trace CSV column order; floats use 9 significant digits and empty
/// fields stand for not-applicable.
inline constexpr const char* kTraceHeader =
    "slot,true_sinr_db,est_sinr_db,mcs,tbs,nack,instant_target,bias_ratio,probe_flag,"
    "integral_error";

std::string trace_to_csv(const std::vector<SlotTrace>& trace);
void write_trace_csv(const std::filesystem::path& path, const std::vector<SlotTrace>& trace);
std::vector<SlotTrace> read_trace_csv(const std::filesystem::path& path);

std::string metrics_to_json(const Metrics& metrics);
void write_metrics_json(const std::filesystem::path& path, const Metrics& metrics);

}  // namespace salad
