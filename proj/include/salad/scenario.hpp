#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "salad/channel.hpp"
#include "salad/olla.hpp"
#include "salad/salad.hpp"

namespace salad {

enum class AdapterKind { olla, salad, oracle };

const char* to_string(AdapterKind kind);
AdapterKind adapter_kind_from_string(const std::string& name);

/// One deterministic run: channel trajectory, traffic, HARQ delay, adapter
/// choice and parameters, seed, and metric settings.
struct Scenario {
    long n_slots = 0;
    ChannelTrajectory channel = ChannelTrajectory::constant(0.0);

    // Traffic: constant TBS, per-slot list (cycled), or offered load.
    std::vector<int> tbs_list = {2000};
    int tbs_at(long slot) const {
        return tbs_list[static_cast<std::size_t>(slot) % tbs_list.size()];
    }

    int harq_delay = 5;
    std::vector<bool> slot_mask;  // cyclic; empty = every slot schedulable
    bool schedulable(long slot) const {
        return slot_mask.empty() || slot_mask[static_cast<std::size_t>(slot) % slot_mask.size()];
    }

    AdapterKind adapter = AdapterKind::olla;
    OllaConfig olla;
    SaladConfig salad_cfg;
    long cqi_period_slots = 0;  // 0 disables CQI ingestion

    std::string bler_table_ref = "builtin";  // "builtin" or a table file path
    std::uint64_t seed = 1;
    int sliding_window = 50;

    void validate() const;

    /// Parses the sectioned key=value format; `overrides` entries look like
    /// "section.key=value" and are applied before validation. Unknown keys in
    /// either place are errors.
    static Scenario from_file(const std::filesystem::path& path,
                              const std::vector<std::string>& overrides = {});
    static Scenario from_string(const std::string& text,
                                const std::vector<std::string>& overrides = {});
};

/// Raw sectioned key=value text, kept ordered for deterministic diagnostics.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

ConfigSections parse_config_text(const std::string& text);
ConfigSections parse_config_file(const std::filesystem::path& path);
void apply_overrides(ConfigSections& sections, const std::vector<std::string>& overrides);

}  // namespace salad
