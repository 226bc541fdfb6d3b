#include "salad/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace salad {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_double(const std::string& where, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + value + "'");
    }
}

long parse_long(const std::string& where, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& where, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(where + ": expected a boolean, got '" + value + "'");
}

// Tracks which keys were consumed so leftovers can be reported as errors.
class SectionReader {
public:
    SectionReader(const ConfigSections& sections, std::string name)
        : sections_(sections), name_(std::move(name)) {}

    bool has(const std::string& key) const {
        auto sec = sections_.find(name_);
        return sec != sections_.end() && sec->second.count(key) > 0;
    }

    std::string get(const std::string& key) {
        if (!has(key)) {
            throw ConfigError("missing required key '" + key + "' in section [" + name_ + "]");
        }
        consumed_.insert(key);
        return sections_.at(name_).at(key);
    }

    std::string get_or(const std::string& key, const std::string& fallback) {
        return has(key) ? get(key) : fallback;
    }

    double number(const std::string& key, double fallback) {
        return has(key) ? parse_double(where(key), get(key)) : fallback;
    }

    long integer(const std::string& key, long fallback) {
        return has(key) ? parse_long(where(key), get(key)) : fallback;
    }

    bool boolean(const std::string& key, bool fallback) {
        return has(key) ? parse_bool(where(key), get(key)) : fallback;
    }

    std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

    void finish() const {
        auto sec = sections_.find(name_);
        if (sec == sections_.end()) return;
        for (const auto& [key, value] : sec->second) {
            if (!consumed_.count(key)) {
                throw ConfigError("unknown key '" + key + "' in section [" + name_ + "]");
            }
        }
    }

private:
    const ConfigSections& sections_;
    std::string name_;
    std::set<std::string> consumed_;
};

ChannelTrajectory parse_channel(SectionReader& ch, long n_slots) {
    const std::string kind = ch.get_or("kind", "constant");
    if (kind == "constant") {
        return ChannelTrajectory::constant(ch.number("level_db", 10.0));
    }
    if (kind == "step" || kind == "multi_step") {
        std::vector<double> levels;
        for (const auto& item : split_list(ch.get("levels_db"))) {
            levels.push_back(parse_double(ch.where("levels_db"), item));
        }
        std::vector<long> switches;
        for (const auto& item : split_list(ch.get("switch_slots"))) {
            switches.push_back(parse_long(ch.where("switch_slots"), item));
        }
        return ChannelTrajectory::multi_step(std::move(levels), std::move(switches));
    }
    if (kind == "chirp") {
        return ChannelTrajectory::chirp(ch.number("center_db", 10.0), ch.number("amplitude_db", 5.0),
                                        ch.number("freq_start", 0.001), ch.number("freq_end", 0.02),
                                        ch.integer("ramp_slots", n_slots > 0 ? n_slots : 1));
    }
    if (kind == "file") {
        return ChannelTrajectory::file_trace(ch.get("path"));
    }
    throw ConfigError("unknown channel kind '" + kind + "'");
}

Scenario build_scenario(const ConfigSections& sections) {
    for (const auto& [name, keys] : sections) {
        static const std::set<std::string> known = {"channel", "traffic", "harq", "adapter",
                                                    "metrics"};
        if (!known.count(name)) {
            throw ConfigError("unknown section [" + name + "]");
        }
    }

    Scenario sc;

    SectionReader ch(sections, "channel");
    sc.n_slots = ch.integer("n_slots", 0);
    if (sc.n_slots < 0) {
        throw ConfigError("[channel] n_slots must be non-negative");
    }
    sc.channel = parse_channel(ch, sc.n_slots);
    ch.finish();

    SectionReader traffic(sections, "traffic");
    int modes = 0;
    if (traffic.has("tbs_bits")) ++modes;
    if (traffic.has("tbs_list")) ++modes;
    if (traffic.has("offered_load_mbps")) ++modes;
    if (modes > 1) {
        throw ConfigError("[traffic] tbs_bits, tbs_list, and offered_load_mbps are exclusive");
    }
    if (traffic.has("tbs_list")) {
        sc.tbs_list.clear();
        for (const auto& item : split_list(traffic.get("tbs_list"))) {
            sc.tbs_list.push_back(static_cast<int>(parse_long(traffic.where("tbs_list"), item)));
        }
        if (sc.tbs_list.empty()) {
            throw ConfigError("[traffic] tbs_list must not be empty");
        }
    } else if (traffic.has("offered_load_mbps")) {
        const double mbps = parse_double(traffic.where("offered_load_mbps"),
                                         traffic.get("offered_load_mbps"));
        const double slot_us = traffic.number("slot_duration_us", 500.0);
        // bits per slot = Mbps * 1e6 bit/s * slot seconds
        const double bits = mbps * slot_us;
        if (bits < 1.0) {
            throw ConfigError("[traffic] offered load maps to less than one bit per slot");
        }
        sc.tbs_list = {static_cast<int>(std::lround(bits))};
    } else {
        sc.tbs_list = {static_cast<int>(traffic.integer("tbs_bits", 2000))};
    }
    traffic.finish();

    SectionReader harq(sections, "harq");
    sc.harq_delay = static_cast<int>(harq.integer("delay_slots", 5));
    if (harq.has("slot_mask")) {
        const std::string mask = harq.get("slot_mask");
        sc.slot_mask.clear();
        for (char c : mask) {
            if (c == '1') {
                sc.slot_mask.push_back(true);
            } else if (c == '0') {
                sc.slot_mask.push_back(false);
            } else {
                throw ConfigError("[harq] slot_mask must contain only 0 and 1");
            }
        }
        if (std::find(sc.slot_mask.begin(), sc.slot_mask.end(), true) == sc.slot_mask.end()) {
            throw ConfigError("[harq] slot_mask must allow at least one slot");
        }
    }
    harq.finish();

    SectionReader ad(sections, "adapter");
    sc.adapter = adapter_kind_from_string(ad.get_or("algo", "olla"));
    const double tau = ad.number("tau", 0.1);
    sc.olla.target = tau;
    sc.olla.delta_nack = ad.number("delta_nack", 1.0);
    sc.salad_cfg.tau = tau;
    sc.salad_cfg.epsilon = ad.number("epsilon", sc.salad_cfg.epsilon);
    sc.salad_cfg.rho = ad.number("rho", sc.salad_cfg.rho);
    sc.salad_cfg.window = static_cast<int>(ad.integer("window", sc.salad_cfg.window));
    sc.salad_cfg.p_probe = ad.number("p_probe", sc.salad_cfg.p_probe);
    sc.salad_cfg.tau_probe = ad.number("tau_probe", sc.salad_cfg.tau_probe);
    sc.salad_cfg.k_E = ad.number("k_E", sc.salad_cfg.k_E);
    sc.salad_cfg.N_eps = static_cast<int>(ad.integer("N_eps", sc.salad_cfg.N_eps));
    sc.salad_cfg.adjust_only_when_not_probing =
        ad.boolean("adjust_only_when_not_probing", sc.salad_cfg.adjust_only_when_not_probing);
    sc.cqi_period_slots = ad.integer("cqi_period_slots", 0);
    sc.bler_table_ref = ad.get_or("bler_table", "builtin");
    sc.seed = static_cast<std::uint64_t>(ad.integer("seed", 1));
    ad.finish();

    SectionReader metrics(sections, "metrics");
    sc.sliding_window = static_cast<int>(metrics.integer("sliding_window", 50));
    metrics.finish();

    sc.validate();
    return sc;
}

}  // namespace

const char* to_string(AdapterKind kind) {
    switch (kind) {
        case AdapterKind::olla: return "olla";
        case AdapterKind::salad: return "salad";
        case AdapterKind::oracle: return "oracle";
    }
    return "?";
}

AdapterKind adapter_kind_from_string(const std::string& name) {
    if (name == "olla") return AdapterKind::olla;
    if (name == "salad") return AdapterKind::salad;
    if (name == "oracle") return AdapterKind::oracle;
    throw ConfigError("unknown adapter '" + name + "' (expected olla, salad, or oracle)");
}

void Scenario::validate() const {
    if (n_slots < 0) throw ConfigError("n_slots must be non-negative");
    if (harq_delay < 0) throw ConfigError("harq delay must be non-negative");
    for (int tbs : tbs_list) {
        if (tbs <= 0) throw ConfigError("TBS must be positive");
    }
    if (sliding_window < 1) throw ConfigError("sliding window must be at least 1");
    if (cqi_period_slots < 0) throw ConfigError("cqi_period_slots must be non-negative");
    olla.validate();
    salad_cfg.validate();
    const long limit = channel.length_limit();
    if (limit >= 0 && n_slots > limit) {
        throw ConfigError("channel trace shorter than n_slots");
    }
}

ConfigSections parse_config_text(const std::string& text) {
    ConfigSections sections;
    std::istringstream in(text);
    std::string line, section;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ConfigError("malformed section header at line " + std::to_string(line_no));
            }
            section = trim(t.substr(1, t.size() - 2));
            sections.try_emplace(section);
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected key = value at line " + std::to_string(line_no));
        }
        if (section.empty()) {
            throw ConfigError("key outside any section at line " + std::to_string(line_no));
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("empty key at line " + std::to_string(line_no));
        }
        if (!sections[section].try_emplace(key, value).second) {
            throw ConfigError("duplicate key '" + key + "' in section [" + section + "]");
        }
    }
    return sections;
}

ConfigSections parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_overrides(ConfigSections& sections, const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override must look like section.key=value: '" + item + "'");
        }
        const std::string path = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        const auto dot = path.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
            throw ConfigError("override must look like section.key=value: '" + item + "'");
        }
        sections[path.substr(0, dot)][path.substr(dot + 1)] = value;
    }
}

Scenario Scenario::from_string(const std::string& text, const std::vector<std::string>& overrides) {
    ConfigSections sections = parse_config_text(text);
    apply_overrides(sections, overrides);
    return build_scenario(sections);
}

Scenario Scenario::from_file(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
    ConfigSections sections = parse_config_file(path);
    apply_overrides(sections, overrides);
    return build_scenario(sections);
}

}  // namespace salad
