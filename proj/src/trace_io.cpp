#include "salad/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace salad {

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out += buf;
}

void append_field(std::string& out, const std::optional<double>& v) {
    if (v) append_double(out, *v);
}

void append_field(std::string& out, const std::optional<int>& v) {
    if (v) out += std::to_string(*v);
}

void append_field(std::string& out, const std::optional<bool>& v) {
    if (v) out += *v ? '1' : '0';
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

std::string trace_to_csv(const std::vector<SlotTrace>& trace) {
    std::string out = kTraceHeader;
    out += '\n';
    for (const auto& row : trace) {
        out += std::to_string(row.slot);
        out += ',';
        append_double(out, row.true_sinr_db);
        out += ',';
        append_double(out, row.est_sinr_db);
        out += ',';
        append_field(out, row.mcs);
        out += ',';
        append_field(out, row.tbs);
        out += ',';
        append_field(out, row.nack);
        out += ',';
        append_field(out, row.instant_target);
        out += ',';
        append_field(out, row.bias_ratio);
        out += ',';
        append_field(out, row.probe_flag);
        out += ',';
        append_field(out, row.integral_error);
        out += '\n';
    }
    return out;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<SlotTrace>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write trace file: " + path.string());
    }
    out << trace_to_csv(trace);
}

std::vector<SlotTrace> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open trace file: " + path.string());
    }
    std::vector<SlotTrace> trace;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != kTraceHeader) {
                throw ConfigError("unexpected trace header in " + path.string());
            }
            continue;
        }
        const auto fields = split_csv_row(line);
        if (fields.size() != 10) {
            throw ConfigError("malformed trace row at " + path.string() + ":" +
                              std::to_string(line_no));
        }
        try {
            SlotTrace row;
            row.slot = std::stol(fields[0]);
            row.true_sinr_db = std::stod(fields[1]);
            row.est_sinr_db = std::stod(fields[2]);
            if (!fields[3].empty()) row.mcs = std::stoi(fields[3]);
            if (!fields[4].empty()) row.tbs = std::stoi(fields[4]);
            if (!fields[5].empty()) row.nack = fields[5] != "0";
            if (!fields[6].empty()) row.instant_target = std::stod(fields[6]);
            if (!fields[7].empty()) row.bias_ratio = std::stod(fields[7]);
            if (!fields[8].empty()) row.probe_flag = fields[8] != "0";
            if (!fields[9].empty()) row.integral_error = std::stod(fields[9]);
            trace.push_back(row);
        } catch (const std::exception&) {
            throw ConfigError("malformed trace row at " + path.string() + ":" +
                              std::to_string(line_no));
        }
    }
    return trace;
}

std::string metrics_to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["slots"] = m.slots;
    j["transmissions"] = m.transmissions;
    j["nacks"] = m.nacks;
    j["feedbacks_delivered"] = m.feedbacks_delivered;
    j["long_term_bler"] = m.long_term_bler;
    j["normalized_tp"] = m.normalized_tp;
    j["mean_se"] = m.mean_se;
    j["sliding_window"] = m.sliding_window;
    if (m.adaptation_time_slots) {
        j["adaptation_time_slots"] = *m.adaptation_time_slots;
    } else {
        j["adaptation_time_slots"] = nullptr;
    }
    double mean = 0.0;
    for (const auto& [slot, v] : m.sliding_bler) mean += v;
    j["sliding_bler_points"] = m.sliding_bler.size();
    j["sliding_bler_mean"] = m.sliding_bler.empty()
                                 ? 0.0
                                 : mean / static_cast<double>(m.sliding_bler.size());
    return j.dump(2) + "\n";
}

void write_metrics_json(const std::filesystem::path& path, const Metrics& metrics) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write metrics file: " + path.string());
    }
    out << metrics_to_json(metrics);
}

}  // namespace salad
