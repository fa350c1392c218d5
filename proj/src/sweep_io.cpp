#include "relaycc/sweep_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "relaycc/errors.hpp"

namespace relaycc {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double parse_number(const std::string& field, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
        throw InvalidArgument("CSV line " + std::to_string(line) + ": bad number '" + field + "'");
    }
    return v;
}

Branch parse_branch(const std::string& s, std::size_t line) {
    if (s == "bc") return Branch::Broadcast;
    if (s == "mac") return Branch::Mac;
    throw InvalidArgument("CSV line " + std::to_string(line) + ": bad branch '" + s + "'");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

nlohmann::json row_json(const SweepRow& r) {
    const auto& b = r.bounds;
    const auto& g = r.gain;
    nlohmann::json j;
    j["p_db"] = g.p_db;
    j["alpha"] = g.alpha ? nlohmann::json(*g.alpha) : nlohmann::json(nullptr);
    j["lower_cc"] = b.lower_cc.mean;
    j["lower_cc_se"] = b.lower_cc.std_error;
    j["upper_cc"] = b.upper_cc.mean;
    j["upper_cc_se"] = b.upper_cc.std_error;
    j["lower_g"] = b.lower_gauss.mean;
    j["upper_g"] = b.upper_gauss.mean;
    j["direct_cc"] = b.direct_cc.mean;
    j["direct_cc_se"] = b.direct_cc.std_error;
    j["direct_g"] = b.direct_gauss.mean;
    j["gain_cc"] = g.gain_cc.mean;
    j["gain_cc_se"] = g.gain_cc.std_error;
    j["gain_g"] = g.gain_gauss.mean;
    j["lower_branch"] = std::string(to_string(g.lower_branch));
    j["upper_branch"] = std::string(to_string(g.upper_branch));
    return j;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "p_db",      "alpha",        "lower_cc", "lower_cc_se", "upper_cc",     "upper_cc_se",
        "lower_g",   "upper_g",      "direct_cc", "direct_cc_se", "direct_g",   "gain_cc",
        "gain_cc_se", "gain_g",      "lower_branch", "upper_branch"};
    return cols;
}

void write_csv(std::ostream& os, const SweepTable& table) {
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : table.rows) {
        const auto& b = r.bounds;
        const auto& g = r.gain;
        os << fmt(g.p_db) << ',' << (g.alpha ? fmt(*g.alpha) : std::string()) << ','
           << fmt(b.lower_cc.mean) << ',' << fmt(b.lower_cc.std_error) << ','
           << fmt(b.upper_cc.mean) << ',' << fmt(b.upper_cc.std_error) << ','
           << fmt(b.lower_gauss.mean) << ',' << fmt(b.upper_gauss.mean) << ','
           << fmt(b.direct_cc.mean) << ',' << fmt(b.direct_cc.std_error) << ','
           << fmt(b.direct_gauss.mean) << ',' << fmt(g.gain_cc.mean) << ','
           << fmt(g.gain_cc.std_error) << ',' << fmt(g.gain_gauss.mean) << ','
           << to_string(g.lower_branch) << ',' << to_string(g.upper_branch) << '\n';
    }
}

std::string to_csv(const SweepTable& table) {
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
}

SweepTable parse_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    SweepTable table;
    const auto& cols = csv_columns();
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        const auto f = split(line);
        if (!header_seen) {
            if (f != cols) throw InvalidArgument("CSV header does not match the table columns");
            header_seen = true;
            continue;
        }
        if (f.size() != cols.size()) {
            throw InvalidArgument("CSV line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(cols.size()) + " fields");
        }
        SweepRow r;
        auto& b = r.bounds;
        auto& g = r.gain;
        g.p_db = parse_number(f[0], lineno);
        if (!f[1].empty()) g.alpha = parse_number(f[1], lineno);
        b.lower_cc.mean = parse_number(f[2], lineno);
        b.lower_cc.std_error = parse_number(f[3], lineno);
        b.upper_cc.mean = parse_number(f[4], lineno);
        b.upper_cc.std_error = parse_number(f[5], lineno);
        b.lower_gauss.mean = parse_number(f[6], lineno);
        b.upper_gauss.mean = parse_number(f[7], lineno);
        b.direct_cc.mean = parse_number(f[8], lineno);
        b.direct_cc.std_error = parse_number(f[9], lineno);
        b.direct_gauss.mean = parse_number(f[10], lineno);
        g.gain_cc.mean = parse_number(f[11], lineno);
        g.gain_cc.std_error = parse_number(f[12], lineno);
        g.gain_gauss.mean = parse_number(f[13], lineno);
        g.lower_branch = b.lower_branch = parse_branch(f[14], lineno);
        g.upper_branch = b.upper_branch = parse_branch(f[15], lineno);
        table.rows.push_back(r);
    }
    if (!header_seen) throw InvalidArgument("CSV has no header row");
    return table;
}

std::string to_json(const SweepTable& table, std::string_view manifest_json, int indent) {
    nlohmann::json j;
    const auto& m = table.meta;
    nlohmann::json meta;
    meta["mode"] = std::string(to_string(m.mode));
    meta["scenario"] = {{"sigma_ds_db", m.scenario.sigma_ds_db},
                        {"sigma_rs_db", m.scenario.sigma_rs_db},
                        {"sigma_dr_db", m.scenario.sigma_dr_db},
                        {"alpha", m.scenario.alpha}};
    meta["constellation"] = m.constellation;
    meta["mc"] = {{"fading_samples", m.cfg.fading_samples},
                  {"noise_samples", m.cfg.noise_samples},
                  {"seed", m.cfg.seed}};
    meta["options"] = {{"relay_alpha_scaling", m.options.relay_alpha_scaling},
                       {"common_random_numbers", m.options.common_random_numbers}};
    meta["tool_version"] = m.tool_version;
    j["metadata"] = meta;
    if (!manifest_json.empty()) j["manifest"] = nlohmann::json::parse(manifest_json);
    j["columns"] = csv_columns();
    j["rows"] = nlohmann::json::array();
    for (const auto& r : table.rows) j["rows"].push_back(row_json(r));
    return j.dump(indent);
}

}  // namespace relaycc
