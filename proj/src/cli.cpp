#include "relaycc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relaycc/capacity_bounds.hpp"
#include "relaycc/constellation.hpp"
#include "relaycc/errors.hpp"
#include "relaycc/relay_gain.hpp"
#include "relaycc/sweep_io.hpp"
#include "relaycc/verify.hpp"

namespace relaycc::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce a bounds/gain run.
struct RunSpec {
    std::string command;
    RelayMode mode = RelayMode::FullDuplex;
    ChannelParams scenario;
    std::string constellation = "qam4";
    std::string relay_constellation;
    std::string phase2_constellation;
    std::optional<json> custom_points;
    std::string custom_label;
    bool normalize = true;
    McConfig cfg;
    std::vector<double> p_grid_db;
    std::vector<double> alphas;
    BoundOptions options;
    bool report_peak = false;
    bool refine_peak = false;
    std::string format = "csv";
};

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string fmt_g(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

RelayMode parse_mode(const std::string& m) {
    if (m == "fd") return RelayMode::FullDuplex;
    if (m == "hd") return RelayMode::HalfDuplex;
    throw UsageError("--mode must be fd or hd, got '" + m + "'");
}

ConstellationSpec build_constellations(const RunSpec& spec) {
    Constellation base = spec.custom_points
                             ? constellation_from_json_text(spec.custom_points->dump(),
                                                            spec.custom_label, spec.normalize)
                             : parse_standard(spec.constellation);
    ConstellationSpec cs = ConstellationSpec::uniform(base);
    if (!spec.relay_constellation.empty()) cs.relay = parse_standard(spec.relay_constellation);
    if (!spec.phase2_constellation.empty()) cs.source_phase2 = parse_standard(spec.phase2_constellation);
    return cs;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json grid_json(const std::vector<double>& g) {
    json a = json::array();
    for (double v : g) a.push_back(std::isfinite(v) ? json(v) : json("-inf"));
    return a;
}

std::vector<double> grid_from_json(const json& a) {
    std::vector<double> g;
    for (const auto& v : a) g.push_back(v.is_string() ? -INFINITY : v.get<double>());
    return g;
}

json manifest_json(const RunSpec& s, double elapsed_s) {
    json m;
    m["tool"] = "relaycc";
    m["tool_version"] = tool_version();
    m["command"] = s.command;
    m["mode"] = std::string(to_string(s.mode));
    m["scenario"] = {{"sigma_ds_db", s.scenario.sigma_ds_db},
                     {"sigma_rs_db", s.scenario.sigma_rs_db},
                     {"sigma_dr_db", s.scenario.sigma_dr_db},
                     {"alpha", s.scenario.alpha}};
    json c = {{"source", s.constellation},
              {"relay", s.relay_constellation},
              {"phase2", s.phase2_constellation},
              {"normalize", s.normalize}};
    if (s.custom_points) {
        c["points"] = *s.custom_points;
        c["label"] = s.custom_label;
    }
    m["constellation"] = c;
    m["mc"] = {{"fading_samples", s.cfg.fading_samples},
               {"noise_samples", s.cfg.noise_samples},
               {"seed", s.cfg.seed}};
    m["p_grid_db"] = grid_json(s.p_grid_db);
    m["alpha_grid"] = s.alphas;
    m["options"] = {{"relay_alpha_scaling", s.options.relay_alpha_scaling},
                    {"common_random_numbers", s.options.common_random_numbers},
                    {"report_peak", s.report_peak},
                    {"refine_peak", s.refine_peak}};
    m["format"] = s.format;
    m["wall_clock_utc"] = utc_now();
    m["elapsed_seconds"] = elapsed_s;
    return m;
}

RunSpec spec_from_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open manifest " + path.string());
    json m;
    try {
        m = json::parse(in);
        RunSpec s;
        s.command = m.at("command").get<std::string>();
        s.mode = parse_mode(m.at("mode").get<std::string>());
        const auto& sc = m.at("scenario");
        s.scenario.sigma_ds_db = sc.at("sigma_ds_db").get<double>();
        s.scenario.sigma_rs_db = sc.at("sigma_rs_db").get<double>();
        s.scenario.sigma_dr_db = sc.at("sigma_dr_db").get<double>();
        s.scenario.alpha = sc.at("alpha").get<double>();
        const auto& c = m.at("constellation");
        s.constellation = c.at("source").get<std::string>();
        s.relay_constellation = c.value("relay", "");
        s.phase2_constellation = c.value("phase2", "");
        s.normalize = c.value("normalize", true);
        if (c.contains("points")) {
            s.custom_points = c.at("points");
            s.custom_label = c.value("label", "custom");
        }
        const auto& mc = m.at("mc");
        s.cfg.fading_samples = mc.at("fading_samples").get<std::size_t>();
        s.cfg.noise_samples = mc.at("noise_samples").get<std::size_t>();
        s.cfg.seed = mc.at("seed").get<std::uint64_t>();
        s.p_grid_db = grid_from_json(m.at("p_grid_db"));
        s.alphas = m.at("alpha_grid").get<std::vector<double>>();
        const auto& o = m.at("options");
        s.options.relay_alpha_scaling = o.at("relay_alpha_scaling").get<bool>();
        s.options.common_random_numbers = o.at("common_random_numbers").get<bool>();
        s.report_peak = o.value("report_peak", false);
        s.refine_peak = o.value("refine_peak", false);
        s.format = m.value("format", "csv");
        return s;
    } catch (const json::exception& e) {
        throw UsageError("malformed manifest " + path.string() + ": " + e.what());
    }
}

struct Emitted {
    SweepTable table;
    std::optional<PeakGain> peak;
};

void write_table(std::ostream& os, const RunSpec& spec, const Emitted& e, const json& manifest) {
    if (spec.format == "json") {
        json j = json::parse(to_json(e.table, manifest.dump()));
        if (e.peak) {
            j["peak"] = {{"p_db", e.peak->p_db}, {"gain_cc", e.peak->gain}, {"gain_cc_se", e.peak->std_error}};
        }
        os << j.dump(2) << '\n';
        return;
    }
    write_csv(os, e.table);
    if (e.peak) {
        os << "# peak,p_db=" << fmt_g(e.peak->p_db) << ",gain_cc=" << fmt_g(e.peak->gain)
           << ",gain_cc_se=" << fmt_g(e.peak->std_error) << '\n';
    }
}

std::filesystem::path per_alpha_path(const std::filesystem::path& base, double alpha) {
    auto stem = base.stem().string() + "_alpha" + fmt_g(alpha);
    return base.parent_path() / (stem + base.extension().string());
}

int execute(const RunSpec& spec, const std::string& output, const std::string& manifest_out,
            std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    const ConstellationSpec cs = build_constellations(spec);
    std::vector<Emitted> results;
    const std::vector<double> alphas =
        spec.mode == RelayMode::HalfDuplex ? spec.alphas : std::vector<double>{};

    if (spec.mode == RelayMode::FullDuplex) {
        results.push_back({sweep_p(RelayMode::FullDuplex, spec.scenario, cs, spec.p_grid_db,
                                   spec.cfg, spec.options),
                           std::nullopt});
    } else {
        for (auto& t : sweep_alpha(spec.scenario, cs, alphas, spec.p_grid_db, spec.cfg, spec.options)) {
            results.push_back({std::move(t), std::nullopt});
        }
    }
    if (spec.report_peak || spec.refine_peak) {
        for (auto& r : results) {
            if (r.table.rows.empty()) continue;
            r.peak = spec.refine_peak ? refine_max_gain(r.table, cs) : find_max_gain(r.table);
        }
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json manifest = manifest_json(spec, elapsed);

    if (!manifest_out.empty()) {
        std::ofstream mf(manifest_out);
        if (!mf) {
            err << "error: cannot write manifest " << manifest_out << '\n';
            return kFailure;
        }
        mf << manifest.dump(2) << '\n';
    }

    if (output.empty()) {
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results.size() > 1 && spec.format == "csv") {
                if (i > 0) out << '\n';
                out << "# alpha=" << fmt_g(alphas[i]) << '\n';
            }
            write_table(out, spec, results[i], manifest);
        }
        return kOk;
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto path = results.size() > 1 ? per_alpha_path(output, alphas[i])
                                             : std::filesystem::path(output);
        std::ofstream f(path);
        if (!f) {
            err << "error: cannot write " << path.string() << '\n';
            return kFailure;
        }
        write_table(f, spec, results[i], manifest);
    }
    return kOk;
}

struct RunFlags {
    std::string mode = "fd";
    std::string constellation = "qam4";
    std::string constellation_file;
    std::string relay_constellation;
    std::string phase2_constellation;
    bool no_normalize = false;
    std::optional<double> sigma_ds, sigma_rs, sigma_dr;
    std::string scenario_file;
    std::string p_grid;
    bool linear_p = false;
    std::string alpha = "0.5";
    std::size_t fading_samples = McConfig{}.fading_samples;
    std::size_t noise_samples = McConfig{}.noise_samples;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string output;
    std::string manifest_out;
    std::string from_manifest;
    bool no_relay_alpha_scaling = false;
    bool independent_arms = false;
    bool report_peak = false;
    bool refine_peak = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool gain) {
    cmd->add_option("--mode", f.mode, "fd or hd")->capture_default_str();
    cmd->add_option("--constellation", f.constellation, "qam4, psk8, pam4, bpsk, ...")->capture_default_str();
    cmd->add_option("--constellation-file", f.constellation_file, "JSON array of [re, im] pairs");
    cmd->add_flag("--no-normalize", f.no_normalize, "keep the file's point energies");
    cmd->add_option("--relay-constellation", f.relay_constellation, "relay alphabet (default: --constellation)");
    cmd->add_option("--phase2-constellation", f.phase2_constellation, "HD phase-2 source alphabet");
    cmd->add_option("--sigma-ds-db", f.sigma_ds, "S-D fading variance [dB]");
    cmd->add_option("--sigma-rs-db", f.sigma_rs, "S-R fading variance [dB]");
    cmd->add_option("--sigma-dr-db", f.sigma_dr, "R-D fading variance [dB]");
    cmd->add_option("--scenario", f.scenario_file, "JSON scenario file");
    cmd->add_option("--p-db", f.p_grid, "power grid: start:stop:step, list or value");
    cmd->add_flag("--linear-p", f.linear_p, "read --p-db values as linear powers");
    cmd->add_option("--alpha", f.alpha, gain ? "HD duty cycle(s), comma separated" : "HD duty cycle")
        ->capture_default_str();
    cmd->add_option("--fading-samples", f.fading_samples)->capture_default_str();
    cmd->add_option("--noise-samples", f.noise_samples)->capture_default_str();
    cmd->add_option("--seed", f.seed)->capture_default_str();
    cmd->add_option("--format", f.format, "csv or json")->capture_default_str();
    cmd->add_option("--output,-o", f.output, "output file (default: stdout)");
    cmd->add_option("--manifest", f.manifest_out, "write the run manifest here");
    cmd->add_option("--from-manifest", f.from_manifest, "rerun a recorded manifest");
    cmd->add_flag("--no-relay-alpha-scaling", f.no_relay_alpha_scaling,
                  "use relay power P instead of P/(1-alpha) in R7");
    cmd->add_flag("--independent-arms", f.independent_arms,
                  "draw the direct arm's fading independently");
    if (gain) {
        cmd->add_flag("--report-peak", f.report_peak, "append the maximum relay gain per table");
        cmd->add_flag("--refine-peak", f.refine_peak, "re-evaluate the peak neighbourhood at 4x fading samples");
    }
}

RunSpec spec_from_flags(const RunFlags& f, const std::string& command) {
    if (!f.from_manifest.empty()) {
        RunSpec s = spec_from_manifest(f.from_manifest);
        s.command = command;
        return s;
    }
    RunSpec s;
    s.command = command;
    s.mode = parse_mode(f.mode);
    if (!f.scenario_file.empty()) s.scenario = load_scenario(f.scenario_file, s.scenario);
    if (f.sigma_ds) s.scenario.sigma_ds_db = *f.sigma_ds;
    if (f.sigma_rs) s.scenario.sigma_rs_db = *f.sigma_rs;
    if (f.sigma_dr) s.scenario.sigma_dr_db = *f.sigma_dr;
    if (f.scenario_file.empty() && (!f.sigma_ds || !f.sigma_rs || !f.sigma_dr)) {
        throw UsageError("--sigma-ds-db, --sigma-rs-db and --sigma-dr-db are required (or --scenario)");
    }
    if (f.p_grid.empty()) throw UsageError("--p-db is required");
    std::vector<double> grid = parse_grid(f.p_grid);
    if (f.linear_p) {
        for (auto& v : grid) {
            if (v < 0.0) throw UsageError("linear powers must be nonnegative");
            v = v == 0.0 ? -INFINITY : linear_to_db(v);
        }
    }
    s.p_grid_db = std::move(grid);

    std::vector<double> alphas;
    if (f.scenario_file.empty() || f.alpha != "0.5") {
        alphas = parse_grid(f.alpha);
    } else {
        alphas = {s.scenario.alpha};
    }
    if (command == "bounds" && alphas.size() != 1) throw UsageError("bounds takes a single --alpha");
    s.alphas = alphas;
    s.scenario.alpha = alphas.front();

    s.constellation = f.constellation;
    s.relay_constellation = f.relay_constellation;
    s.phase2_constellation = f.phase2_constellation;
    s.normalize = !f.no_normalize;
    if (!f.constellation_file.empty()) {
        std::ifstream in(f.constellation_file);
        if (!in) throw UsageError("cannot open " + f.constellation_file);
        try {
            s.custom_points = json::parse(in);
        } catch (const json::exception& e) {
            throw UsageError("constellation file is not valid JSON: " + std::string(e.what()));
        }
        s.custom_label = std::filesystem::path(f.constellation_file).stem().string();
        s.constellation = s.custom_label;
    }
    s.cfg.fading_samples = f.fading_samples;
    s.cfg.noise_samples = f.noise_samples;
    s.cfg.seed = f.seed;
    s.options.relay_alpha_scaling = !f.no_relay_alpha_scaling;
    s.options.common_random_numbers = !f.independent_arms;
    s.report_peak = f.report_peak;
    s.refine_peak = f.refine_peak;
    if (f.format != "csv" && f.format != "json") throw UsageError("--format must be csv or json");
    s.format = f.format;
    return s;
}

int run_verify(const std::string& which, std::size_t nodes, std::size_t points,
               std::size_t noise_samples, std::uint64_t seed, const std::string& constellations,
               const RateEstimator& estimator, std::ostream& out) {
    VerifyOptions opts;
    opts.nodes = nodes;
    opts.points = points;
    opts.noise_samples = noise_samples;
    opts.seed = seed;
    if (!which.empty()) {
        opts.terms.clear();
        std::stringstream ss(which);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto t = parse_rate_term(trim(item));
            if (!t) throw UsageError("unknown rate term '" + item + "' (expected r1..r9)");
            opts.terms.push_back(*t);
        }
    }
    if (!constellations.empty()) {
        opts.constellations.clear();
        std::stringstream ss(constellations);
        std::string item;
        while (std::getline(ss, item, ',')) opts.constellations.push_back(trim(item));
    }
    const VerifyReport report = run_verify_suite(opts, estimator);
    out << "term,constellation,c_ds,c_rs,c_dr,power,mc_bits,mc_se,oracle_bits,deviation,tolerance,status\n";
    for (const auto& c : report.cases) {
        out << to_string(c.term) << ',' << c.constellation << ',' << fmt_g(c.fading.c_ds) << ','
            << fmt_g(c.fading.c_rs) << ',' << fmt_g(c.fading.c_dr) << ',' << fmt_g(c.power) << ','
            << fmt_g(c.mc.bits) << ',' << fmt_g(c.mc.std_error) << ',' << fmt_g(c.oracle_bits) << ','
            << fmt_g(c.deviation) << ',' << fmt_g(c.tolerance) << ',' << (c.pass ? "ok" : "FAIL") << '\n';
    }
    if (!report.cases.empty()) {
        const auto& w = report.cases[report.worst];
        out << "# worst: " << to_string(w.term) << ' ' << w.constellation
            << " deviation=" << fmt_g(w.deviation) << " tolerance=" << fmt_g(w.tolerance) << '\n';
    }
    out << "# " << (report.all_pass ? "all checks passed" : "verification FAILED") << '\n';
    return report.all_pass ? kOk : kFailure;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw UsageError("empty grid");
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(trim(item));
        if (parts.size() != 3) throw UsageError("grid must be start:stop:step, got '" + t + "'");
        const double start = parse_double(parts[0]);
        const double stop = parse_double(parts[1]);
        const double step = parse_double(parts[2]);
        if (!(step > 0.0) || !std::isfinite(step)) throw UsageError("grid step must be positive");
        if (stop < start) throw UsageError("grid stop must not be below start");
        std::vector<double> g;
        // inclusive of stop within half a step
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5));
        for (std::size_t i = 0; i <= n; ++i) g.push_back(start + double(i) * step);
        return g;
    }
    std::vector<double> g;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) g.push_back(parse_double(trim(item)));
    return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return run(args, out, err, estimate_rate);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const RateEstimator& estimator) {
    CLI::App app{"Constellation-constrained rate bounds and relay gain for fading relay channels",
                 "relaycc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    RunFlags bounds_flags;
    auto* bounds = app.add_subcommand("bounds", "lower/upper bounds and direct capacity over a P grid");
    add_run_flags(bounds, bounds_flags, false);

    RunFlags gain_flags;
    auto* gain = app.add_subcommand("gain", "relay gain over a P grid, one table per alpha");
    add_run_flags(gain, gain_flags, true);

    std::string which;
    std::size_t nodes = VerifyOptions{}.nodes;
    std::size_t points = VerifyOptions{}.points;
    std::size_t verify_noise = VerifyOptions{}.noise_samples;
    std::uint64_t verify_seed = 0;
    std::string verify_constellations;
    auto* verify = app.add_subcommand("verify", "compare the Monte-Carlo estimators with quadrature");
    verify->add_option("--which", which, "comma separated terms, e.g. r1,r3 (default: all)");
    verify->add_option("--nodes", nodes, "Gauss-Hermite nodes per dimension")->capture_default_str();
    verify->add_option("--points", points, "random points per constellation")->capture_default_str();
    verify->add_option("--noise-samples", verify_noise)->capture_default_str();
    verify->add_option("--seed", verify_seed)->capture_default_str();
    verify->add_option("--constellations", verify_constellations, "default: bpsk,qam4");

    auto* consts = app.add_subcommand("constellations", "list standard constellations or dump one");
    std::string action = "list";
    std::string dump_name;
    consts->add_option("action", action, "list or dump")->check(CLI::IsMember({"list", "dump"}));
    consts->add_option("name", dump_name, "constellation to dump, e.g. qam16");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (active == bounds || active == gain) {
            const RunFlags& f = active == bounds ? bounds_flags : gain_flags;
            const RunSpec spec = spec_from_flags(f, active->get_name());
            return execute(spec, f.output, f.manifest_out, out, err);
        }
        if (active == verify) {
            return run_verify(which, nodes, points, verify_noise, verify_seed, verify_constellations,
                              estimator, out);
        }
        if (action == "list") {
            out << "qam<M>  square QAM, M = 4, 16, 36, 64, ... (qam2 = bpsk), row-major\n"
                << "psk<M>  M >= 2, counterclockwise from angle 0\n"
                << "pam<M>  M >= 2, ascending\n"
                << "bpsk, qpsk aliases\n";
            return kOk;
        }
        if (dump_name.empty()) throw UsageError("constellations dump needs a name");
        out << constellation_to_json_text(parse_standard(dump_name)) << '\n';
        return kOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << active->help();
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n\n" << active->help();
        return kUsage;
    }
}

}  // namespace relaycc::cli
