#include "irsma_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "irsma/config.hpp"
#include "irsma/report.hpp"
#include "irsma/scheme.hpp"
#include "irsma/single_user.hpp"
#include "irsma/sweep.hpp"

namespace irsma::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> seeds;
    std::optional<std::size_t> threads;
    std::string scheme;
    std::string out_dir = "out";
    bool desk = false;
    std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config_path, "INI or JSON config file")->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "First S-CSI seed");
    app->add_option("--seeds", c.seeds, "Number of S-CSI seeds");
    app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    app->add_option("--scheme", c.scheme, "Scheme name, comma-separated list, or 'all'");
    app->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
    app->add_flag("--desk", c.desk, "Start from the reduced desk-scale profile");
    app->add_option("--set", c.sets, "Override a config key, e.g. --set system.users=2")->take_all();
}

ExperimentConfig build_config(const Common& c)
{
    const ExperimentConfig base = c.desk ? ExperimentConfig::desk() : ExperimentConfig{};
    ExperimentConfig cfg = c.config_path.empty() ? base : ExperimentConfig::load(c.config_path, base);
    for (const auto& s : c.sets)
        cfg.set(s);
    if (c.seed)
        cfg.run.seed = *c.seed;
    if (c.seeds)
        cfg.run.seeds = *c.seeds;
    if (c.threads)
        cfg.run.threads = *c.threads;
    if (!c.scheme.empty())
        cfg.run.scheme = c.scheme;
    cfg.validate();
    return cfg;
}

std::vector<SchemeId> parse_schemes(const std::string& text)
{
    if (text == "all")
        return all_schemes();
    std::vector<SchemeId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto id = parse_scheme(item);
        if (!id)
            throw std::invalid_argument("unknown scheme " + item);
        out.push_back(*id);
    }
    if (out.empty())
        throw std::invalid_argument("no scheme given");
    return out;
}

json config_json(const ExperimentConfig& cfg)
{
    json j = json::object();
    std::stringstream ss(cfg.to_ini());
    std::string line;
    std::string section;
    while (std::getline(ss, line)) {
        if (line.empty())
            continue;
        if (line.front() == '[') {
            section = line.substr(1, line.size() - 2);
            j[section] = json::object();
            continue;
        }
        const auto eq = line.find(" = ");
        j[section][line.substr(0, eq)] = line.substr(eq + 3);
    }
    return j;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    writer(os);
}

void write_manifest(const fs::path& dir, const std::string& command, const ExperimentConfig& cfg,
                    const std::vector<std::string>& outputs, json extra = json::object())
{
    json m;
    m["tool"] = "irsma";
    m["version"] = IRSMA_VERSION;
    m["git"] = IRSMA_GIT_HASH;
    m["command"] = command;
    m["seed"] = cfg.run.seed;
    m["seeds"] = seed_list(cfg);
    m["config_hash"] = cfg.hash();
    m["config"] = config_json(cfg);
    m["outputs"] = outputs;
    for (auto& [k, v] : extra.items())
        m[k] = v;
    write_file(dir / "manifest.json", [&](std::ostream& os) { os << m.dump(2) << '\n'; });
}

std::vector<double> default_points(const ExperimentConfig& cfg, const std::string& axis)
{
    if (!cfg.run.points.empty())
        return cfg.run.points;
    if (axis == "power")
        return {10.0, 20.0, 30.0, 40.0};
    if (axis == "elements") {
        const double ny = static_cast<double>(cfg.system.irs_ny);
        return {4.0 * ny, 8.0 * ny, 12.0 * ny, 16.0 * ny};
    }
    if (axis == "paths")
        return {0.0, 1.0, 3.0, 5.0};
    return {1.0, 2.0, 3.0, 4.0};
}

int run_grid(const std::string& command, const ExperimentConfig& cfg, const std::string& out_dir,
             std::vector<double> points, std::ostream& out)
{
    SweepRequest req;
    req.schemes = parse_schemes(cfg.run.scheme);
    req.axis = cfg.run.axis;
    req.points = std::move(points);
    req.seeds = seed_list(cfg);
    req.threads = cfg.run.threads;
    const auto records = run_sweep(cfg, req);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / "results.csv", [&](std::ostream& os) { write_results_csv(os, records); });
    const auto summary = summarize(records);
    write_file(dir / "summary.csv", [&](std::ostream& os) { write_summary_csv(os, summary); });
    json extra;
    extra["axis"] = req.axis;
    extra["points"] = req.points;
    std::vector<std::string> names;
    for (auto s : req.schemes)
        names.emplace_back(scheme_name(s));
    extra["schemes"] = names;
    write_manifest(dir, command, cfg, {"results.csv", "summary.csv"}, extra);

    for (const auto& row : summary)
        out << fmt::format("{:<18} {}={:<8g} rate={:.4f} +/- {:.4f} bps/Hz ({} seeds)\n", row.scheme, row.axis,
                           row.axis_value, row.rate_mean, row.rate_se, row.seeds);
    return 0;
}

int run_convergence(const ExperimentConfig& cfg, bool single_user, const std::string& scheme_text,
                    const std::string& out_dir, std::ostream& out)
{
    std::vector<TraceRow> rows;
    std::vector<ResultRecord> records;
    if (single_user) {
        const RadioContext radio = cfg.radio();
        const ConfigRegions regions = cfg.regions();
        const auto grid = angle_grid(regions.psi, cfg.algorithm.psi_points);
        for (std::uint64_t seed : seed_list(cfg)) {
            const StatisticalCsi scsi = scenario_scsi(cfg, seed);
            const BsAngles angles = BsAngles::of(scsi, 0);
            const double psi =
                narrow_branch_psi(angles, cfg.system.antennas, regions.q, grid, radio).value_or(0.0);
            Rng rng = Rng::stream(seed, "de-convergence");
            const P31Solution sol =
                position_de(psi, angles, cfg.system.antennas, regions.q, radio, cfg.algorithm.de, rng);
            for (std::size_t s = 1; s < sol.trace.size(); ++s)
                rows.push_back({"de_single_user", "proposed", seed, s, sol.trace[s]});
        }
    } else {
        const auto schemes = parse_schemes(scheme_text.empty() ? "de_ssca,low_complexity" : scheme_text);
        for (std::uint64_t seed : seed_list(cfg)) {
            const InnerResult base = baseline_ssca(cfg, seed);
            for (std::size_t i = 0; i < base.surrogate.size(); ++i)
                rows.push_back({"ssca_surrogate", "fixed", seed, i + 1, base.surrogate[i]});
            for (SchemeId id : schemes) {
                SchemeTraces tr;
                ResultRecord rec = run_scheme(cfg, id, seed, &tr);
                rec.axis = cfg.run.axis;
                rec.axis_value = axis_value(cfg, cfg.run.axis);
                records.push_back(std::move(rec));
                for (std::size_t s = 1; s < tr.de_best.size(); ++s)
                    rows.push_back({"de_multi_user", std::string(scheme_name(id)), seed, s, tr.de_best[s]});
            }
        }
    }

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, rows); });
    std::vector<std::string> outputs{"trace.csv"};
    if (!records.empty()) {
        write_file(dir / "results.csv", [&](std::ostream& os) { write_results_csv(os, records); });
        outputs.emplace_back("results.csv");
    }
    json extra;
    extra["single_user"] = single_user;
    write_manifest(dir, "convergence", cfg, outputs, extra);
    out << fmt::format("wrote {} trace rows to {}\n", rows.size(), (dir / "trace.csv").string());
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Two-timescale configuration and beamforming simulator"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    Common run_opts;
    auto* run = app.add_subcommand("run", "Run schemes at one operating point");
    add_common(run, run_opts);

    Common sweep_opts;
    std::string axis;
    std::string points_text;
    auto* sweep = app.add_subcommand("sweep", "Sweep one axis for a list of schemes");
    add_common(sweep, sweep_opts);
    sweep->add_option("--axis", axis, "power | elements | paths | aperture");
    sweep->add_option("--points", points_text, "Comma-separated axis values");

    Common conv_opts;
    bool single_user = false;
    auto* conv = app.add_subcommand("convergence", "Emit DE / SSCA convergence traces");
    add_common(conv, conv_opts);
    conv->add_flag("--single-user", single_user, "Position DE trace of the single-user design");

    auto* validate = app.add_subcommand("validate", "Run the built-in oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) {
            const ExperimentConfig cfg = build_config(run_opts);
            return run_grid("run", cfg, run_opts.out_dir, {}, out);
        }
        if (*sweep) {
            ExperimentConfig cfg = build_config(sweep_opts);
            if (!axis.empty())
                cfg.run.axis = axis;
            if (!is_axis(cfg.run.axis))
                throw std::invalid_argument("unknown axis " + cfg.run.axis);
            if (!points_text.empty())
                cfg.set("run.points=" + points_text);
            return run_grid("sweep", cfg, sweep_opts.out_dir, default_points(cfg, cfg.run.axis), out);
        }
        if (*conv) {
            ExperimentConfig cfg = build_config(conv_opts);
            if (single_user)
                cfg.system.users = 1;
            return run_convergence(cfg, single_user, conv_opts.scheme, conv_opts.out_dir, out);
        }
        if (*validate)
            return run_validation(out) ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace irsma::cli
