#include "irsma/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/json_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace irsma {

double dbm_to_watts(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts)
{
    if (!(watts > 0.0))
        throw std::invalid_argument("watts_to_dbm: power must be positive");
    return 10.0 * std::log10(watts) + 30.0;
}

ExperimentConfig ExperimentConfig::desk()
{
    ExperimentConfig c;
    c.system.antennas = 6;
    c.system.irs_nx = 8;
    c.system.irs_ny = 4;
    c.system.users = 3;
    c.algorithm.ssca.batch = 20;
    // Rate gradients at this size are small; the full-scale 0.015 leaves v near its start.
    c.algorithm.ssca.tau = 1e-3;
    c.algorithm.de.population = 10;
    c.algorithm.de.generations = 12;
    // The relaxation is tight on these instances; 1e-3 extracts the same v.
    c.algorithm.sdp.tol = 1e-3;
    c.run.seeds = 10;
    return c;
}

IrsLayout ExperimentConfig::layout() const
{
    return IrsLayout::grid(system.irs_nx, system.irs_ny, radio().min_spacing());
}

ConfigRegions ExperimentConfig::regions() const
{
    ConfigRegions r = ConfigRegions::standard(system.antennas, radio().min_spacing(), system.region_scale);
    const double psi = system.psi_limit_deg * kPi / 180.0;
    const double phi = system.phi_limit_deg * kPi / 180.0;
    r.psi = {-psi, psi};
    r.phi = {-phi, phi};
    return r;
}

void ExperimentConfig::validate() const
{
    if (system.antennas < 1 || system.users < 1 || system.irs_nx < 1 || system.irs_ny < 1)
        throw std::invalid_argument("config: antennas, users and surface size must be positive");
    if (!(system.carrier_hz > 0.0))
        throw std::invalid_argument("config: carrier frequency must be positive");
    if (!(system.region_scale >= 1.0))
        throw std::invalid_argument("config: region_scale must be at least 1 so the ULA fits");
    if (system.psi_limit_deg < 0.0 || system.phi_limit_deg < 0.0)
        throw std::invalid_argument("config: rotation limits must be non-negative");
    if (system.nlos_power_ratio < 0.0)
        throw std::invalid_argument("config: nlos_power_ratio must be non-negative");
    algorithm.de.validate();
    if (algorithm.ssca.batch == 0 || !(algorithm.ssca.tau > 0.0))
        throw std::invalid_argument("config: ssca batch and tau must be positive");
    if (algorithm.psi_points == 0 || algorithm.phi_points == 0)
        throw std::invalid_argument("config: search grids need at least one point");
    if (run.seeds == 0 || run.test_samples == 0)
        throw std::invalid_argument("config: seeds and test_samples must be positive");
    // Users are drawn per seed, so only the disk itself is checked here.
    if (!(geometry.user_radius >= 0.0))
        throw std::invalid_argument("config: geometry.user_radius must be non-negative");
}

namespace {

std::string fmt_value(double x) { return fmt::format("{}", x); }
std::string fmt_value(std::size_t x) { return fmt::format("{}", x); }
std::string fmt_value(bool x) { return x ? "true" : "false"; }
std::string fmt_value(InnerKind x) { return x == InnerKind::scg ? "scg" : "ssca"; }
std::string fmt_value(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? "," : "") + fmt_value(xs[i]);
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text)
{
    throw std::invalid_argument("config: bad value '" + text + "' for " + key);
}

double parse_double(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used != text.size())
            bad_value(key, text);
        return x;
    } catch (const std::logic_error&) {
        bad_value(key, text);
    }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text)
{
    if (text.empty() || text[0] == '-' || text[0] == '+')
        bad_value(key, text);
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(text, &used);
        if (used != text.size())
            bad_value(key, text);
        return x;
    } catch (const std::logic_error&) {
        bad_value(key, text);
    }
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off")
        return false;
    bad_value(key, text);
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            continue;
        out.push_back(parse_double(key, item.substr(b, e - b + 1)));
    }
    return out;
}

struct Field {
    std::string key; // "section.name"
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <class Ref>
Field real_field(std::string key, Ref ref)
{
    return {key, [ref](const ExperimentConfig& c) { return fmt_value(ref(const_cast<ExperimentConfig&>(c))); },
            [ref, key](ExperimentConfig& c, const std::string& s) { ref(c) = parse_double(key, s); }};
}

template <class Ref>
Field count_field(std::string key, Ref ref)
{
    return {key,
            [ref](const ExperimentConfig& c) {
                return fmt_value(static_cast<std::size_t>(ref(const_cast<ExperimentConfig&>(c))));
            },
            [ref, key](ExperimentConfig& c, const std::string& s) {
                using T = std::remove_reference_t<decltype(ref(c))>;
                ref(c) = static_cast<T>(parse_unsigned(key, s));
            }};
}

template <class Ref>
Field bool_field(std::string key, Ref ref)
{
    return {key, [ref](const ExperimentConfig& c) { return fmt_value(ref(const_cast<ExperimentConfig&>(c))); },
            [ref, key](ExperimentConfig& c, const std::string& s) { ref(c) = parse_bool(key, s); }};
}

#define IRSMA_REF(expr) [](ExperimentConfig & c) -> auto& { return c.expr; }

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> t;
        t.push_back(count_field("system.antennas", IRSMA_REF(system.antennas)));
        t.push_back(count_field("system.irs_nx", IRSMA_REF(system.irs_nx)));
        t.push_back(count_field("system.irs_ny", IRSMA_REF(system.irs_ny)));
        t.push_back(real_field("system.carrier_hz", IRSMA_REF(system.carrier_hz)));
        t.push_back(count_field("system.users", IRSMA_REF(system.users)));
        t.push_back(count_field("system.paths_bs_irs", IRSMA_REF(system.paths.bs_irs)));
        t.push_back(count_field("system.paths_irs_user", IRSMA_REF(system.paths.irs_user)));
        t.push_back(count_field("system.paths_bs_user", IRSMA_REF(system.paths.bs_user)));
        t.push_back(real_field("system.power_dbm", IRSMA_REF(system.power_dbm)));
        t.push_back(real_field("system.noise_dbm", IRSMA_REF(system.noise_dbm)));
        t.push_back(real_field("system.region_scale", IRSMA_REF(system.region_scale)));
        t.push_back(real_field("system.psi_limit_deg", IRSMA_REF(system.psi_limit_deg)));
        t.push_back(real_field("system.phi_limit_deg", IRSMA_REF(system.phi_limit_deg)));
        t.push_back(real_field("system.nlos_power_ratio", IRSMA_REF(system.nlos_power_ratio)));

        t.push_back(real_field("geometry.bs_x", IRSMA_REF(geometry.bs[0])));
        t.push_back(real_field("geometry.bs_y", IRSMA_REF(geometry.bs[1])));
        t.push_back(real_field("geometry.bs_z", IRSMA_REF(geometry.bs[2])));
        t.push_back(real_field("geometry.irs_x", IRSMA_REF(geometry.irs[0])));
        t.push_back(real_field("geometry.irs_y", IRSMA_REF(geometry.irs[1])));
        t.push_back(real_field("geometry.irs_z", IRSMA_REF(geometry.irs[2])));
        t.push_back(real_field("geometry.user_x", IRSMA_REF(geometry.user_center[0])));
        t.push_back(real_field("geometry.user_y", IRSMA_REF(geometry.user_center[1])));
        t.push_back(real_field("geometry.user_z", IRSMA_REF(geometry.user_center[2])));
        t.push_back(real_field("geometry.user_radius", IRSMA_REF(geometry.user_radius)));

        t.push_back(count_field("de.population", IRSMA_REF(algorithm.de.population)));
        t.push_back(count_field("de.generations", IRSMA_REF(algorithm.de.generations)));
        t.push_back(real_field("de.mutation", IRSMA_REF(algorithm.de.mutation)));
        t.push_back(real_field("de.crossover", IRSMA_REF(algorithm.de.crossover)));
        t.push_back(real_field("de.penalty", IRSMA_REF(algorithm.de.penalty)));
        t.push_back(bool_field("de.seed_baseline", IRSMA_REF(algorithm.seed_baseline)));

        t.push_back(count_field("ssca.batch", IRSMA_REF(algorithm.ssca.batch)));
        t.push_back(real_field("ssca.tau", IRSMA_REF(algorithm.ssca.tau)));
        t.push_back(count_field("ssca.max_iter", IRSMA_REF(algorithm.ssca.max_iter)));
        t.push_back(count_field("ssca.window", IRSMA_REF(algorithm.ssca.window)));
        t.push_back(real_field("ssca.tol", IRSMA_REF(algorithm.ssca.tol)));
        t.push_back(bool_field("ssca.warm_start", IRSMA_REF(algorithm.warm_start)));

        t.push_back(real_field("wmmse.tol", IRSMA_REF(algorithm.wmmse.tol)));
        t.push_back(count_field("wmmse.max_iter", IRSMA_REF(algorithm.wmmse.max_iter)));

        t.push_back(real_field("sdp.tol", IRSMA_REF(algorithm.sdp.tol)));
        t.push_back(count_field("sdp.max_iter", IRSMA_REF(algorithm.sdp.max_iter)));
        t.push_back(count_field("sdp.randomizations", IRSMA_REF(algorithm.randomizations)));
        t.push_back(bool_field("sdp.refine", IRSMA_REF(algorithm.refine)));

        t.push_back(count_field("search.psi_points", IRSMA_REF(algorithm.psi_points)));
        t.push_back(count_field("search.phi_points", IRSMA_REF(algorithm.phi_points)));
        t.push_back({"search.proposed_inner",
                     [](const ExperimentConfig& c) { return fmt_value(c.algorithm.proposed_inner); },
                     [](ExperimentConfig& c, const std::string& s) {
                         if (s == "scg")
                             c.algorithm.proposed_inner = InnerKind::scg;
                         else if (s == "ssca")
                             c.algorithm.proposed_inner = InnerKind::ssca;
                         else
                             bad_value("search.proposed_inner", s);
                     }});

        t.push_back({"run.scheme", [](const ExperimentConfig& c) { return c.run.scheme; },
                     [](ExperimentConfig& c, const std::string& s) { c.run.scheme = s; }});
        t.push_back({"run.seed", [](const ExperimentConfig& c) { return fmt::format("{}", c.run.seed); },
                     [](ExperimentConfig& c, const std::string& s) { c.run.seed = parse_unsigned("run.seed", s); }});
        t.push_back(count_field("run.seeds", IRSMA_REF(run.seeds)));
        t.push_back(count_field("run.test_samples", IRSMA_REF(run.test_samples)));
        t.push_back(count_field("run.threads", IRSMA_REF(run.threads)));
        t.push_back({"run.axis", [](const ExperimentConfig& c) { return c.run.axis; },
                     [](ExperimentConfig& c, const std::string& s) { c.run.axis = s; }});
        t.push_back({"run.points", [](const ExperimentConfig& c) { return fmt_value(c.run.points); },
                     [](ExperimentConfig& c, const std::string& s) { c.run.points = parse_list("run.points", s); }});
        return t;
    }();
    return table;
}

#undef IRSMA_REF

const Field& find_field(const std::string& key)
{
    for (const auto& f : fields())
        if (f.key == key)
            return f;
    throw std::invalid_argument("config: unknown key " + key);
}

// JSON arrays arrive as children with empty names; flatten them to "a,b,c".
std::string leaf_text(const boost::property_tree::ptree& node)
{
    if (node.empty())
        return node.data();
    std::string out;
    for (const auto& [name, child] : node) {
        if (!name.empty() || !child.empty())
            throw std::invalid_argument("config: nested values are only allowed as flat lists");
        out += (out.empty() ? "" : ",") + child.data();
    }
    return out;
}

} // namespace

void ExperimentConfig::set(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("config: expected key=value, got " + assignment);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    find_field(trim(assignment.substr(0, eq))).set(*this, trim(assignment.substr(eq + 1)));
}

ExperimentConfig ExperimentConfig::parse(std::istream& is, bool json, const ExperimentConfig& base)
{
    boost::property_tree::ptree tree;
    try {
        if (json)
            boost::property_tree::read_json(is, tree);
        else
            boost::property_tree::read_ini(is, tree);
    } catch (const boost::property_tree::file_parser_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg = base;
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw std::invalid_argument("config: key outside a section: " + section);
        for (const auto& [name, value] : body)
            find_field(section + "." + name).set(cfg, leaf_text(value));
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path, const ExperimentConfig& base)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    if (!json) {
        in >> std::ws;
        json = in.peek() == '{';
    }
    return parse(in, json, base);
}

std::string ExperimentConfig::to_ini() const
{
    std::string out;
    std::string section;
    for (const auto& f : fields()) {
        const auto dot = f.key.find('.');
        const std::string sec = f.key.substr(0, dot);
        if (sec != section) {
            out += (section.empty() ? "[" : "\n[") + sec + "]\n";
            section = sec;
        }
        out += f.key.substr(dot + 1) + " = " + f.get(*this) + "\n";
    }
    return out;
}

std::string ExperimentConfig::hash() const
{
    // Thread count does not affect results, so it stays out of the hash.
    std::string text;
    for (const auto& f : fields())
        if (f.key != "run.threads")
            text += f.key + "=" + f.get(*this) + "\n";
    return fmt::format("{:016x}", hash_tag(text));
}

} // namespace irsma
