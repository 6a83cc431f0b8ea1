#include "edgerent/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "edgerent/baselines.hpp"
#include "edgerent/coerr.hpp"
#include "edgerent/estimators.hpp"
#include "edgerent/trace.hpp"

namespace edgerent {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <class T>
    void get(const std::string& key, T& out) {
        if (!has(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        }
    }

    const json& at(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.contains(k)) throw ConfigError(where_ + ": unknown key '" + k + "'");
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

SbsConfig sbs_from_json(const json& j, const std::string& where, int id) {
    ObjectReader r(j, where);
    SbsConfig s;
    s.id = id;
    r.get("rental_set", s.rental_set);
    if (r.has("prices")) {
        r.get("prices", s.prices);
    } else {
        s.prices = s.rental_set;  // w(f) = f
    }
    if (r.has("max_tasks")) {
        r.get("max_tasks", s.max_tasks);
    } else {
        s.max_tasks.clear();
        for (double f : s.rental_set) s.max_tasks.push_back(150.0 * f);
    }
    r.get("unit_hz", s.unit_hz);
    r.get("uplink_rate", s.uplink_rate);
    r.finish();
    return s;
}

json sbs_to_json(const SbsConfig& s) {
    return {{"rental_set", s.rental_set},
            {"prices", s.prices},
            {"max_tasks", s.max_tasks},
            {"unit_hz", s.unit_hz},
            {"uplink_rate", s.uplink_rate}};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults(std::size_t n_sbs) {
    ExperimentConfig c;
    c.resize_sbs(n_sbs);
    return c;
}

void ExperimentConfig::resize_sbs(std::size_t n) {
    if (!uniform_sbs && n != sbss.size())
        throw ConfigError("changing n_sbs needs a uniform sbs menu");
    const SbsConfig proto = sbss.empty() ? SbsConfig{} : sbss.front();
    n_sbs = n;
    sbss.assign(n, proto);
    for (std::size_t i = 0; i < n; ++i) sbss[i].id = static_cast<int>(i);
}

void ExperimentConfig::set_rental_set(const std::vector<double>& levels) {
    for (auto& s : sbss) {
        const double top = s.max_level();
        const double price_per_unit = s.price(top) / top;
        const double tasks_per_unit = s.admission_cap(top) / top;
        s = SbsConfig::linear(s.id, levels, price_per_unit, tasks_per_unit, s.unit_hz, s.uplink_rate);
    }
}

SystemModel ExperimentConfig::model() const {
    SystemModel m;
    m.sbss = sbss;
    m.cloud = cloud;
    m.task = task;
    m.budget = budget;
    return m;
}

SyntheticModel ExperimentConfig::synthetic_model() const {
    auto m = SyntheticModel::reference(n_sbs, demand_cap, noise_std);
    if (!profiles.empty()) {
        m.profiles = profiles;
        m.holder_L = m.lipschitz_bound();
    }
    return m;
}

void ExperimentConfig::validate() const {
    if (n_sbs == 0) throw ConfigError("n_sbs must be positive");
    if (sbss.size() != n_sbs) throw ConfigError("sbs list length must equal n_sbs");
    try {
        model().validate();
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    }
    if (horizon < 1) throw ConfigError("horizon must be at least 1");
    if (!(slot_seconds > 0.0) || !(day_seconds > 0.0)) throw ConfigError("slot and day lengths must be positive");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (dims < 1 || dims > 2) throw ConfigError("dims must be 1 or 2");
    if (cells_per_dim && *cells_per_dim < 1) throw ConfigError("cells_per_dim must be at least 1");
    if (!(demand_cap > 0.0)) throw ConfigError("demand_cap must be positive");
    if (noise_std < 0.0) throw ConfigError("noise_std must be non-negative");
    if (!profiles.empty() && profiles.size() != n_sbs)
        throw ConfigError("synthetic profiles must list one entry per SBS");
    if (mode == Mode::kSynthetic) {
        try {
            synthetic_model().validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (mode == Mode::kTrace && trace_path.empty()) throw ConfigError("trace mode needs trace.path");
    if (!sites.empty() && sites.size() != n_sbs) throw ConfigError("trace.sites must list n_sbs site ids");
    if (policies.empty()) throw ConfigError("at least one policy is required");
    std::set<std::string> names;
    for (const auto& p : policies)
        if (!names.insert(p).second) throw ConfigError("policy listed twice: " + p);
    if (replications < 1) throw ConfigError("replications must be at least 1");
    if (!(linucb_exploration >= 0.0) || !(linucb_ridge > 0.0)) throw ConfigError("bad linucb parameters");
    if (delta && !(*delta >= 1.0)) throw ConfigError("delta must be >= 1");
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    ObjectReader r(j, "config");

    std::string mode = "synthetic";
    r.get("mode", mode);
    if (mode == "synthetic") {
        c.mode = Mode::kSynthetic;
    } else if (mode == "trace") {
        c.mode = Mode::kTrace;
    } else {
        throw ConfigError("config.mode: expected synthetic or trace, got '" + mode + "'");
    }

    if (r.has("trace")) {
        ObjectReader t(r.at("trace"), r.path("trace"));
        t.get("path", c.trace_path);
        t.get("sites", c.sites);
        t.finish();
    }
    if (r.has("synthetic")) {
        ObjectReader s(r.at("synthetic"), r.path("synthetic"));
        s.get("noise_std", c.noise_std);
        if (s.has("profiles")) {
            const auto& arr = s.at("profiles");
            if (!arr.is_array()) throw ConfigError(s.path("profiles") + ": expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                ObjectReader p(arr[i], s.path("profiles") + "[" + std::to_string(i) + "]");
                DemandProfile d;
                p.get("floor", d.floor);
                p.get("peak", d.peak);
                p.get("phase", d.phase);
                p.get("daily_weight", d.daily_weight);
                p.finish();
                c.profiles.push_back(d);
            }
        }
        s.finish();
    }

    std::optional<std::size_t> n;
    if (r.has("n_sbs")) {
        std::size_t v = 0;
        r.get("n_sbs", v);
        n = v;
    }
    if (!n && !c.sites.empty()) n = c.sites.size();
    if (r.has("sbs")) {
        const auto& s = r.at("sbs");
        if (s.is_array()) {
            c.uniform_sbs = false;
            c.sbss.clear();
            for (std::size_t i = 0; i < s.size(); ++i)
                c.sbss.push_back(sbs_from_json(s[i], "config.sbs[" + std::to_string(i) + "]", static_cast<int>(i)));
            if (n && *n != c.sbss.size()) throw ConfigError("config.n_sbs disagrees with the sbs list");
            c.n_sbs = c.sbss.size();
        } else {
            c.uniform_sbs = true;
            c.sbss = {sbs_from_json(s, "config.sbs", 0)};
            c.resize_sbs(n.value_or(c.n_sbs));
        }
    } else {
        c.resize_sbs(n.value_or(c.n_sbs));
    }
    if (!c.profiles.empty() && c.profiles.size() != c.n_sbs)
        throw ConfigError("config.synthetic.profiles must list one entry per SBS");

    if (r.has("cloud")) {
        ObjectReader k(r.at("cloud"), r.path("cloud"));
        k.get("capacity_hz", c.cloud.capacity_hz);
        k.get("uplink_rate", c.cloud.uplink_rate);
        k.get("backbone_rate", c.cloud.backbone_rate);
        k.get("rtt", c.cloud.rtt);
        k.finish();
    }
    if (r.has("task")) {
        ObjectReader k(r.at("task"), r.path("task"));
        k.get("input_bits", c.task.input_bits);
        k.get("cycles", c.task.cycles);
        k.get("max_delay", c.task.max_delay);
        k.finish();
    }
    r.get("budget", c.budget);
    r.get("horizon", c.horizon);
    r.get("slot_seconds", c.slot_seconds);
    r.get("day_seconds", c.day_seconds);
    r.get("alpha", c.alpha);
    r.get("dims", c.dims);
    if (r.has("cells_per_dim")) {
        int h = 0;
        r.get("cells_per_dim", h);
        c.cells_per_dim = h;
    }
    r.get("demand_cap", c.demand_cap);
    r.get("policies", c.policies);
    if (r.has("solver")) {
        std::string s;
        r.get("solver", s);
        try {
            c.solver = parse_solver(s);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config.solver: ") + e.what());
        }
    }
    r.get("seed", c.seed);
    r.get("replications", c.replications);
    r.get("output_dir", c.output_dir);
    if (r.has("linucb")) {
        ObjectReader k(r.at("linucb"), r.path("linucb"));
        k.get("exploration", c.linucb_exploration);
        k.get("ridge", c.linucb_ridge);
        k.finish();
    }
    if (r.has("delta")) {
        double d = 1.0;
        r.get("delta", d);
        c.delta = d;
    }
    r.finish();
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = c.mode == Mode::kSynthetic ? "synthetic" : "trace";
    if (c.mode == Mode::kTrace || !c.trace_path.empty() || !c.sites.empty())
        j["trace"] = {{"path", c.trace_path}, {"sites", c.sites}};
    json syn = {{"noise_std", c.noise_std}};
    if (!c.profiles.empty()) {
        json arr = json::array();
        for (const auto& p : c.profiles)
            arr.push_back({{"floor", p.floor}, {"peak", p.peak}, {"phase", p.phase}, {"daily_weight", p.daily_weight}});
        syn["profiles"] = arr;
    }
    j["synthetic"] = syn;
    j["n_sbs"] = c.n_sbs;
    if (c.uniform_sbs) {
        j["sbs"] = sbs_to_json(c.sbss.front());
    } else {
        json arr = json::array();
        for (const auto& s : c.sbss) arr.push_back(sbs_to_json(s));
        j["sbs"] = arr;
    }
    j["cloud"] = {{"capacity_hz", c.cloud.capacity_hz},
                  {"uplink_rate", c.cloud.uplink_rate},
                  {"backbone_rate", c.cloud.backbone_rate},
                  {"rtt", c.cloud.rtt}};
    j["task"] = {{"input_bits", c.task.input_bits}, {"cycles", c.task.cycles}, {"max_delay", c.task.max_delay}};
    j["budget"] = c.budget;
    j["horizon"] = c.horizon;
    j["slot_seconds"] = c.slot_seconds;
    j["day_seconds"] = c.day_seconds;
    j["alpha"] = c.alpha;
    j["dims"] = c.dims;
    if (c.cells_per_dim) j["cells_per_dim"] = *c.cells_per_dim;
    j["demand_cap"] = c.demand_cap;
    j["policies"] = c.policies;
    j["solver"] = to_string(c.solver);
    j["seed"] = c.seed;
    j["replications"] = c.replications;
    j["output_dir"] = c.output_dir;
    j["linucb"] = {{"exploration", c.linucb_exploration}, {"ridge", c.linucb_ridge}};
    if (c.delta) j["delta"] = *c.delta;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::uint64_t config_hash(const ExperimentConfig& c) {
    const auto s = config_to_json(c).dump();
    return fnv1a(s.data(), s.size());
}

std::uint64_t replication_seed(std::uint64_t base, int replication) {
    return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(replication)));
}

BuiltScenario build_scenario(const ExperimentConfig& c, std::uint64_t seed) {
    c.validate();
    BuiltScenario out;
    auto& sc = out.scenario;
    sc.model = c.model();
    sc.oracle_solver = SolverKind::kBranchAndBound;

    if (c.mode == Mode::kSynthetic) {
        auto syn = generate_synthetic(c.synthetic_model(), c.dims, static_cast<std::size_t>(c.horizon),
                                      c.slot_seconds, c.day_seconds, splitmix64(seed));
        sc.series = std::move(syn.series);
        sc.expected = std::move(syn.expected);
        sc.horizon = c.horizon;
        return out;
    }

    const auto events = load_trace(c.trace_path);
    auto sites = c.sites;
    if (sites.empty()) {
        sites = distinct_sites(events);
        if (sites.size() < c.n_sbs)
            throw ConfigError(c.trace_path + ": trace has " + std::to_string(sites.size()) + " sites, config needs " +
                              std::to_string(c.n_sbs));
        sites.resize(c.n_sbs);
    }
    auto agg = aggregate_slots(events, c.slot_seconds, sites);
    if (agg.unknown_events > 0)
        out.warnings.push_back(std::to_string(agg.unknown_events) + " events at " +
                               std::to_string(agg.unknown_sites.size()) + " unmapped sites ignored");
    for (auto& v : agg.series.demand) {
        if (v > c.demand_cap) {
            v = c.demand_cap;
            ++out.clipped;
        }
    }
    if (out.clipped > 0) {
        std::ostringstream w;
        w << "clipped " << out.clipped << " of " << agg.series.demand.size() << " slot demands to " << c.demand_cap;
        out.warnings.push_back(w.str());
    }
    sc.series = std::move(agg.series);
    build_contexts(sc.series, c.dims, c.day_seconds);
    sc.horizon = std::min<std::int64_t>(c.horizon, static_cast<std::int64_t>(sc.series.slots));
    if (sc.horizon < c.horizon)
        out.warnings.push_back("trace covers " + std::to_string(sc.series.slots) + " slots; horizon shortened");

    // Hindsight means per (SBS, cell) of the COERR partition over the horizon.
    auto params = design_parameters(c.horizon, c.alpha, c.dims);
    if (c.cells_per_dim) params.cells_per_dim = *c.cells_per_dim;
    const auto part = params.partition();
    const auto n = sc.series.n_sbs;
    const auto d = static_cast<std::size_t>(c.dims);
    EstimatorBank bank(n);
    std::vector<CellIndex> cells(static_cast<std::size_t>(sc.horizon) * n);
    for (std::size_t t = 0; t < static_cast<std::size_t>(sc.horizon); ++t) {
        const auto x = sc.series.contexts_at(t);
        const auto lam = sc.series.demand_at(t);
        for (std::size_t i = 0; i < n; ++i) {
            cells[t * n + i] = partition_point(x.subspan(i * d, d), part);
            bank.record(i, cells[t * n + i], lam[i]);
        }
    }
    sc.expected.resize(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) sc.expected[k] = mle_estimate(bank.stats(k % n, cells[k]));
    return out;
}

std::unique_ptr<Policy> make_policy(const std::string& name, const ExperimentConfig& c, std::uint64_t seed) {
    const auto model = c.model();
    auto params = design_parameters(c.horizon, c.alpha, c.dims);
    if (c.cells_per_dim) params.cells_per_dim = *c.cells_per_dim;
    if (name == "oracle") return std::make_unique<OraclePolicy>(model, SolverKind::kBranchAndBound);
    if (name == "coerr") return std::make_unique<CoerrPolicy>(model, params, c.solver);
    if (name == "coerr-doubling")
        return std::make_unique<DoublingCoerr>(model, std::max<std::int64_t>(1, c.horizon / 8), c.alpha, c.dims,
                                               c.solver);
    if (name.starts_with("coerr-or")) {
        const auto level_s = name.substr(8);
        double level = 0.0;
        std::size_t used = 0;
        try {
            level = std::stod(level_s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != level_s.size()) throw ConfigError("bad policy name: " + name);
        for (const auto& s : model.sbss)
            if (!s.offers(level) || level == 0.0)
                throw ConfigError(name + ": level " + level_s + " is not in every rental set");
        return make_coerr_orx(model, level, params, c.solver);
    }
    if (name == "cucb" || name == "linucb" || name == "random") {
        auto arms = enumerate_arms(model.sbss, model.budget);
        const double scale = utility_upper_bound(model);
        if (name == "cucb") return std::make_unique<CucbPolicy>(model, std::move(arms), scale);
        if (name == "linucb")
            return std::make_unique<LinUcbPolicy>(model, std::move(arms), c.dims, c.linucb_exploration,
                                                  c.linucb_ridge, scale);
        return std::make_unique<RandomPolicy>(std::move(arms), splitmix64(seed ^ 0x52414e44ull));
    }
    throw ConfigError("unknown policy: " + name);
}

std::vector<std::unique_ptr<Policy>> make_policies(const ExperimentConfig& c, std::uint64_t seed) {
    std::vector<std::unique_ptr<Policy>> out;
    for (const auto& p : c.policies) out.push_back(make_policy(p, c, seed));
    return out;
}

RunResult run_experiment(const ExperimentConfig& c, std::uint64_t seed) {
    auto built = build_scenario(c, seed);
    auto policies = make_policies(c, seed);
    auto run = simulate(built.scenario, policies, c.delta);
    run.seed = seed;
    run.clipped_demands = built.clipped;
    run.warnings = std::move(built.warnings);
    return run;
}

std::string csv_comment(const ExperimentConfig& c, std::uint64_t seed) {
    std::ostringstream s;
    s << "seed=" << seed << " config_hash=" << std::hex << config_hash(c) << std::dec << " version=" << kVersion;
    return s.str();
}

}  // namespace edgerent
