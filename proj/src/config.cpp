#include "schwinger/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "schwinger/error.hpp"
#include "schwinger/trotter.hpp"

namespace schwinger {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::evolve: return "evolve";
    case ExperimentKind::trotter: return "trotter";
    case ExperimentKind::noise: return "noise";
    case ExperimentKind::entropy: return "entropy";
    case ExperimentKind::continuum: return "continuum";
    case ExperimentKind::compare: return "compare";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::evolve, ExperimentKind::trotter, ExperimentKind::noise, ExperimentKind::entropy,
                   ExperimentKind::continuum, ExperimentKind::compare})
        if (s == to_string(k)) return k;
    throw ConfigError("kind", "unknown experiment kind '" + s + "'");
}

std::vector<double> TimeGrid::values() const {
    if (!points.empty()) return points;
    return uniform_grid(start, stop, step);
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads one JSON object, remembering which keys were consumed.
class Section {
  public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    Section child(const std::string& key) { return Section(raw(key), field(key)); }

    std::string field(const std::string& key) const { return join(path_, key); }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
        return d;
    }

    long integer(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
        return v.get<long>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_number_unsigned()) throw ConfigError(field(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_string()) throw ConfigError(field(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_array()) throw ConfigError(field(key), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(field(key), "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<int> integers(const std::string& key, std::vector<int> fallback) {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_array()) throw ConfigError(field(key), "expected an array of integers");
        std::vector<int> out;
        for (const auto& e : v) {
            if (!e.is_number_integer()) throw ConfigError(field(key), "expected an array of integers");
            out.push_back(e.get<int>());
        }
        return out;
    }

    std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_array()) throw ConfigError(field(key), "expected an array of strings");
        std::vector<std::string> out;
        for (const auto& e : v) {
            if (!e.is_string()) throw ConfigError(field(key), "expected an array of strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    void reject(const std::string& key, const std::string& why) {
        if (has(key)) throw ConfigError(field(key), why);
    }

    /// Every key must have been read.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
    }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void apply_assignment(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError(assignment, "override must have the form path=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::exception&) {
        value = text;  // bare words are strings
    }
    json* node = &doc;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].empty()) throw ConfigError(path, "empty path component");
        if (!node->is_object()) throw ConfigError(path, "cannot assign inside a non-object");
        if (k + 1 == parts.size()) {
            (*node)[parts[k]] = value;
        } else {
            node = &(*node)[parts[k]];
            if (node->is_null()) *node = json::object();
        }
    }
}

const std::set<std::string> known_observables{"nu", "loschmidt", "lambda", "entropy", "magnetization", "field"};

ModelParams parse_model(Section s, bool& j0_given) {
    ModelParams p;
    p.n_sites = static_cast<int>(s.integer("n_sites", p.n_sites));
    p.w = s.number("w", p.w);
    p.j = s.number("j", p.j);
    p.mass = s.number("mass", p.mass);
    j0_given = s.has("j0");
    p.j0 = s.number("j0", p.j0);
    p.eps0 = static_cast<int>(s.integer("eps0", 0));
    s.finish();
    try {
        p.validate();
    } catch (const ParameterError& e) {
        throw ConfigError("model", e.what());
    }
    if (p.eps0 != 0) throw ConfigError("model.eps0", "only eps0 = 0 can be simulated");
    if (!j0_given) p.j0 = minimal_j0(p);
    return p;
}

TimeGrid parse_time(Section s) {
    TimeGrid g;
    if (s.has("points")) {
        s.reject("start", "give either points or start/stop/step");
        s.reject("stop", "give either points or start/stop/step");
        s.reject("step", "give either points or start/stop/step");
        g.points = s.numbers("points", {});
        if (g.points.empty()) throw ConfigError(s.field("points"), "must not be empty");
        for (std::size_t k = 1; k < g.points.size(); ++k)
            if (!(g.points[k] > g.points[k - 1])) throw ConfigError(s.field("points"), "must be strictly increasing");
    } else {
        g.start = s.number("start", g.start);
        g.stop = s.number("stop", g.stop);
        g.step = s.number("step", g.step);
        if (!(g.step > 0.0)) throw ConfigError(s.field("step"), "must be > 0");
        if (!(g.stop >= g.start)) throw ConfigError(s.field("stop"), "must be >= start");
    }
    if (g.values().front() < 0.0) throw ConfigError(s.field("start"), "times must be >= 0");
    s.finish();
    return g;
}

NoiseParams parse_noise(Section s, long& hiding_shots) {
    NoiseParams np;
    np.delta_j_rel = s.number("delta_j_rel", np.delta_j_rel);
    np.delta_w_rel = s.number("delta_w_rel", np.delta_w_rel);
    np.hidden_factor = s.number("hidden_factor", np.hidden_factor);
    np.hide_fail_p = s.number("hide_fail_p", np.hide_fail_p);
    np.n_traj = static_cast<int>(s.integer("n_traj", np.n_traj));
    hiding_shots = s.integer("hiding_shots", hiding_shots);
    s.finish();
    try {
        np.validate();
    } catch (const ParameterError& e) {
        throw ConfigError("noise", e.what());
    }
    if (hiding_shots < 1) throw ConfigError("noise.hiding_shots", "must be >= 1");
    return np;
}

SweepConfig parse_continuum(Section s) {
    SweepConfig c;
    c.mass = s.number("mass", c.mass);
    c.g_over_m = s.number("g_over_m", c.g_over_m);
    if (s.has("spacings") && s.has("m_over_w"))
        throw ConfigError(s.field("m_over_w"), "give either spacings or m_over_w");
    if (s.has("m_over_w")) {
        for (double r : s.numbers("m_over_w", {})) {
            if (!(r > 0.0) || !(c.mass > 0.0)) throw ConfigError(s.field("m_over_w"), "ratios and mass must be > 0");
            c.spacings.push_back(spacing_for_mass_ratio(c.mass, r));
        }
    } else {
        c.spacings = s.numbers("spacings", {0.5});
    }
    c.sizes = s.integers("sizes", {6, 8, 10, 12});
    const auto initial = s.string("initial", "ground_state");
    if (initial == "ground_state") c.initial = InitialState::ground_state;
    else if (initial == "adiabatic") c.initial = InitialState::adiabatic;
    else throw ConfigError(s.field("initial"), "expected ground_state or adiabatic");
    c.ramp_time_w = s.number("ramp_time_w", c.ramp_time_w);
    c.instability_threshold = s.number("instability_threshold", c.instability_threshold);
    s.finish();
    return c;
}

} // namespace

RunConfig parse_config(const json& document, const ConfigOverrides& overrides,
                       std::optional<ExperimentKind> expected) {
    json doc = document.is_null() ? json::object() : document;
    for (const auto& a : overrides.assignments) apply_assignment(doc, a);

    Section top(doc, "");
    RunConfig c;
    if (top.has("kind")) {
        c.kind = experiment_kind_from_string(top.string("kind", ""));
        if (expected && *expected != c.kind)
            throw ConfigError("kind", std::string("config is for '") + to_string(c.kind) + "', command is '" +
                                          to_string(*expected) + "'");
    } else if (expected) {
        c.kind = *expected;
    } else {
        throw ConfigError("kind", "missing experiment kind");
    }
    const auto kind = c.kind;
    const auto kind_name = std::string("not used by ") + to_string(kind) + " runs";

    const bool needs_model = kind != ExperimentKind::continuum;
    if (needs_model) {
        if (top.has("model")) c.model = parse_model(top.child("model"), c.j0_given);
        else {
            const json empty = json::object();
            c.model = parse_model(Section(empty, "model"), c.j0_given);
        }
    } else {
        top.reject("model", kind_name + " (sizes and spacings come from the continuum section)");
    }

    if (top.has("time")) c.time = parse_time(top.child("time"));
    c.tol = top.number("tol", c.tol);
    if (!(c.tol > 0.0)) throw ConfigError("tol", "must be > 0");
    c.seed = top.unsigned_integer("seed", c.seed);
    c.threads = static_cast<int>(top.integer("threads", c.threads));
    c.out = top.string("out", c.out);

    if (needs_model) {
        c.initial = top.string("initial", c.initial);
        if (c.initial == "snapshot") {
            c.initial_snapshot = top.string("initial_snapshot", "");
            if (c.initial_snapshot.empty()) throw ConfigError("initial_snapshot", "required when initial is snapshot");
        } else if (c.initial != "bare_vacuum") {
            throw ConfigError("initial", "expected bare_vacuum or snapshot");
        } else {
            top.reject("initial_snapshot", "only used when initial is snapshot");
        }
        c.observables = top.strings("observables", c.observables);
        if (c.observables.empty()) throw ConfigError("observables", "must not be empty");
        for (const auto& o : c.observables) {
            if (!known_observables.count(o)) throw ConfigError("observables", "unknown observable '" + o + "'");
            if (o == "field" && (kind == ExperimentKind::noise || kind == ExperimentKind::compare))
                throw ConfigError("observables", "field profiles are not averaged over noise trajectories");
        }
        c.entropy_cut = static_cast<int>(top.integer("entropy_cut", 0));
        if (c.entropy_cut < 0 || c.entropy_cut >= c.model.n_sites)
            throw ConfigError("entropy_cut", "must lie in [1, N-1] (0 selects N/2)");
    } else {
        for (const char* k : {"initial", "initial_snapshot", "observables", "entropy_cut"}) top.reject(k, kind_name);
    }

    const bool uses_trotter = kind == ExperimentKind::trotter || kind == ExperimentKind::noise;
    if (uses_trotter) {
        if (!top.has("trotter")) throw ConfigError("trotter", std::string("required for ") + to_string(kind) + " runs");
        auto s = top.child("trotter");
        TrotterConfig t;
        t.cycle_time = s.number("cycle_time", t.cycle_time);
        t.dt_III = s.number("dt_III", t.dt_III);
        s.finish();
        if (!(t.cycle_time > 0.0)) throw ConfigError("trotter.cycle_time", "must be > 0");
        if (!(t.dt_III >= 0.0)) throw ConfigError("trotter.dt_III", "must be >= 0");
        c.trotter = t;
    } else {
        top.reject("trotter", kind_name);
    }

    const bool noise_allowed = kind == ExperimentKind::noise || kind == ExperimentKind::compare;
    if (noise_allowed && top.has("noise")) {
        c.noise = parse_noise(top.child("noise"), c.hiding_shots);
    } else if (kind == ExperimentKind::noise) {
        throw ConfigError("noise", "required for noise runs");
    } else {
        top.reject("noise", kind_name);
    }

    if (kind == ExperimentKind::compare) {
        if (top.has("compare")) {
            auto s = top.child("compare");
            c.compare.cycle_times = s.numbers("cycle_times", c.compare.cycle_times);
            s.finish();
        }
        if (c.compare.cycle_times.empty()) throw ConfigError("compare.cycle_times", "must not be empty");
        for (double t : c.compare.cycle_times)
            if (!(t > 0.0)) throw ConfigError("compare.cycle_times", "must be > 0");
    } else {
        top.reject("compare", kind_name);
    }

    if (kind == ExperimentKind::continuum) {
        if (!top.has("continuum")) throw ConfigError("continuum", "required for continuum runs");
        c.continuum = parse_continuum(top.child("continuum"));
    } else {
        top.reject("continuum", kind_name);
    }
    top.finish();

    if (overrides.seed) c.seed = *overrides.seed;
    if (overrides.threads) c.threads = *overrides.threads;
    if (overrides.out) c.out = *overrides.out;
    if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
    if (c.out.empty()) {
        const char* root = std::getenv("SCHWINGER_OUT");
        c.out = std::string(root && *root ? root : "runs") + "/" + to_string(kind);
    }
    if (c.noise) c.noise->seed = c.seed;
    if (c.continuum) {
        c.continuum->times_mt = c.time.values();
        c.continuum->tol = c.tol;
        c.continuum->threads = c.threads;
        try {
            c.continuum->validate();
        } catch (const ParameterError& e) {
            throw ConfigError("continuum", e.what());
        }
    }
    return c;
}

RunConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides,
                            std::optional<ExperimentKind> expected) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed config: ") + e.what());
    }
    return parse_config(doc, overrides, expected);
}

RunConfig load_config(const std::string& path, const ConfigOverrides& overrides,
                      std::optional<ExperimentKind> expected) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides, expected);
}

json to_json(const RunConfig& c) {
    json j;
    j["kind"] = to_string(c.kind);
    if (c.kind != ExperimentKind::continuum) {
        j["model"] = {{"n_sites", c.model.n_sites}, {"w", c.model.w},   {"j", c.model.j},
                      {"mass", c.model.mass},       {"j0", c.model.j0}, {"eps0", c.model.eps0}};
        j["j0_source"] = c.j0_given ? "config" : "minimal_j0";
        j["initial"] = c.initial;
        if (c.initial == "snapshot") j["initial_snapshot"] = c.initial_snapshot;
        j["observables"] = c.observables;
        j["entropy_cut"] = c.entropy_cut == 0 ? c.model.n_sites / 2 : c.entropy_cut;
    }
    if (c.time.points.empty()) j["time"] = {{"start", c.time.start}, {"stop", c.time.stop}, {"step", c.time.step}};
    else j["time"] = {{"points", c.time.points}};
    j["tol"] = c.tol;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out"] = c.out;
    if (c.trotter) j["trotter"] = {{"cycle_time", c.trotter->cycle_time}, {"dt_III", c.trotter->dt_III}};
    if (c.noise)
        j["noise"] = {{"delta_j_rel", c.noise->delta_j_rel}, {"delta_w_rel", c.noise->delta_w_rel},
                      {"hidden_factor", c.noise->hidden_factor}, {"hide_fail_p", c.noise->hide_fail_p},
                      {"n_traj", c.noise->n_traj},           {"hiding_shots", c.hiding_shots}};
    if (c.kind == ExperimentKind::compare) j["compare"] = {{"cycle_times", c.compare.cycle_times}};
    if (c.continuum)
        j["continuum"] = {{"mass", c.continuum->mass},
                          {"g_over_m", c.continuum->g_over_m},
                          {"spacings", c.continuum->spacings},
                          {"sizes", c.continuum->sizes},
                          {"initial", c.continuum->initial == InitialState::ground_state ? "ground_state" : "adiabatic"},
                          {"ramp_time_w", c.continuum->ramp_time_w},
                          {"instability_threshold", c.continuum->instability_threshold}};
    return j;
}

} // namespace schwinger
