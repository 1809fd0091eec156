#include "geomorph/config.hpp"

#include "geomorph/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace geomorph {

using nlohmann::json;

namespace {

const std::map<std::string, Pipeline, std::less<>> kPipelines = {
    {"plain-enkf", Pipeline::PlainEnKF},
    {"morphed-enkf", Pipeline::MorphedEnKF},
    {"naive-morphed-enkf", Pipeline::NaiveMorphedEnKF},
    {"morph-only", Pipeline::MorphOnly},
    {"nudging-run", Pipeline::NudgingRun},
};

std::string join(const std::vector<std::string>& lines) {
    std::string out = "invalid configuration:";
    for (const auto& l : lines) out += "\n  - " + l;
    return out;
}

// One JSON object being read: tracks which keys were consumed so the rest can
// be reported as unknown, and records type errors instead of throwing.
class Section {
public:
    Section(const json* obj, std::string path, std::vector<std::string>& problems)
        : obj_(obj), path_(std::move(path)), problems_(problems) {}

    bool has(const char* key) const { return obj_ && obj_->contains(key); }

    template <class T>
    void read(const char* key, T& out) {
        if (!has(key)) return;
        seen_.insert(key);
        const json& v = (*obj_)[key];
        if constexpr (std::is_same_v<T, bool>) {
            if (v.is_boolean()) return void(out = v.get<bool>());
            fail(key, "a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (v.is_string()) return void(out = v.get<std::string>());
            fail(key, "a string");
        } else if constexpr (std::is_same_v<T, double>) {
            if (v.is_number()) return void(out = v.get<double>());
            fail(key, "a number");
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (v.is_number_unsigned()) return void(out = v.get<std::uint64_t>());
            fail(key, "a non-negative integer");
        } else if constexpr (std::is_integral_v<T>) {
            if (v.is_number_integer() && v.get<long long>() >= std::numeric_limits<T>::min() &&
                v.get<long long>() <= std::numeric_limits<T>::max()) {
                return void(out = static_cast<T>(v.get<long long>()));
            }
            fail(key, "an integer");
        } else {
            static_assert(sizeof(T) == 0, "unsupported config type");
        }
    }

    void read_optional(const char* key, std::optional<int>& out) {
        if (!has(key)) return;
        if ((*obj_)[key].is_null()) {
            seen_.insert(key);
            out.reset();
            return;
        }
        int v = 0;
        const auto before = problems_.size();
        read(key, v);
        if (problems_.size() == before) out = v;
    }

    Section child(const char* key) {
        if (!has(key)) return {nullptr, path_ + key + ".", problems_};
        seen_.insert(key);
        const json& v = (*obj_)[key];
        if (!v.is_object()) {
            fail(key, "an object");
            return {nullptr, path_ + key + ".", problems_};
        }
        return {&v, path_ + key + ".", problems_};
    }

    void finish() {
        if (!obj_) return;
        for (const auto& [k, v] : obj_->items()) {
            if (!seen_.contains(k)) problems_.push_back(path_ + k + ": unknown key");
        }
    }

    void problem(const char* key, const std::string& what) { problems_.push_back(path_ + key + ": " + what); }

private:
    void fail(const char* key, const char* expected) { problem(key, std::string("expected ") + expected); }

    const json* obj_;
    std::string path_;
    std::vector<std::string>& problems_;
    std::set<std::string, std::less<>> seen_;
};

// A horizon given either as "steps" or as model "time" (converted with dt).
void read_horizon(Section s, const char* name, double dt, long& steps) {
    const bool by_steps = s.has("steps");
    const bool by_time = s.has("time");
    if (by_steps && by_time) s.problem("steps", std::string("give either ") + name + ".steps or " + name + ".time");
    s.read("steps", steps);
    if (by_time) {
        double time = 0.0;
        s.read("time", time);
        if (dt > 0.0 && std::isfinite(time)) {
            const double n = time / dt;
            const double rounded = std::round(n);
            if (std::abs(n - rounded) > 1e-9 * std::max(1.0, std::abs(n))) {
                s.problem("time", "not a whole number of model steps of length dt");
            } else {
                steps = static_cast<long>(rounded);
            }
        }
    }
    s.finish();
}

void check(std::vector<std::string>& problems, bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
}

template <class F>
void check_throws(std::vector<std::string>& problems, const std::string& prefix, F&& fn) {
    try {
        fn();
    } catch (const InvalidInput& e) {
        problems.push_back(prefix + ": " + e.what());
    }
}

ExperimentConfig desk_preset() {
    ExperimentConfig c;
    c.name = "desk";
    c.output_dir = "out/desk";
    c.morph.epsilon = 300.0;
    c.morph.n_steps = 500;
    c.morph.solver.a1 = 2.5e5;
    return c;
}

ExperimentConfig full_preset() {
    ExperimentConfig c;
    c.name = "full";
    c.output_dir = "out/full";
    c.fine = GridSpec(256, 256, 5000.0, 5000.0);
    c.coarse = GridSpec(64, 64, 5000.0, 5000.0);
    c.model.dt = 0.25;
    c.truth_steps = 11000;
    c.spinup_steps = 8000;
    c.ensemble_size = 20;
    c.morph.epsilon = 3.3e-5;
    c.morph.n_steps = 10000;
    c.dump_members = false;
    return c;
}

} // namespace

std::string_view to_string(Pipeline p) {
    for (const auto& [name, value] : kPipelines) {
        if (value == p) return name;
    }
    return "unknown";
}

ConfigError::ConfigError(std::vector<std::string> problems) : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

void ExperimentConfig::validate() const {
    std::vector<std::string> p;
    check(p, !name.empty(), "name: must not be empty");
    for (auto [g, label] : {std::pair{&fine, "grid.fine"}, std::pair{&coarse, "grid.coarse"}}) {
        check(p, g->nx >= 4 && g->ny >= 4 && g->nx % 2 == 0 && g->ny % 2 == 0,
              std::string(label) + ": nx and ny must be even and at least 4");
    }
    check(p, fine.lx > 0.0 && fine.ly > 0.0 && std::isfinite(fine.lx) && std::isfinite(fine.ly),
          "grid: lx and ly must be positive");
    check(p, coarse.lx == fine.lx && coarse.ly == fine.ly, "grid: coarse and fine grids must cover the same domain");
    check(p, coarse.nx > 0 && coarse.ny > 0 && coarse.nx <= fine.nx && coarse.ny <= fine.ny &&
                 fine.nx % coarse.nx == 0 && fine.ny % coarse.ny == 0,
          "grid.coarse: must divide grid.fine");
    check_throws(p, "model", [&] { model.validate(); });
    check_throws(p, "vortex", [&] { truth_vortex.validate(); });
    // Two overlapping unit bumps at most double the anomaly.
    check(p, model.h0 + 2.0 * std::min(0.0, truth_vortex.amplitude) > 0.0, "vortex.amplitude: h would not stay positive");
    check(p, 1.0 + 2.0 * std::min(0.0, truth_vortex.theta_amplitude) > 0.0,
          "vortex.theta_amplitude: Theta would not stay positive");
    check(p, perturbation.ox_var >= 0.0 && perturbation.oy_var >= 0.0, "perturbation: variances must be non-negative");
    check(p, std::isfinite(perturbation.ox_mean) && std::isfinite(perturbation.oy_mean), "perturbation: means must be finite");
    check(p, truth_steps >= 0, "truth: horizon must be non-negative");
    check(p, spinup_steps >= 0, "spinup: horizon must be non-negative");
    check(p, ensemble_size >= 2, "ensemble.size: at least 2 members are required");
    check(p, r_scale > 0.0 && std::isfinite(r_scale), "observation.r_scale: must be positive");
    check_throws(p, "morph", [&] { morph.validate(); });
    check(p, morph.solver.a0 > 0.0 && morph.solver.a1 >= 0.0 && morph.solver.prefactor > 0.0,
          "morph: need a0 > 0, a1 >= 0 and prefactor > 0");
    check(p, morph_targets == MorphTargets::Truth || pipeline == Pipeline::MorphOnly,
          "morph.targets: 'self' applies only to the morph-only pipeline");
    check(p, nudging_steps >= 0, "nudging.steps: must be non-negative");
    check(p, nudging_strength >= 0.0 && std::isfinite(nudging_strength), "nudging.strength: must be non-negative");
    check(p, workers >= 0, "workers: must be non-negative");
    check(p, !output_dir.empty(), "output.dir: must not be empty");
    if (!p.empty()) throw ConfigError(std::move(p));
}

std::vector<PresetInfo> preset_list() {
    return {
        {"desk", "64x64 fine / 16x16 coarse, 8 members, 500 tensor morph steps, then EnKF"},
        {"desk-plain", "desk twin experiment with the plain EnKF"},
        {"desk-naive", "desk twin experiment morphing every field as a scalar"},
        {"desk-nudging", "desk ensemble run forward with displacement nudging toward the truth"},
        {"full", "256x256 fine / 64x64 coarse, 20 members, 10000 morph steps (hours of compute)"},
    };
}

ExperimentConfig preset(const std::string& name) {
    if (name == "full") return full_preset();
    ExperimentConfig c = desk_preset();
    if (name == "desk") return c;
    c.name = name;
    c.output_dir = "out/" + name;
    if (name == "desk-plain") {
        c.pipeline = Pipeline::PlainEnKF;
    } else if (name == "desk-naive") {
        c.pipeline = Pipeline::NaiveMorphedEnKF;
    } else if (name == "desk-nudging") {
        c.pipeline = Pipeline::NudgingRun;
    } else {
        throw ConfigError({"preset: unknown preset '" + name + "'"});
    }
    return c;
}

void apply_seed(ExperimentConfig& config, std::uint64_t seed) {
    config.ensemble_seed = seed;
    config.obs_noise_seed = seed + 1;
}

ExperimentConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("not valid JSON: ") + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({"top level: expected an object"});

    std::vector<std::string> problems;
    Section top(&doc, "", problems);

    int version = -1;
    top.read("schema_version", version);
    if (!doc.contains("schema_version")) {
        problems.push_back("schema_version: missing");
    } else if (version != kConfigSchemaVersion && version != -1) {
        problems.push_back("schema_version: unsupported version " + std::to_string(version));
    }

    ExperimentConfig c = desk_preset();
    std::string base;
    top.read("preset", base);
    if (!base.empty()) {
        try {
            c = preset(base);
        } catch (const ConfigError& e) {
            problems.insert(problems.end(), e.problems().begin(), e.problems().end());
        }
    }
    top.read("name", c.name);

    std::string pipeline(to_string(c.pipeline));
    top.read("pipeline", pipeline);
    if (auto it = kPipelines.find(pipeline); it != kPipelines.end()) {
        c.pipeline = it->second;
    } else {
        problems.push_back("pipeline: unknown pipeline '" + pipeline + "'");
    }

    {
        Section g = top.child("grid");
        for (auto [key, spec] : {std::pair{"fine", &c.fine}, std::pair{"coarse", &c.coarse}}) {
            Section s = g.child(key);
            s.read("nx", spec->nx);
            s.read("ny", spec->ny);
            s.finish();
        }
        double lx = c.fine.lx, ly = c.fine.ly;
        g.read("lx", lx);
        g.read("ly", ly);
        c.fine.lx = c.coarse.lx = lx;
        c.fine.ly = c.coarse.ly = ly;
        g.finish();
    }
    {
        Section m = top.child("model");
        m.read("f", c.model.f);
        m.read("kappa", c.model.kappa);
        m.read("h0", c.model.h0);
        m.read("theta0", c.model.theta0);
        m.read("dt", c.model.dt);
        m.read("filter_exponent", c.model.filter_a);
        m.read("filter", c.model.filter);
        m.finish();
    }
    {
        Section v = top.child("vortex");
        v.read("ox", c.truth_vortex.ox);
        v.read("oy", c.truth_vortex.oy);
        v.read("amplitude", c.truth_vortex.amplitude);
        v.read("radius", c.truth_vortex.radius);
        v.read("separation", c.truth_vortex.separation);
        v.read("theta_amplitude", c.truth_vortex.theta_amplitude);
        v.finish();
    }
    {
        Section p = top.child("perturbation");
        p.read("ox_mean", c.perturbation.ox_mean);
        p.read("oy_mean", c.perturbation.oy_mean);
        p.read("ox_var", c.perturbation.ox_var);
        p.read("oy_var", c.perturbation.oy_var);
        p.finish();
    }
    read_horizon(top.child("truth"), "truth", c.model.dt, c.truth_steps);
    read_horizon(top.child("spinup"), "spinup", c.model.dt, c.spinup_steps);
    {
        Section e = top.child("ensemble");
        e.read("size", c.ensemble_size);
        e.read("seed", c.ensemble_seed);
        e.finish();
    }
    {
        Section o = top.child("observation");
        o.read("noise_seed", c.obs_noise_seed);
        o.read("r_scale", c.r_scale);
        o.finish();
    }
    {
        Section m = top.child("morph");
        m.read("epsilon", c.morph.epsilon);
        m.read("steps", c.morph.n_steps);
        m.read("filter_exponent", c.morph.filter_a);
        m.read("ab_order", c.morph.ab_order);
        m.read("a0", c.morph.solver.a0);
        m.read("a1", c.morph.solver.a1);
        m.read("prefactor", c.morph.solver.prefactor);
        m.read_optional("early_stop_patience", c.morph.early_stop_patience);
        std::string targets = c.morph_targets == MorphTargets::Self ? "self" : "truth";
        m.read("targets", targets);
        if (targets == "truth") {
            c.morph_targets = MorphTargets::Truth;
        } else if (targets == "self") {
            c.morph_targets = MorphTargets::Self;
        } else {
            m.problem("targets", "expected 'truth' or 'self'");
        }
        m.finish();
    }
    {
        Section n = top.child("nudging");
        n.read("steps", c.nudging_steps);
        n.read("strength", c.nudging_strength);
        n.finish();
    }
    top.read("workers", c.workers);
    {
        Section o = top.child("output");
        o.read("dir", c.output_dir);
        o.read("dump_members", c.dump_members);
        o.finish();
    }
    top.finish();

    try {
        c.validate();
    } catch (const ConfigError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string config_to_json(const ExperimentConfig& c, bool with_output_dir) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["name"] = c.name;
    j["pipeline"] = std::string(to_string(c.pipeline));
    j["grid"] = {{"fine", {{"nx", c.fine.nx}, {"ny", c.fine.ny}}},
                 {"coarse", {{"nx", c.coarse.nx}, {"ny", c.coarse.ny}}},
                 {"lx", c.fine.lx},
                 {"ly", c.fine.ly}};
    j["model"] = {{"f", c.model.f},           {"kappa", c.model.kappa}, {"h0", c.model.h0},
                  {"theta0", c.model.theta0}, {"dt", c.model.dt},       {"filter_exponent", c.model.filter_a},
                  {"filter", c.model.filter}};
    j["vortex"] = {{"ox", c.truth_vortex.ox},
                   {"oy", c.truth_vortex.oy},
                   {"amplitude", c.truth_vortex.amplitude},
                   {"radius", c.truth_vortex.radius},
                   {"separation", c.truth_vortex.separation},
                   {"theta_amplitude", c.truth_vortex.theta_amplitude}};
    j["perturbation"] = {{"ox_mean", c.perturbation.ox_mean},
                         {"oy_mean", c.perturbation.oy_mean},
                         {"ox_var", c.perturbation.ox_var},
                         {"oy_var", c.perturbation.oy_var}};
    j["truth"] = {{"steps", c.truth_steps}};
    j["spinup"] = {{"steps", c.spinup_steps}};
    j["ensemble"] = {{"size", c.ensemble_size}, {"seed", c.ensemble_seed}};
    j["observation"] = {{"noise_seed", c.obs_noise_seed}, {"r_scale", c.r_scale}};
    j["morph"] = {{"epsilon", c.morph.epsilon},
                  {"steps", c.morph.n_steps},
                  {"filter_exponent", c.morph.filter_a},
                  {"ab_order", c.morph.ab_order},
                  {"a0", c.morph.solver.a0},
                  {"a1", c.morph.solver.a1},
                  {"prefactor", c.morph.solver.prefactor},
                  {"early_stop_patience", c.morph.early_stop_patience ? json(*c.morph.early_stop_patience) : json(nullptr)},
                  {"targets", c.morph_targets == MorphTargets::Self ? "self" : "truth"}};
    j["nudging"] = {{"steps", c.nudging_steps}, {"strength", c.nudging_strength}};
    j["workers"] = c.workers;
    j["output"] = {{"dump_members", c.dump_members}};
    if (with_output_dir) j["output"]["dir"] = c.output_dir;
    return j.dump(2) + "\n";
}

} // namespace geomorph
