#include "nomalink/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace nomalink {

namespace {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void reject_unknown(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (item.key() == a) ok = true;
        if (!ok) throw ConfigError(std::string(where) + ": unknown key \"" + item.key() + "\"");
    }
}

template <typename T>
T get_as(const json& j, const char* where, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const char* where, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return get_as<T>(j, where, key);
}

SystemDims parse_dims(const json& j) {
    if (!j.is_object()) throw ConfigError("dims: expected an object {\"K\":..,\"M\":..}");
    reject_unknown(j, "dims", {"K", "M"});
    SystemDims dims;
    dims.K = get_as<int>(j, "dims", "K");
    dims.M = get_as<int>(j, "dims", "M");
    return dims;
}

DegreeDistribution parse_lambda(const json& j) {
    if (!j.is_object() || j.empty())
        throw ConfigError("code.lambda: expected a non-empty object of degree -> fraction");
    std::map<int, double> lambda;
    for (const auto& item : j.items()) {
        int degree = 0;
        try {
            std::size_t used = 0;
            degree = std::stoi(item.key(), &used);
            if (used != item.key().size()) throw std::invalid_argument(item.key());
        } catch (const std::exception&) {
            throw ConfigError("code.lambda: degree key \"" + item.key() + "\" is not an integer");
        }
        if (!item.value().is_number())
            throw ConfigError("code.lambda[" + item.key() + "]: expected a number");
        lambda[degree] = item.value().get<double>();
    }
    try {
        return DegreeDistribution(lambda);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("code.lambda: ") + e.what());
    }
}

// Accepts a preset name or an inline {"q","alpha","lambda",...} object (the
// shape write_code_json emits).
void parse_code_spec(const json& j, SimConfig& config) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (!has_preset(name)) throw ConfigError("code: unknown preset \"" + name + "\"");
        const CodePreset& preset = find_preset(name);
        config.code = preset.params;
        config.code_name = name;
        if (preset.design_K > 0) config.dims = {preset.design_K, preset.design_M};
        return;
    }
    if (!j.is_object()) throw ConfigError("code: expected a preset name or an object");
    reject_unknown(j, "code",
                   {"q", "alpha", "lambda", "rate", "name", "design_K", "design_M", "design_sigma_n"});
    const int q = get_as<int>(j, "code", "q");
    const int alpha = get_as<int>(j, "code", "alpha");
    if (!j.contains("lambda")) throw ConfigError("code.lambda: missing");
    DegreeDistribution lambda = parse_lambda(j.at("lambda"));
    try {
        config.code = make_code_params(q, alpha, std::move(lambda));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("code: ") + e.what());
    }
    config.code_name = get_or<std::string>(j, "code", "name", "");
    if (j.contains("rate")) {
        const double claimed = get_as<double>(j, "code", "rate");
        if (std::abs(claimed - config.code.rate) > 1e-6)
            throw ConfigError("code.rate: stated " + fmt(claimed) + " but (q, alpha, lambda) give " +
                              fmt(config.code.rate));
    }
    if (j.contains("design_K") || j.contains("design_M")) {
        SystemDims d;
        d.K = get_or<int>(j, "code", "design_K", 0);
        d.M = get_or<int>(j, "code", "design_M", 0);
        if (d.K > 0 && d.M > 0) config.dims = d;
    }
    (void)get_or<double>(j, "code", "design_sigma_n", 0.0);
}

int parse_fading(const std::string& text) {
    if (text == "fast") return 1;
    const std::string prefix = "block:";
    if (text.rfind(prefix, 0) == 0) {
        try {
            std::size_t used = 0;
            const int L = std::stoi(text.substr(prefix.size()), &used);
            if (used == text.size() - prefix.size() && L >= 1) return L;
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("fading: expected \"fast\" or \"block:<L>\", got \"" + text + "\"");
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<double> parse_ebn0_spec(const std::string& spec) {
    const auto bad = [&]() -> ConfigError {
        return ConfigError("ebn0 spec: expected \"<dB>\" or \"start:stop:step\", got \"" + spec + "\"");
    };
    std::vector<double> parts;
    std::size_t begin = 0;
    // split on ':' but keep leading '-' of each field intact
    while (true) {
        const std::size_t colon = spec.find(':', begin);
        const std::string tok = spec.substr(begin, colon == std::string::npos ? colon : colon - begin);
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw bad();
        } catch (const std::exception&) {
            throw bad();
        }
        if (colon == std::string::npos) break;
        begin = colon + 1;
    }
    if (parts.size() == 1) return {parts[0]};
    if (parts.size() != 3) throw bad();
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0) || stop < start - 1e-12) throw bad();
    std::vector<double> grid;
    for (double x = start; x <= stop + 1e-9; x += step) grid.push_back(x);
    return grid;
}

SimConfig parse_sim_config(const std::string& json_text) {
    const json j = parse_text(json_text);
    if (!j.is_object()) throw ConfigError("top level: expected an object");
    reject_unknown(j, "config",
                   {"dims", "code", "info_len", "tau_max", "ebn0_grid", "fading", "csi", "stop", "seed"});
    SimConfig config;
    if (!j.contains("code")) throw ConfigError("code: missing");
    parse_code_spec(j.at("code"), config);

    if (j.contains("dims")) {
        const SystemDims given = parse_dims(j.at("dims"));
        if (config.dims.M > 0 && given.M != config.dims.M)
            throw ConfigError("dims.M: preset was designed for M = " + std::to_string(config.dims.M) +
                              "; loading is varied through K only");
        config.dims = given;  // K override (dynamic load) is allowed
    }
    if (config.dims.K <= 0 || config.dims.M <= 0)
        throw ConfigError("dims: required for codes without design dimensions");

    config.info_len = get_or<int>(j, "config", "info_len", 4096);
    config.tau_max = get_or<int>(j, "config", "tau_max", 250);

    if (!j.contains("ebn0_grid")) throw ConfigError("ebn0_grid: missing");
    const json& grid = j.at("ebn0_grid");
    if (grid.is_string()) {
        config.ebn0_grid = parse_ebn0_spec(grid.get<std::string>());
    } else if (grid.is_array() && !grid.empty()) {
        for (const auto& x : grid) {
            if (!x.is_number()) throw ConfigError("ebn0_grid: expected numbers");
            config.ebn0_grid.push_back(x.get<double>());
        }
    } else {
        throw ConfigError("ebn0_grid: expected an array of dB values or \"start:stop:step\"");
    }

    config.coherence_len = parse_fading(get_or<std::string>(j, "config", "fading", "fast"));
    if (j.contains("csi")) {
        const json& c = j.at("csi");
        if (!c.is_object()) throw ConfigError("csi: expected an object");
        reject_unknown(c, "csi", {"error_variance"});
        config.csi.error_variance = get_or<double>(c, "csi", "error_variance", 0.0);
    }
    if (j.contains("stop")) {
        const json& s = j.at("stop");
        if (!s.is_object()) throw ConfigError("stop: expected an object");
        reject_unknown(s, "stop", {"max_frames", "max_bit_errors"});
        config.max_frames = get_or<long>(s, "stop", "max_frames", config.max_frames);
        config.max_bit_errors = get_or<long long>(s, "stop", "max_bit_errors", config.max_bit_errors);
    }
    config.seed = get_or<std::uint64_t>(j, "config", "seed", 1);

    try {
        validate_sim_config(config);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return config;
}

SimConfig load_sim_config(const std::string& path) { return parse_sim_config(slurp(path)); }

OptimizerConfig parse_optimizer_config(const std::string& json_text) {
    const json j = parse_text(json_text);
    if (!j.is_object()) throw ConfigError("top level: expected an object");
    reject_unknown(j, "config",
                   {"K", "M", "sigma_n", "degree_set", "alpha_range", "q_max", "population",
                    "generations", "seed"});
    OptimizerConfig config;
    config.dims.K = get_or<int>(j, "config", "K", config.dims.K);
    config.dims.M = get_or<int>(j, "config", "M", config.dims.M);
    config.sigma_n = get_or<double>(j, "config", "sigma_n", config.sigma_n);
    if (j.contains("degree_set")) {
        const json& d = j.at("degree_set");
        if (!d.is_array() || d.empty()) throw ConfigError("degree_set: expected a non-empty array");
        config.degree_set.clear();
        for (const auto& x : d) {
            if (!x.is_number_integer()) throw ConfigError("degree_set: expected integers");
            config.degree_set.push_back(x.get<int>());
        }
    }
    if (j.contains("alpha_range")) {
        const json& a = j.at("alpha_range");
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
            throw ConfigError("alpha_range: expected [min, max]");
        config.alpha_min = a[0].get<int>();
        config.alpha_max = a[1].get<int>();
    }
    config.q_max = get_or<int>(j, "config", "q_max", config.q_max);
    config.population = get_or<int>(j, "config", "population", config.population);
    config.generations = get_or<int>(j, "config", "generations", config.generations);
    config.seed = get_or<std::uint64_t>(j, "config", "seed", config.seed);
    return config;
}

OptimizerConfig load_optimizer_config(const std::string& path) {
    return parse_optimizer_config(slurp(path));
}

void write_ber_csv(std::ostream& os, const BerResult& result) {
    os << "ebn0_db,bits,errors,ber,ci_low,ci_high,frames,mean_iterations\n";
    for (const PointResult& p : result.points) {
        os << fmt(p.ebn0_db) << ',' << p.bits << ',' << p.errors << ',' << fmt(p.ber) << ','
           << fmt(p.ci_low) << ',' << fmt(p.ci_high) << ',' << p.frames << ','
           << fmt(p.mean_iterations) << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const ExitTrajectory& trajectory) {
    os << "iteration,v,v_e,I_a,I_e\n";
    for (const ExitState& s : trajectory.states) {
        os << s.iteration << ',' << fmt(s.v) << ',' << fmt(s.v_e) << ',' << fmt(s.I_a) << ','
           << fmt(s.I_e) << '\n';
    }
}

void write_curve_csv(std::ostream& os, const ExitCurve& curve) {
    os << "index,I_a,I_e\n";
    for (std::size_t i = 0; i < curve.ia.size(); ++i)
        os << i << ',' << fmt(curve.ia[i]) << ',' << fmt(curve.ie[i]) << '\n';
}

void write_optimizer_log_csv(std::ostream& os, const OptimizerResult& result) {
    os << "q,alpha,best_rate,best_gap,evaluations,pruned\n";
    for (const PairLog& l : result.log) {
        os << l.q << ',' << l.alpha << ',' << fmt(l.best_rate) << ',' << fmt(l.best_gap) << ','
           << l.evaluations << ',' << (l.pruned ? 1 : 0) << '\n';
    }
}

void write_code_json(std::ostream& os, const std::string& name, const CodeParams& params,
                     const SystemDims& dims, double sigma_n) {
    json lambda = json::object();
    for (const DegreeTerm& t : params.lambda.terms())
        lambda[std::to_string(t.degree)] = t.fraction;
    json j{{"name", name},
           {"q", params.q},
           {"alpha", params.alpha},
           {"lambda", lambda},
           {"rate", params.rate},
           {"design_K", dims.K},
           {"design_M", dims.M},
           {"design_sigma_n", sigma_n}};
    os << j.dump(2) << '\n';
}

}  // namespace nomalink
