#include "overdisp_cli/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "overdisp/errors.hpp"

namespace overdisp::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
    return v;
}

std::int64_t to_int(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    if (!value.empty() && value[0] == '-') throw ConfigError(key + ": must be non-negative");
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw ConfigError(key + ": expected an unsigned integer, got '" + value + "'");
    }
    return v;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"model.subordinator.kind",
         [](RunConfig&, const std::string& k, const std::string& v) {
             if (v != "gamma") {
                 throw ConfigError(k + ": only \"gamma\" can be configured from a file, got '" +
                                   v + "'");
             }
         }},
        {"model.subordinator.r", [](RunConfig& c, auto& k, auto& v) { c.r = to_double(k, v); }},
        {"model.subordinator.mu", [](RunConfig& c, auto& k, auto& v) { c.mu = to_double(k, v); }},
        {"model.service.kind",
         [](RunConfig& c, auto& k, auto& v) {
             if (v != "det" && v != "exp" && v != "powerlaw") {
                 throw ConfigError(k + ": expected det, exp or powerlaw, got '" + v + "'");
             }
             c.service_kind = v;
         }},
        {"model.service.D", [](RunConfig& c, auto& k, auto& v) { c.D = to_double(k, v); }},
        {"model.service.nu", [](RunConfig& c, auto& k, auto& v) { c.nu = to_double(k, v); }},
        {"model.service.z1_plus",
         [](RunConfig& c, auto& k, auto& v) { c.z1_plus = to_double(k, v); }},
        {"model.service.kappa", [](RunConfig& c, auto& k, auto& v) { c.kappa = to_double(k, v); }},
        {"model.u", [](RunConfig& c, auto& k, auto& v) { c.u = to_double(k, v); }},
        {"scaling.f",
         [](RunConfig& c, auto& k, auto& v) {
             try {
                 c.f = Exponent::parse(v);
             } catch (const std::exception&) {
                 throw ConfigError(k + ": expected a decimal or p/q, got '" + v + "'");
             }
         }},
        {"scaling.n", [](RunConfig& c, auto& k, auto& v) { c.n = to_int(k, v); }},
        {"mc.samples", [](RunConfig& c, auto& k, auto& v) { c.mc.samples = to_int(k, v); }},
        {"mc.grid_cells",
         [](RunConfig& c, auto& k, auto& v) {
             const auto m = to_int(k, v);
             if (m > (1 << 24)) throw ConfigError(k + ": too large");
             c.mc.grid_cells = static_cast<int>(m);
         }},
        {"mc.seed", [](RunConfig& c, auto& k, auto& v) { c.mc.seed = to_uint(k, v); }},
        {"mc.method",
         [](RunConfig& c, auto& k, auto& v) {
             if (v == "plain") {
                 c.mc.method = McMethod::Plain;
             } else if (v == "is") {
                 c.mc.method = McMethod::ImportanceSampled;
             } else {
                 throw ConfigError(k + ": expected plain or is, got '" + v + "'");
             }
         }},
        {"mc.workers",
         [](RunConfig& c, auto& k, auto& v) {
             const auto w = to_int(k, v);
             if (w < 1 || w > 4096) throw ConfigError(k + ": expected 1..4096");
             c.mc.workers = static_cast<int>(w);
         }},
        {"output.format",
         [](RunConfig& c, auto& k, auto& v) {
             if (v == "csv") {
                 c.format = OutputFormat::Csv;
             } else if (v == "json") {
                 c.format = OutputFormat::Json;
             } else {
                 throw ConfigError(k + ": expected csv or json, got '" + v + "'");
             }
         }},
        {"output.path", [](RunConfig& c, auto&, auto& v) { c.path = v; }},
        {"output.precision",
         [](RunConfig& c, auto& k, auto& v) {
             const auto p = to_int(k, v);
             if (p < 0 || p > 17) throw ConfigError(k + ": expected 0..17");
             c.precision = static_cast<int>(p);
         }},
    };
    return table;
}

void check_consistency(const RunConfig& c) {
    const std::string kind = c.service_kind.value_or("");
    auto only = [&](bool present, const char* key, const char* for_kind) {
        if (present && kind != for_kind) {
            throw ConfigError(std::string(key) + " applies to model.service.kind = \"" + for_kind +
                              "\" only");
        }
    };
    only(c.D.has_value(), "model.service.D", "det");
    only(c.nu.has_value(), "model.service.nu", "exp");
    only(c.z1_plus.has_value(), "model.service.z1_plus", "exp");
    only(c.kappa.has_value(), "model.service.kappa", "powerlaw");
    if (c.nu && c.z1_plus) {
        throw ConfigError("give either model.service.nu or model.service.z1_plus, not both");
    }
}

RunConfig apply(const std::vector<std::pair<std::string, std::string>>& entries) {
    RunConfig cfg;
    std::map<std::string, bool> seen;
    for (const auto& [key, value] : entries) {
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("unknown configuration key '" + key + "'");
        if (seen[key]) throw ConfigError("duplicate configuration key '" + key + "'");
        seen[key] = true;
        it->second(cfg, key, value);
    }
    check_consistency(cfg);
    return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments outside quotes.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        } else if (value.find('"') != std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": unbalanced quotes");
        }
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        entries.emplace_back(key, value);
    }
    return apply(entries);
}

RunConfig parse_config_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("JSON configuration must be an object");
    const nlohmann::json& flat = doc.contains("config") ? doc.at("config") : doc;
    if (!flat.is_object()) throw ConfigError("\"config\" must be an object");
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [key, value] : flat.items()) {
        if (value.is_string()) {
            entries.emplace_back(key, value.get<std::string>());
        } else if (value.is_number()) {
            entries.emplace_back(key, value.dump());
        } else {
            throw ConfigError(key + ": expected a string or number");
        }
    }
    return apply(entries);
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("invalid JSON in '" + path + "': " + e.what());
        }
        return parse_config_json(doc);
    }
    return parse_config_text(text);
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json out = nlohmann::json::object();
    out["model.subordinator.kind"] = "gamma";
    out["model.subordinator.r"] = c.r;
    out["model.subordinator.mu"] = c.mu;
    if (c.service_kind) out["model.service.kind"] = *c.service_kind;
    if (c.D) out["model.service.D"] = *c.D;
    if (c.nu) out["model.service.nu"] = *c.nu;
    if (c.z1_plus) out["model.service.z1_plus"] = *c.z1_plus;
    if (c.kappa) out["model.service.kappa"] = *c.kappa;
    if (c.u) out["model.u"] = *c.u;
    if (c.f) out["scaling.f"] = c.f->to_string();
    if (c.n) out["scaling.n"] = *c.n;
    out["mc.samples"] = c.mc.samples;
    out["mc.grid_cells"] = c.mc.grid_cells;
    out["mc.seed"] = c.mc.seed;
    out["mc.method"] = to_string(c.mc.method);
    out["mc.workers"] = c.mc.workers;
    out["output.format"] = c.format == OutputFormat::Json ? "json" : "csv";
    if (c.path) out["output.path"] = *c.path;
    out["output.precision"] = c.precision;
    return out;
}

Model build_model(const RunConfig& c, bool need_scaling) {
    if (!c.service_kind) throw ConfigError("missing model.service.kind");
    if (!c.u) throw ConfigError("missing model.u");
    if (need_scaling && (!c.f || !c.n)) throw ConfigError("missing scaling.f or scaling.n");

    ModelSpec spec;
    spec.subordinator = Subordinator::gamma(c.r, c.mu);
    const std::string& kind = *c.service_kind;
    if (kind == "det") {
        if (!c.D) throw ConfigError("missing model.service.D");
        spec.service = ServiceDistribution::deterministic(*c.D);
    } else if (kind == "exp") {
        if (c.nu) {
            spec.service = ServiceDistribution::exponential(*c.nu);
        } else if (c.z1_plus) {
            try {
                spec.service =
                    ServiceDistribution::exponential(exponential_rate_for_z1(*c.z1_plus));
            } catch (const Error& e) {
                throw ConfigError(std::string("model.service.z1_plus: ") + e.what());
            }
        } else {
            throw ConfigError("missing model.service.nu (or model.service.z1_plus)");
        }
    } else {
        if (!c.kappa) throw ConfigError("missing model.service.kappa");
        spec.service = ServiceDistribution::power_law(*c.kappa);
    }
    spec.u = *c.u;
    spec.scaling.n = c.n.value_or(1);
    spec.scaling.f = c.f.value_or(Exponent::ratio(1, 1));
    try {
        return validate(std::move(spec));
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid model: ") + e.what());
    }
}

std::string service_label(const RunConfig& c) {
    return c.service_kind.value_or("");
}

}  // namespace overdisp::cli
