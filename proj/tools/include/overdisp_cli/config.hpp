#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "overdisp/mc.hpp"
#include "overdisp/model.hpp"

namespace overdisp::cli {

/// Malformed, unknown or inconsistent configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

/// Parsed run configuration. Keys (all optional unless a command needs them):
///
///   model.subordinator.kind   "gamma"
///   model.subordinator.r      shape, default 1
///   model.subordinator.mu     rate, default 1
///   model.service.kind        "det" | "exp" | "powerlaw"
///   model.service.D           det only
///   model.service.nu          exp only
///   model.service.z1_plus     exp only, alternative to nu: int_0^1 e^{-nu s} ds
///   model.service.kappa       powerlaw only
///   model.u                   rarity level
///   scaling.f                 decimal or "p/q"
///   scaling.n                 positive integer
///   mc.samples, mc.grid_cells, mc.seed, mc.method ("plain" | "is"), mc.workers
///   output.format             "csv" | "json"
///   output.path               file to write instead of stdout
///   output.precision          digits, default 3
struct RunConfig {
    double r = 1.0;
    double mu = 1.0;
    std::optional<std::string> service_kind;
    std::optional<double> D;
    std::optional<double> nu;
    std::optional<double> z1_plus;
    std::optional<double> kappa;
    std::optional<double> u;
    std::optional<Exponent> f;
    std::optional<std::int64_t> n;

    MCConfig mc;
    OutputFormat format = OutputFormat::Csv;
    std::optional<std::string> path;
    int precision = 3;
};

/// Parses the flat `key = value` text format. '#' starts a comment; string
/// values may be double-quoted.
RunConfig parse_config_text(const std::string& text);

/// A JSON document produced by this tool (its "config" member) or a flat
/// object of dotted keys.
RunConfig parse_config_json(const nlohmann::json& doc);

/// Reads a file in either format; JSON is recognized by a leading '{'.
RunConfig load_config_file(const std::string& path);

/// Effective configuration as a flat JSON object with dotted keys, suitable
/// for re-ingestion.
nlohmann::json to_json(const RunConfig& cfg);

/// Builds and validates the model. Needs model.service.kind and model.u;
/// scaling defaults to n = 1, f = 1 unless `need_scaling`.
Model build_model(const RunConfig& cfg, bool need_scaling);

std::string service_label(const RunConfig& cfg);

}  // namespace overdisp::cli
