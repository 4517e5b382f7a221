#include "overdisp_cli/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "overdisp/asymptotics.hpp"
#include "overdisp/errors.hpp"
#include "overdisp/mc.hpp"
#include "overdisp_cli/format.hpp"

namespace overdisp::cli {

namespace {

using nlohmann::json;

// Numbers go through the same round-half-even text in both formats; JSON
// holds the number that text denotes.
struct Formatter {
    int precision = 3;

    std::string fixed(double v) const { return format_fixed(v, precision); }
    std::string sci(double v) const { return format_sci(v, precision); }
    static json number(const std::string& text) {
        if (text == "nan" || text == "inf" || text == "-inf") return nullptr;
        return std::stod(text);
    }
    json jfixed(double v) const { return number(fixed(v)); }
    json jsci(double v) const { return number(sci(v)); }
};

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += cells[i];
    }
    out.push_back('\n');
    return out;
}

struct AllConstants {
    double c = 0.0;
    FastConstants fast;
    BalancedConstants balanced;
    SlowConstants slow;
};

AllConstants all_constants(const Model& model) {
    return {model.c(), fast_constants(model), balanced_constants(model), slow_constants(model)};
}

const std::vector<std::string> kConstantColumns = {
    "theta_star", "chi_plus",  "vbar2",     "sigma_plus_sq", "theta_circ",     "chi_circ",
    "sigma_circ_sq", "tau_star", "chi_minus", "wbar1",         "sigma_minus_sq"};

std::vector<double> table_values(const AllConstants& k) {
    return {k.fast.theta_star,       k.fast.chi_plus,   k.fast.vbar2,
            k.fast.sigma_plus_sq,    k.balanced.theta_circ, k.balanced.chi_circ,
            k.balanced.sigma_circ_sq, k.slow.tau_star,    k.slow.chi_minus,
            k.slow.wbar1,            k.slow.sigma_minus_sq};
}

json constants_json(const AllConstants& k, const Formatter& fmt) {
    return {{"c", fmt.jfixed(k.c)},
            {"fast",
             {{"theta_star", fmt.jfixed(k.fast.theta_star)},
              {"v1", fmt.jfixed(k.fast.v1)},
              {"vbar2", fmt.jfixed(k.fast.vbar2)},
              {"chi_plus", fmt.jfixed(k.fast.chi_plus)},
              {"sigma_plus_sq", fmt.jfixed(k.fast.sigma_plus_sq)}}},
            {"balanced",
             {{"theta_circ", fmt.jfixed(k.balanced.theta_circ)},
              {"chi_circ", fmt.jfixed(k.balanced.chi_circ)},
              {"sigma_circ_sq", fmt.jfixed(k.balanced.sigma_circ_sq)}}},
            {"slow",
             {{"tau_star", fmt.jfixed(k.slow.tau_star)},
              {"w2", fmt.jfixed(k.slow.w2)},
              {"wbar1", fmt.jfixed(k.slow.wbar1)},
              {"chi_minus", fmt.jfixed(k.slow.chi_minus)},
              {"sigma_minus_sq", fmt.jfixed(k.slow.sigma_minus_sq)}}}};
}

json regime_constants_json(const RegimeConstants& constants, const Formatter& fmt) {
    if (const auto* f = std::get_if<FastConstants>(&constants)) {
        return {{"theta_star", fmt.jfixed(f->theta_star)}, {"v1", fmt.jfixed(f->v1)},
                {"vbar2", fmt.jfixed(f->vbar2)},           {"chi_plus", fmt.jfixed(f->chi_plus)},
                {"sigma_plus_sq", fmt.jfixed(f->sigma_plus_sq)}};
    }
    if (const auto* b = std::get_if<BalancedConstants>(&constants)) {
        return {{"theta_circ", fmt.jfixed(b->theta_circ)},
                {"chi_circ", fmt.jfixed(b->chi_circ)},
                {"sigma_circ_sq", fmt.jfixed(b->sigma_circ_sq)}};
    }
    const auto& s = std::get<SlowConstants>(constants);
    return {{"tau_star", fmt.jfixed(s.tau_star)},   {"w2", fmt.jfixed(s.w2)},
            {"wbar1", fmt.jfixed(s.wbar1)},         {"chi_minus", fmt.jfixed(s.chi_minus)},
            {"sigma_minus_sq", fmt.jfixed(s.sigma_minus_sq)}};
}

std::string envelope(const char* command, const RunConfig& cfg, json result) {
    json doc = {{"command", command}, {"config", to_json(cfg)}, {"result", std::move(result)}};
    return doc.dump(2) + "\n";
}

// Fixed parameter sets of the four reference tables.
struct TableSetup {
    ServiceDistribution det = ServiceDistribution::deterministic(0.5);
    ServiceDistribution exp = ServiceDistribution::exponential(2.0);
    ServiceDistribution powerlaw = ServiceDistribution::power_law(2.0);
    std::array<std::int64_t, 5> n{};
};

const std::array<const char*, 5> kTableExponents = {"2/5", "3/5", "1", "5/3", "5/2"};
const std::array<const char*, 3> kTableServices = {"det", "exp", "powerlaw"};

TableSetup table_setup(int table) {
    TableSetup s;
    if (table == 1 || table == 2) {
        // Mean service time 1/2 for the deterministic row; nu = kappa = 2.
        s.n = {3000, 200, 50, 30, 30};
    } else {
        // z_1^+ = 1/2 for every row: nu is the positive root of 1 - e^{-nu} = nu / 2.
        s.exp = ServiceDistribution::exponential(exponential_rate_for_z1(0.5));
        s.powerlaw = ServiceDistribution::power_law(1.0);
        s.n = {8000, 400, 75, 45, 45};
    }
    return s;
}

Model table_model(const ServiceDistribution& service, std::int64_t n, const char* f) {
    ModelSpec spec;
    spec.subordinator = Subordinator::gamma(1.0, 1.0);
    spec.service = service;
    spec.u = 1.0;
    spec.scaling = {n, Exponent::parse(f)};
    return validate(std::move(spec));
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (!cfg.path) {
        out << text;
        return;
    }
    std::ofstream file(*cfg.path, std::ios::binary);
    if (!file) throw ConfigError("cannot write output file '" + *cfg.path + "'");
    file << text;
}

}  // namespace

std::string cmd_constants(const RunConfig& cfg) {
    const Model model = build_model(cfg, false);
    const AllConstants k = all_constants(model);
    const Formatter fmt{cfg.precision};
    if (cfg.format == OutputFormat::Json) {
        return envelope("constants", cfg, constants_json(k, fmt));
    }
    std::vector<std::string> header = {"service"};
    header.insert(header.end(), kConstantColumns.begin(), kConstantColumns.end());
    header.insert(header.end(), {"c", "v1", "w2"});
    std::vector<std::string> row = {service_label(cfg)};
    for (double v : table_values(k)) row.push_back(fmt.fixed(v));
    row.insert(row.end(), {fmt.fixed(k.c), fmt.fixed(k.fast.v1), fmt.fixed(k.slow.w2)});
    return csv_line(header) + csv_line(row);
}

std::string cmd_approximate(const RunConfig& cfg) {
    const Model model = build_model(cfg, true);
    const AsymptoticResult r = approximate_xi(model);
    const Formatter fmt{cfg.precision};
    const std::string f = model.scaling().f.to_string();
    const std::string n = std::to_string(model.scaling().n);
    if (cfg.format == OutputFormat::Json) {
        json terms = json::array();
        for (const auto& t : r.exponent_terms) {
            terms.push_back({{"psi_power", t.psi_power},
                             {"coefficient", fmt.jfixed(t.coefficient)},
                             {"scale", fmt.jsci(t.scale)},
                             {"value", fmt.jfixed(t.value)}});
        }
        json result = {{"f", f},
                       {"n", model.scaling().n},
                       {"regime",
                        {{"kind", r.regime.name()},
                         {"order", r.regime.order},
                         {"on_boundary", r.regime.on_boundary}}},
                       {"constants", regime_constants_json(r.constants, fmt)},
                       {"exponent_terms", terms},
                       {"prefactor", fmt.jsci(r.prefactor)},
                       {"exponent", fmt.jfixed(r.exponent)},
                       {"xi", fmt.jsci(r.xi)},
                       {"log_xi", fmt.jfixed(r.log_xi)},
                       {"log_decay_rate", fmt.jfixed(r.log_decay_rate)}};
        return envelope("approximate", cfg, std::move(result));
    }
    return csv_line({"f", "n", "regime", "m", "prefactor", "exponent", "xi", "log_xi"}) +
           csv_line({f, n, r.regime.name(), std::to_string(r.regime.order), fmt.sci(r.prefactor),
                     fmt.fixed(r.exponent), fmt.sci(r.xi), fmt.fixed(r.log_xi)});
}

std::string cmd_simulate(const RunConfig& cfg) {
    const Model model = build_model(cfg, true);
    const MCEstimate est = estimate(model, cfg.mc);
    std::optional<AsymptoticResult> approx;
    try {
        approx = approximate_xi(model);
    } catch (const UnsupportedOrder&) {
        // The estimate stands on its own outside the supported orders.
    }
    std::optional<double> ratio;
    if (approx) ratio = est.estimate * std::exp(-approx->log_xi);

    const Formatter fmt{cfg.precision};
    const std::string f = model.scaling().f.to_string();
    if (cfg.format == OutputFormat::Json) {
        json result = {{"f", f},
                       {"n", model.scaling().n},
                       {"method", to_string(est.method)},
                       {"samples", est.samples_used},
                       {"grid_cells", cfg.mc.grid_cells},
                       {"seed", cfg.mc.seed},
                       {"estimate", fmt.jsci(est.estimate)},
                       {"std_error", fmt.jsci(est.std_error)},
                       {"ci95", {fmt.jsci(est.ci95.first), fmt.jsci(est.ci95.second)}},
                       {"xi_approx", approx ? fmt.jsci(approx->xi) : json(nullptr)},
                       {"ratio", ratio ? fmt.jfixed(*ratio) : json(nullptr)}};
        return envelope("simulate", cfg, std::move(result));
    }
    return csv_line({"f", "n", "method", "samples", "grid_cells", "seed", "estimate", "std_error",
                     "ci_low", "ci_high", "xi_approx", "ratio"}) +
           csv_line({f, std::to_string(model.scaling().n), to_string(est.method),
                     std::to_string(est.samples_used), std::to_string(cfg.mc.grid_cells),
                     std::to_string(cfg.mc.seed), fmt.sci(est.estimate), fmt.sci(est.std_error),
                     fmt.sci(est.ci95.first), fmt.sci(est.ci95.second),
                     approx ? fmt.sci(approx->xi) : "", ratio ? fmt.fixed(*ratio) : ""});
}

std::string cmd_table(int table, OutputFormat format, int precision) {
    if (table < 1 || table > 4) throw ConfigError("--table must be 1, 2, 3 or 4");
    const TableSetup setup = table_setup(table);
    const std::array<const ServiceDistribution*, 3> services = {&setup.det, &setup.exp,
                                                                &setup.powerlaw};
    const Formatter fmt{precision};
    json rows = json::array();
    std::string csv;

    if (table == 1 || table == 3) {
        std::vector<std::string> header = {"service"};
        header.insert(header.end(), kConstantColumns.begin(), kConstantColumns.end());
        csv += csv_line(header);
        for (std::size_t i = 0; i < services.size(); ++i) {
            const AllConstants k = all_constants(table_model(*services[i], 1, "1"));
            std::vector<std::string> row = {kTableServices[i]};
            json jrow = {{"service", kTableServices[i]}};
            const auto values = table_values(k);
            for (std::size_t j = 0; j < values.size(); ++j) {
                row.push_back(fmt.fixed(values[j]));
                jrow[kConstantColumns[j]] = fmt.jfixed(values[j]);
            }
            csv += csv_line(row);
            rows.push_back(jrow);
        }
    } else {
        std::vector<std::string> header = {"service"};
        std::vector<std::string> nrow = {"n"};
        for (std::size_t j = 0; j < kTableExponents.size(); ++j) {
            header.push_back(std::string("f=") + kTableExponents[j]);
            nrow.push_back(std::to_string(setup.n[j]));
        }
        csv += csv_line(header) + csv_line(nrow);
        for (std::size_t i = 0; i < services.size(); ++i) {
            std::vector<std::string> row = {kTableServices[i]};
            json jrow = {{"service", kTableServices[i]}, {"cells", json::array()}};
            for (std::size_t j = 0; j < kTableExponents.size(); ++j) {
                const auto r =
                    approximate_xi(table_model(*services[i], setup.n[j], kTableExponents[j]));
                row.push_back(fmt.sci(r.xi));
                jrow["cells"].push_back({{"f", kTableExponents[j]},
                                         {"n", setup.n[j]},
                                         {"xi", fmt.jsci(r.xi)}});
            }
            csv += csv_line(row);
            rows.push_back(jrow);
        }
    }
    if (format == OutputFormat::Json) {
        return json{{"command", "table"}, {"table", table}, {"rows", rows}}.dump(2) + "\n";
    }
    return csv;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tail asymptotics and Monte Carlo for infinite-server queues with overdispersed input",
                 "overdisp"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::string format;
    int precision = -1;
    int table = 0;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "Configuration file (key = value, or JSON output)");
    auto* format_opt = app.add_option("--format", format, "Output format")
                           ->check(CLI::IsMember({"csv", "json"}));
    auto* precision_opt =
        app.add_option("--precision", precision, "Digits after the decimal point")
            ->check(CLI::Range(0, 17));
    app.add_option("--table", table, "Table to regenerate")->check(CLI::Range(1, 4));
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed (overrides mc.seed)");

    auto* constants = app.add_subcommand("constants", "Regime constants of the model");
    auto* approximate = app.add_subcommand("approximate", "Exact asymptotics of P(N_n >= u n)");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of P(N_n >= u n)");
    auto* table_cmd = app.add_subcommand("table", "Regenerate one of the reference tables");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (format_opt->count() > 0) {
            cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        }
        if (precision_opt->count() > 0) cfg.precision = precision;
        if (seed_opt->count() > 0) cfg.mc.seed = seed;
        if (const char* threads = std::getenv("OVERDISP_THREADS"); threads && *threads) {
            char* end = nullptr;
            const long w = std::strtol(threads, &end, 10);
            if (*end != '\0' || w < 1 || w > 4096) {
                throw ConfigError("OVERDISP_THREADS must be an integer in 1..4096");
            }
            cfg.mc.workers = static_cast<int>(w);
        }

        std::string text;
        if (*constants) {
            text = cmd_constants(cfg);
        } else if (*approximate) {
            text = cmd_approximate(cfg);
        } else if (*simulate) {
            try {
                cfg.mc.check();
            } catch (const DomainError& e) {
                throw ConfigError(e.what());
            }
            text = cmd_simulate(cfg);
        } else if (*table_cmd) {
            if (table == 0) throw ConfigError("table needs --table <1|2|3|4>");
            text = cmd_table(table, cfg.format, cfg.precision);
        }
        write_output(cfg, text, out);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UnsupportedOrder& e) {
        err << "unsupported order: " << e.what() << "\n";
        return kExitUnsupportedOrder;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace overdisp::cli
