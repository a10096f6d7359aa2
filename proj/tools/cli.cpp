#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace perfmm::cli {

using nlohmann::json;

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return item.key() == a; });
        if (!known)
            throw ConfigError("config: unknown key '" + item.key() + "' in " + section);
    }
}

double require_number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ConfigError(std::string("config: field '") + key + "' must be a number");
    return obj[key].get<double>();
}

std::vector<double> number_list(const json& value, const char* field) {
    if (!value.is_array())
        throw ConfigError(std::string("config: field '") + field + "' must be an array");
    std::vector<double> out;
    for (const auto& v : value) {
        if (!v.is_number())
            throw ConfigError(std::string("config: field '") + field +
                              "' must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<double> parse_grid(const json& value, const char* field) {
    if (value.is_array()) return number_list(value, field);
    if (value.is_object()) {
        check_keys(value, std::string("'") + field + "'", {"min", "max", "count", "spacing"});
        for (const char* key : {"min", "max", "count"})
            if (!value.contains(key))
                throw ConfigError(std::string("config: grid '") + field +
                                  "' requires min, max and count");
        const double lo = value["min"].get<double>();
        const double hi = value["max"].get<double>();
        const int count = value["count"].get<int>();
        if (count < 1)
            throw ConfigError(std::string("config: grid '") + field + "' count must be >= 1");
        std::string spacing = value.value("spacing", "log");
        if (spacing == "log") return log_spaced(lo, hi, count);
        if (spacing == "linear") return lin_spaced(lo, hi, count);
        throw ConfigError(std::string("config: grid '") + field +
                          "' spacing must be \"log\" or \"linear\"");
    }
    throw ConfigError(std::string("config: field '") + field +
                      "' must be an array or a {min,max,count,spacing} object");
}

FillRule parse_fill_rule(const std::string& label) {
    if (label == "linear-prob") return FillRule::LinearProb;
    if (label == "exponential-prob") return FillRule::ExponentialProb;
    throw ConfigError("config: fill_rule must be \"linear-prob\" or \"exponential-prob\"");
}

const char* fill_rule_label(FillRule rule) {
    return rule == FillRule::LinearProb ? "linear-prob" : "exponential-prob";
}

Stepper parse_stepper(const std::string& label) {
    if (label == "euler") return Stepper::Euler;
    if (label == "exact") return Stepper::Exact;
    throw ConfigError("config: stepper must be \"euler\" or \"exact\"");
}

const char* stepper_label(Stepper s) { return s == Stepper::Euler ? "euler" : "exact"; }

ThetaParams parse_theta(const json& value, const std::string& section) {
    check_keys(value, section, {"theta0", "theta1", "theta2"});
    ThetaParams theta;
    theta.theta0 = require_number(value, "theta0", 1.0);
    theta.theta1 = require_number(value, "theta1", 1.0);
    theta.theta2 = require_number(value, "theta2", 1.0);
    return theta;
}

void parse_market(const json& value, MarketParams& market) {
    check_keys(value, "'market'", {"A", "k", "sigma", "T", "dt"});
    market.A = require_number(value, "A", market.A);
    market.k = require_number(value, "k", market.k);
    market.sigma = require_number(value, "sigma", market.sigma);
    market.T = require_number(value, "T", market.T);
    market.dt = require_number(value, "dt", market.dt);
}

void parse_tune(const json& value, TuneConfig& tune) {
    check_keys(value, "'tune'",
               {"box", "budget", "train_paths", "test_paths", "train_seed", "test_seed",
                "objective"});
    if (value.contains("box")) {
        const json& box = value["box"];
        if (!box.is_array() || box.size() != 3)
            throw ConfigError("config: tune.box must be an array of three [lo, hi] pairs");
        for (int i = 0; i < 3; ++i) {
            if (!box[i].is_array() || box[i].size() != 2)
                throw ConfigError("config: tune.box entries must be [lo, hi] pairs");
            tune.box[i][0] = box[i][0].get<double>();
            tune.box[i][1] = box[i][1].get<double>();
        }
    }
    tune.budget = static_cast<int>(require_number(value, "budget", tune.budget));
    tune.train_paths = static_cast<int>(require_number(value, "train_paths", tune.train_paths));
    tune.test_paths = static_cast<int>(require_number(value, "test_paths", tune.test_paths));
    if (value.contains("train_seed")) tune.train_seed = value["train_seed"].get<std::uint64_t>();
    if (value.contains("test_seed")) tune.test_seed = value["test_seed"].get<std::uint64_t>();
    if (value.contains("objective")) {
        const auto parsed = parse_objective(value["objective"].get<std::string>());
        if (!parsed)
            throw ConfigError(
                "config: tune.objective must be \"mean-pnl\", \"sharpe\" or \"mean-utility\"");
        tune.objective = *parsed;
    }
}

}  // namespace

ToolConfig load_config(const std::string& path) {
    ToolConfig config;
    if (path.empty()) return config;

    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
        throw ConfigError("config: parse error at line " + std::to_string(line) + ": " +
                          e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    check_keys(j, "config",
               {"market", "gammas", "xis", "paths_per_cell", "master_seed", "strategies",
                "theta_params", "theta_table", "impact_multiplier", "s0", "fill_rule",
                "stepper", "price_offset", "as_as_shadow", "zero_noise", "tune", "decompose"});

    if (!j.contains("gammas")) throw ConfigError("config: missing required field 'gammas'");
    if (!j.contains("xis")) throw ConfigError("config: missing required field 'xis'");

    ExperimentConfig& exp = config.experiment;
    if (j.contains("market")) parse_market(j["market"], exp.market);
    exp.gammas = number_list(j["gammas"], "gammas");
    exp.xis = parse_grid(j["xis"], "xis");
    exp.paths_per_cell = static_cast<int>(require_number(j, "paths_per_cell", exp.paths_per_cell));
    if (j.contains("master_seed")) exp.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("strategies")) {
        exp.strategies.clear();
        for (const auto& v : j["strategies"]) {
            const auto kind = parse_strategy(v.get<std::string>());
            if (!kind)
                throw ConfigError("config: unknown strategy '" + v.get<std::string>() +
                                  "' (expected as, symmetric, performative or theta)");
            exp.strategies.push_back(*kind);
        }
    }
    if (j.contains("theta_params")) exp.theta = parse_theta(j["theta_params"], "'theta_params'");
    if (j.contains("theta_table")) {
        std::filesystem::path table = j["theta_table"].get<std::string>();
        if (table.is_relative()) table = std::filesystem::path(path).parent_path() / table;
        for (const ThetaRow& row : read_theta_csv(table))
            exp.theta_table.push_back({{row.gamma, row.xi}, row.theta});
    }
    exp.impact_multiplier = require_number(j, "impact_multiplier", exp.impact_multiplier);
    exp.s0 = require_number(j, "s0", exp.s0);
    if (j.contains("fill_rule")) exp.fill_rule = parse_fill_rule(j["fill_rule"].get<std::string>());
    if (j.contains("stepper")) exp.stepper = parse_stepper(j["stepper"].get<std::string>());
    exp.price_offset = require_number(j, "price_offset", exp.price_offset);
    if (j.contains("as_as_shadow")) exp.driver_as_shadow = j["as_as_shadow"].get<bool>();
    if (j.contains("zero_noise")) exp.zero_noise = j["zero_noise"].get<bool>();

    if (j.contains("tune")) parse_tune(j["tune"], config.tune);
    if (j.contains("decompose")) {
        check_keys(j["decompose"], "'decompose'", {"gamma", "xi"});
        config.decompose.gamma = require_number(j["decompose"], "gamma", config.decompose.gamma);
        config.decompose.xi = require_number(j["decompose"], "xi", config.decompose.xi);
    }

    try {
        exp.validate();
        config.tune.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return config;
}

std::string config_snapshot(const ToolConfig& config) {
    const ExperimentConfig& exp = config.experiment;
    json j;
    j["market"] = {{"A", exp.market.A},
                   {"k", exp.market.k},
                   {"sigma", exp.market.sigma},
                   {"T", exp.market.T},
                   {"dt", exp.market.dt}};
    j["gammas"] = exp.gammas;
    j["xis"] = exp.xis;
    j["paths_per_cell"] = exp.paths_per_cell;
    j["master_seed"] = exp.master_seed;
    json strategies = json::array();
    for (StrategyKind kind : exp.strategies) strategies.push_back(strategy_label(kind));
    j["strategies"] = strategies;
    j["theta_params"] = {{"theta0", exp.theta.theta0},
                         {"theta1", exp.theta.theta1},
                         {"theta2", exp.theta.theta2}};
    if (!exp.theta_table.empty()) {
        json rows = json::array();
        for (const auto& [key, theta] : exp.theta_table)
            rows.push_back({{"gamma", key.first},
                            {"xi", key.second},
                            {"theta0", theta.theta0},
                            {"theta1", theta.theta1},
                            {"theta2", theta.theta2}});
        j["theta_table_rows"] = rows;
    }
    j["impact_multiplier"] = exp.impact_multiplier;
    j["s0"] = exp.s0;
    j["fill_rule"] = fill_rule_label(exp.fill_rule);
    j["stepper"] = stepper_label(exp.stepper);
    j["price_offset"] = exp.price_offset;
    j["as_as_shadow"] = exp.driver_as_shadow;
    j["zero_noise"] = exp.zero_noise;
    j["tune"] = {{"box", config.tune.box},
                 {"budget", config.tune.budget},
                 {"train_paths", config.tune.train_paths},
                 {"test_paths", config.tune.test_paths},
                 {"train_seed", config.tune.train_seed},
                 {"test_seed", config.tune.test_seed},
                 {"objective", objective_label(config.tune.objective)}};
    j["decompose"] = {{"gamma", config.decompose.gamma}, {"xi", config.decompose.xi}};
    return j.dump(2);
}

std::string fmt_csv(double value) {
    if (value == 0.0) value = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string sweep_csv_text(const std::vector<SweepRecord>& records) {
    std::string out =
        "strategy,gamma,xi,mean_pnl,std_pnl,sharpe,mean_term_inv,std_term_inv,paths,seed\n";
    for (const SweepRecord& r : records) {
        out += r.strategy;
        out += ',';
        out += fmt_csv(r.gamma);
        out += ',';
        out += fmt_csv(r.xi);
        out += ',';
        out += fmt_csv(r.mean_pnl);
        out += ',';
        out += fmt_csv(r.std_pnl);
        out += ',';
        if (r.sharpe) out += fmt_csv(*r.sharpe);
        out += ',';
        out += fmt_csv(r.mean_term_inv);
        out += ',';
        out += fmt_csv(r.std_term_inv);
        out += ',';
        out += std::to_string(r.paths);
        out += ',';
        out += std::to_string(r.master_seed);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double_field(const std::string& text, const char* column) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("csv: bad numeric value '") + text + "' in column " +
                          column);
    }
}

}  // namespace

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        line != "strategy,gamma,xi,mean_pnl,std_pnl,sharpe,mean_term_inv,std_term_inv,paths,seed")
        throw ConfigError("csv: unexpected sweep.csv header in " + path.string());
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 10)
            throw ConfigError("csv: expected 10 columns in " + path.string());
        SweepRow row;
        row.strategy = f[0];
        row.gamma = parse_double_field(f[1], "gamma");
        row.xi = parse_double_field(f[2], "xi");
        row.mean_pnl = parse_double_field(f[3], "mean_pnl");
        row.std_pnl = parse_double_field(f[4], "std_pnl");
        if (!f[5].empty()) row.sharpe = parse_double_field(f[5], "sharpe");
        row.mean_term_inv = parse_double_field(f[6], "mean_term_inv");
        row.std_term_inv = parse_double_field(f[7], "std_term_inv");
        row.paths = std::lround(parse_double_field(f[8], "paths"));
        row.seed = static_cast<std::uint64_t>(std::stoull(f[9]));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ThetaRow> read_theta_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        line != "gamma,xi,theta0,theta1,theta2,train_objective,test_objective")
        throw ConfigError("csv: unexpected thetas.csv header in " + path.string());
    std::vector<ThetaRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 7) throw ConfigError("csv: expected 7 columns in " + path.string());
        ThetaRow row;
        row.gamma = parse_double_field(f[0], "gamma");
        row.xi = parse_double_field(f[1], "xi");
        row.theta.theta0 = parse_double_field(f[2], "theta0");
        row.theta.theta1 = parse_double_field(f[3], "theta1");
        row.theta.theta2 = parse_double_field(f[4], "theta2");
        row.train_objective = parse_double_field(f[5], "train_objective");
        row.test_objective = parse_double_field(f[6], "test_objective");
        rows.push_back(row);
    }
    return rows;
}

namespace {

json make_manifest(const ToolConfig& config, const std::string& command,
                   const std::vector<std::string>& outputs, double seconds) {
    json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["tool"] = "perfmm";
    manifest["version"] = kToolVersion;
    manifest["command"] = command;
    manifest["master_seed"] = config.experiment.master_seed;
    manifest["duration_seconds"] = seconds;
    manifest["outputs"] = outputs;
    manifest["config"] = json::parse(config_snapshot(config));
    return manifest;
}

ToolConfig apply_overrides(ToolConfig config, const Overrides& o) {
    if (o.seed) config.experiment.master_seed = *o.seed;
    if (o.impact_multiplier) config.experiment.impact_multiplier = *o.impact_multiplier;
    if (o.zero_noise) config.experiment.zero_noise = true;
    return config;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int cmd_sweep(const ToolConfig& raw, const std::filesystem::path& out_dir,
              const Overrides& overrides) {
    const auto start = Clock::now();
    const ToolConfig config = apply_overrides(raw, overrides);
    try {
        config.experiment.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    std::filesystem::create_directories(out_dir);

    const std::vector<SweepRecord> records =
        run_sweep(config.experiment, overrides.threads);
    write_file_atomic(out_dir / "sweep.csv", sweep_csv_text(records));
    write_file_atomic(out_dir / "manifest.json",
                      make_manifest(config, "sweep", {"sweep.csv"}, seconds_since(start))
                              .dump(2) +
                          "\n");
    return 0;
}

int cmd_decompose(const ToolConfig& raw, const std::filesystem::path& out_dir,
                  const Overrides& overrides) {
    const auto start = Clock::now();
    const ToolConfig config = apply_overrides(raw, overrides);
    std::filesystem::create_directories(out_dir);

    CellConfig cell = config.experiment.cell(config.decompose.gamma, config.decompose.xi);
    const DecomposeBundle bundle = decompose_run(cell, config.experiment.master_seed);
    const double offset = cell.price_offset;

    std::string decompose_text = "t,impact,deterministic,mid_price\n";
    for (std::size_t n = 0; n < bundle.times.size(); ++n) {
        decompose_text += fmt_csv(bundle.times[n]);
        decompose_text += ',';
        decompose_text += fmt_csv(bundle.decomposition.impact[n]);
        decompose_text += ',';
        decompose_text += fmt_csv(bundle.decomposition.deterministic[n] + offset);
        decompose_text += ',';
        decompose_text += fmt_csv(bundle.decomposition.full[n] + offset);
        decompose_text += '\n';
    }
    write_file_atomic(out_dir / "decompose.csv", decompose_text);

    std::string session_text =
        "t,mid_price,as_reservation,as_ask,as_bid,as_inventory,as_pnl,"
        "perf_reservation,perf_ask,perf_bid,perf_inventory,perf_pnl\n";
    for (std::size_t n = 0; n < bundle.times.size(); ++n) {
        const AgentSeries& as = bundle.driver;
        const AgentSeries& perf = bundle.performative;
        session_text += fmt_csv(bundle.times[n]);
        session_text += ',';
        session_text += fmt_csv(bundle.decomposition.full[n] + offset);
        session_text += ',';
        session_text += fmt_csv(as.reservation[n]);
        session_text += ',';
        session_text += fmt_csv(as.ask_price[n]);
        session_text += ',';
        session_text += fmt_csv(as.bid_price[n]);
        session_text += ',';
        session_text += std::to_string(as.inventory[n]);
        session_text += ',';
        session_text += fmt_csv(as.pnl[n]);
        session_text += ',';
        session_text += fmt_csv(perf.reservation[n]);
        session_text += ',';
        session_text += fmt_csv(perf.ask_price[n]);
        session_text += ',';
        session_text += fmt_csv(perf.bid_price[n]);
        session_text += ',';
        session_text += std::to_string(perf.inventory[n]);
        session_text += ',';
        session_text += fmt_csv(perf.pnl[n]);
        session_text += '\n';
    }
    write_file_atomic(out_dir / "session.csv", session_text);

    write_file_atomic(out_dir / "manifest.json",
                      make_manifest(config, "decompose", {"decompose.csv", "session.csv"},
                                    seconds_since(start))
                              .dump(2) +
                          "\n");
    return 0;
}

int cmd_tune(const ToolConfig& raw, const std::filesystem::path& out_dir,
             const Overrides& overrides) {
    const auto start = Clock::now();
    ToolConfig config = apply_overrides(raw, overrides);
    config.tune.threads = overrides.threads;
    try {
        config.experiment.validate();
        config.tune.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    std::filesystem::create_directories(out_dir);

    std::string text = "gamma,xi,theta0,theta1,theta2,train_objective,test_objective\n";
    for (double gamma : config.experiment.gammas) {
        for (double xi : config.experiment.xis) {
            const TuneReport report = tune(config.tune, config.experiment.cell(gamma, xi));
            text += fmt_csv(gamma);
            text += ',';
            text += fmt_csv(xi);
            text += ',';
            text += fmt_csv(report.best.theta0);
            text += ',';
            text += fmt_csv(report.best.theta1);
            text += ',';
            text += fmt_csv(report.best.theta2);
            text += ',';
            text += fmt_csv(report.train_objective);
            text += ',';
            text += fmt_csv(report.test_objective);
            text += '\n';
        }
    }
    write_file_atomic(out_dir / "thetas.csv", text);
    write_file_atomic(out_dir / "manifest.json",
                      make_manifest(config, "tune", {"thetas.csv"}, seconds_since(start))
                              .dump(2) +
                          "\n");
    return 0;
}

namespace {

bool near(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ValidateOutcome validate_sweep_rows(const std::vector<SweepRow>& rows) {
    ValidateOutcome out;
    const auto emit = [&](const std::string& line, bool failed = false) {
        out.lines.push_back(line);
        if (failed) out.all_passed = false;
    };

    // sharpe consistency: the stored ratio must reproduce mean/std at CSV precision
    {
        bool ok = true, any = false, skipped_single = false;
        std::string why;
        for (const SweepRow& r : rows) {
            if (r.paths <= 1) {
                skipped_single = true;
                continue;
            }
            if (r.std_pnl <= 0.0) continue;
            any = true;
            if (!r.sharpe) {
                ok = false;
                why = "missing sharpe for " + r.strategy;
                break;
            }
            const double expected = r.mean_pnl / r.std_pnl;
            if (std::abs(*r.sharpe - expected) > 1e-4 * std::max(1.0, std::abs(expected))) {
                ok = false;
                why = "sharpe != mean/std for " + r.strategy;
                break;
            }
        }
        if (skipped_single) emit("SKIP sharpe-consistency: single-path rows skipped");
        if (any) emit(ok ? "PASS sharpe-consistency" : "FAIL sharpe-consistency: " + why, !ok);
    }

    // terminal inventory statistically indistinguishable from 0
    {
        bool ok = true, any = false;
        std::string why;
        for (const SweepRow& r : rows) {
            if (r.paths <= 1 || r.std_term_inv <= 0.0) continue;
            any = true;
            const double bound = 3.0 * r.std_term_inv / std::sqrt(static_cast<double>(r.paths));
            if (std::abs(r.mean_term_inv) > bound) {
                ok = false;
                why = r.strategy + " at gamma=" + fmt_csv(r.gamma) + ", xi=" + fmt_csv(r.xi);
                break;
            }
        }
        if (any)
            emit(ok ? "PASS inventory-neutrality" : "FAIL inventory-neutrality: " + why, !ok);
        else
            emit("SKIP inventory-neutrality: no multi-path rows");
    }

    // cell-wise orderings at gamma = 0.5
    struct CellRows {
        const SweepRow* perf = nullptr;
        const SweepRow* as = nullptr;
        const SweepRow* sym = nullptr;
    };
    std::vector<std::pair<std::pair<double, double>, CellRows>> cells;
    for (const SweepRow& r : rows) {
        if (!near(r.gamma, 0.5)) continue;
        CellRows* cell = nullptr;
        for (auto& c : cells)
            if (near(c.first.second, r.xi)) cell = &c.second;
        if (!cell) {
            cells.push_back({{r.gamma, r.xi}, {}});
            cell = &cells.back().second;
        }
        if (r.strategy == "performative") cell->perf = &r;
        if (r.strategy == "as") cell->as = &r;
        if (r.strategy == "symmetric") cell->sym = &r;
    }

    {
        bool ok = true, any = false;
        std::string why;
        for (const auto& [key, cell] : cells) {
            if (key.second < 5.0 || !cell.perf || !cell.as) continue;
            if (cell.perf->paths <= 1 || cell.as->paths <= 1) continue;
            any = true;
            const double n = static_cast<double>(cell.perf->paths);
            const double se = std::sqrt((cell.perf->std_pnl * cell.perf->std_pnl +
                                         cell.as->std_pnl * cell.as->std_pnl) /
                                        n);
            if (cell.perf->mean_pnl - cell.as->mean_pnl < 3.0 * se) {
                ok = false;
                why = "xi=" + fmt_csv(key.second);
                break;
            }
        }
        if (any)
            emit(ok ? "PASS mean-pnl-ordering" : "FAIL mean-pnl-ordering: " + why, !ok);
        else
            emit("SKIP mean-pnl-ordering: no eligible gamma=0.5 cells with xi >= 5");
    }

    {
        bool ok = true, any = false;
        std::string why;
        for (const auto& [key, cell] : cells) {
            if (!cell.perf || !cell.sym) continue;
            if (cell.perf->paths <= 1 || cell.sym->paths <= 1) continue;
            any = true;
            const double n = static_cast<double>(cell.perf->paths);
            const double se_perf = cell.perf->std_pnl / std::sqrt(2.0 * (n - 1.0));
            const double se_sym = cell.sym->std_pnl / std::sqrt(2.0 * (n - 1.0));
            const double margin = 3.0 * std::sqrt(se_perf * se_perf + se_sym * se_sym);
            if (cell.sym->std_pnl - cell.perf->std_pnl < margin) {
                ok = false;
                why = "xi=" + fmt_csv(key.second);
                break;
            }
        }
        if (any)
            emit(ok ? "PASS std-ordering" : "FAIL std-ordering: " + why, !ok);
        else
            emit("SKIP std-ordering: no eligible gamma=0.5 cells");
    }

    return out;
}

int cmd_validate(const std::filesystem::path& out_dir) {
    const std::filesystem::path csv = out_dir / "sweep.csv";
    if (!std::filesystem::exists(csv))
        throw ConfigError("validate: missing " + csv.string());
    const ValidateOutcome outcome = validate_sweep_rows(read_sweep_csv(csv));
    for (const std::string& line : outcome.lines) std::cout << line << '\n';
    return outcome.all_passed ? 0 : 1;
}

}  // namespace perfmm::cli
