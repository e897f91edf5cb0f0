// Command-line front end: exhaustive share-price model search over a CPI
// catalog, stability backtracking, correlation/unit-root/cointegration
// diagnostics, and scenario comparison. Emits TSV (human) and JSON (machine)
// reports; every report embeds a manifest with input digests.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "cpishare/cpishare.hpp"

namespace fs = std::filesystem;
using namespace cpishare;

namespace {

struct InputFile {
    std::string path;
    std::string text;
    std::string digest;
};

InputFile read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    InputFile f{path, buf.str(), {}};
    f.digest = hex64(fnv1a64(f.text));
    return f;
}

/// Loads a wide CSV holding exactly one value column, e.g. `date,GS`.
std::pair<std::string, MonthlySeries> read_single_series(const InputFile& f, const std::string& series) {
    CpiCatalog catalog = parse_catalog_csv(f.text);
    if (!series.empty()) return {series, catalog.get(series)};
    if (catalog.size() != 1) {
        raise(Errc::InvalidArgument,
              "'" + f.path + "' holds " + std::to_string(catalog.size()) + " columns; pass --series to pick one");
    }
    const auto& [code, s] = *catalog.entries().begin();
    return {code, s};
}

MonthKey parse_month_flag(const std::string& text, const char* flag) {
    try {
        return parse_month(text);
    } catch (const Error&) {
        raise(Errc::InvalidArgument, std::string(flag) + " expects YYYY-MM, got '" + text + "'");
    }
}

struct OutputOptions {
    std::string dir = ".";
    std::string format = "both";  // tsv | json | both
};

void write_text(const OutputOptions& out, const std::string& name, const std::string& text) {
    fs::create_directories(out.dir);
    fs::path path = fs::path(out.dir) / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) raise(Errc::InvalidArgument, "cannot write '" + path.string() + "'");
    file << text;
    std::cerr << "wrote " << path.string() << "\n";
}

void emit(const OutputOptions& out, const std::string& stem, const std::string& tsv, const json& j) {
    if (out.format == "tsv" || out.format == "both") write_text(out, stem + ".tsv", tsv);
    if (out.format == "json" || out.format == "both") write_text(out, stem + ".json", j.dump(2) + "\n");
}

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--out", out.dir, "Report directory")->capture_default_str();
    cmd->add_option("--format", out.format, "Report format")
        ->check(CLI::IsMember({"tsv", "json", "both"}))
        ->capture_default_str();
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

ModelSpec load_model(const InputFile& f) {
    json j = json::parse(f.text);
    return model_from_any_json(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"share price decomposition onto consumer price indices"};
    app.set_version_flag("--version", std::string("cpishare ") + kVersion);
    app.require_subcommand(1);

    // ---- search ----
    struct {
        std::string prices, cpi, series, start = "2003-07", anchor;
        int max_lag = 11, max_lead = 8, top = 10, min_obs = 60, threads = 0;
        OutputOptions out;
    } se;
    auto* search_cmd = app.add_subcommand("search", "Exhaustive best-fit pair/lag search at one anchor month");
    search_cmd->add_option("--prices", se.prices, "Price CSV (date,TICKER)")->required();
    search_cmd->add_option("--cpi", se.cpi, "CPI catalog CSV")->required();
    search_cmd->add_option("--series", se.series, "Price column when the file has several");
    search_cmd->add_option("--start", se.start, "First sample month")->capture_default_str();
    search_cmd->add_option("--anchor", se.anchor, "Anchor month (default: last price month)");
    search_cmd->add_option("--max-lag", se.max_lag, "Largest index lag, months")->capture_default_str();
    search_cmd->add_option("--max-lead", se.max_lead, "Largest index lead, months")->capture_default_str();
    search_cmd->add_option("--top", se.top, "Ranked models to report")->capture_default_str();
    search_cmd->add_option("--min-obs", se.min_obs, "Minimum sample months")->capture_default_str();
    search_cmd->add_option("--threads", se.threads, "Worker threads, 0 = all cores")->capture_default_str();
    add_output_flags(search_cmd, se.out);

    // ---- stability ----
    struct {
        std::string prices, cpi, series, start = "2003-07", anchor;
        int max_lag = 11, max_lead = 8, window = 8, quorum = 0, top = 10, min_obs = 60, threads = 0;
        OutputOptions out;
    } st;
    auto* stability_cmd = app.add_subcommand("stability", "Best model per anchor over a rolling window");
    stability_cmd->add_option("--prices", st.prices, "Price CSV (date,TICKER)")->required();
    stability_cmd->add_option("--cpi", st.cpi, "CPI catalog CSV")->required();
    stability_cmd->add_option("--series", st.series, "Price column when the file has several");
    stability_cmd->add_option("--start", st.start, "First sample month")->capture_default_str();
    stability_cmd->add_option("--anchor", st.anchor, "Newest anchor month (default: last price month)");
    stability_cmd->add_option("--max-lag", st.max_lag, "Largest index lag, months")->capture_default_str();
    stability_cmd->add_option("--max-lead", st.max_lead, "Largest index lead, months")->capture_default_str();
    stability_cmd->add_option("--window", st.window, "Consecutive anchor months")->capture_default_str();
    stability_cmd->add_option("--quorum", st.quorum, "Majority quorum, 0 = window-1")->capture_default_str();
    stability_cmd->add_option("--min-obs", st.min_obs, "Minimum sample months")->capture_default_str();
    stability_cmd->add_option("--threads", st.threads, "Worker threads, 0 = all cores")->capture_default_str();
    add_output_flags(stability_cmd, st.out);

    // ---- corr ----
    struct {
        std::string cpi, series;
        bool scan = false, diff = false;
        int max_lag = 11;
        OutputOptions out;
    } co;
    auto* corr_cmd = app.add_subcommand("corr", "Pairwise correlation matrix, optionally lag-maximized");
    corr_cmd->add_option("--cpi", co.cpi, "Wide CSV of series")->required();
    corr_cmd->add_option("--series", co.series, "Comma list of columns (default: all)");
    corr_cmd->add_flag("--scan", co.scan, "Also report the lag-maximized coefficients");
    corr_cmd->add_flag("--diff", co.diff, "Correlate first differences instead of levels");
    corr_cmd->add_option("--max-lag", co.max_lag, "Largest shift scanned")->capture_default_str();
    add_output_flags(corr_cmd, co.out);

    // ---- adf ----
    struct {
        std::string cpi, prices, series;
        bool diff = false;
        int level = 5, lag_order = -1;
        OutputOptions out;
    } ad;
    auto* adf_cmd = app.add_subcommand("adf", "Augmented Dickey-Fuller unit-root test");
    adf_cmd->add_option("--cpi", ad.cpi, "Wide CSV of series (use --series to pick one)");
    adf_cmd->add_option("--prices", ad.prices, "Single-column price CSV");
    adf_cmd->add_option("--series", ad.series, "Column to test");
    adf_cmd->add_flag("--diff", ad.diff, "Test the first difference");
    adf_cmd->add_option("--level", ad.level, "Significance level, percent")
        ->check(CLI::IsMember({1, 5, 10}))
        ->capture_default_str();
    adf_cmd->add_option("--lag-order", ad.lag_order, "Lagged differences, -1 = automatic")->capture_default_str();
    add_output_flags(adf_cmd, ad.out);

    // ---- coint ----
    struct {
        std::string prices, series, predicted, model, cpi;
        int level = 5, lag_order = -1;
        OutputOptions out;
    } ci;
    auto* coint_cmd = app.add_subcommand("coint", "Residual-based cointegration test of actual vs predicted");
    coint_cmd->add_option("--prices", ci.prices, "Actual price CSV")->required();
    coint_cmd->add_option("--series", ci.series, "Price column when the file has several");
    coint_cmd->add_option("--predicted", ci.predicted, "Predicted price CSV");
    coint_cmd->add_option("--model", ci.model, "Model JSON; prediction is computed from --cpi");
    coint_cmd->add_option("--cpi", ci.cpi, "CPI catalog CSV (with --model)");
    coint_cmd->add_option("--level", ci.level, "Significance level, percent")
        ->check(CLI::IsMember({1, 5, 10}))
        ->capture_default_str();
    coint_cmd->add_option("--lag-order", ci.lag_order, "Lagged differences, -1 = automatic")->capture_default_str();
    add_output_flags(coint_cmd, ci.out);

    // ---- sensitivity ----
    struct {
        std::string model;
        double price = 0.0;
        OutputOptions out;
    } sn;
    auto* sens_cmd = app.add_subcommand("sensitivity", "Coefficient ratio and per-unit price sensitivity");
    sens_cmd->add_option("--model", sn.model, "Model JSON")->required();
    sens_cmd->add_option("--price", sn.price, "Current share price")->required();
    add_output_flags(sens_cmd, sn.out);

    // ---- compare ----
    struct {
        std::string models, path, cpi, growth, entry, from, to;
        OutputOptions out;
    } cm;
    auto* compare_cmd = app.add_subcommand("compare", "Rank models by projected return under a scenario path");
    compare_cmd->add_option("--models", cm.models, "Comma list of model JSON files")->required();
    compare_cmd->add_option("--path", cm.path, "Scenario CSV of future index levels");
    compare_cmd->add_option("--cpi", cm.cpi, "CPI catalog CSV, extended by --growth when no --path is given");
    compare_cmd->add_option("--growth", cm.growth, "Monthly growth per code, e.g. F=0.3,ORPR=0.1 (percent)");
    compare_cmd->add_option("--entry", cm.entry, "Entry price per label, e.g. GS=125.4,JPM=40.0")->required();
    compare_cmd->add_option("--from", cm.from, "Projection start (YYYY-MM)")->required();
    compare_cmd->add_option("--to", cm.to, "Projection end (YYYY-MM)")->required();
    add_output_flags(compare_cmd, cm.out);

    // ---- synth ----
    struct {
        std::uint64_t seed = 42;
        int n_series = 20, months = 150;
        double noise = 0.0;
        std::string from = "2000-01";
        OutputOptions out;
    } sy;
    auto* synth_cmd = app.add_subcommand("synth", "Seeded synthetic catalog, truth model and price");
    synth_cmd->add_option("--seed", sy.seed, "Stream seed")->capture_default_str();
    synth_cmd->add_option("--n-series", sy.n_series, "Catalog size")->capture_default_str();
    synth_cmd->add_option("--months", sy.months, "Catalog span, months")->capture_default_str();
    synth_cmd->add_option("--noise", sy.noise, "Price noise sigma")->capture_default_str();
    synth_cmd->add_option("--from", sy.from, "Catalog start month")->capture_default_str();
    add_output_flags(synth_cmd, sy.out);

    // ---- normalize ----
    struct {
        std::string prices, series, from = "2003-01", to = "2009-12";
        OutputOptions out;
    } no;
    auto* norm_cmd = app.add_subcommand("normalize", "Rescale series to their peak over a window");
    norm_cmd->add_option("--prices", no.prices, "Wide CSV of series")->required();
    norm_cmd->add_option("--series", no.series, "Comma list of columns (default: all)");
    norm_cmd->add_option("--from", no.from, "Window start")->capture_default_str();
    norm_cmd->add_option("--to", no.to, "Window end")->capture_default_str();
    add_output_flags(norm_cmd, no.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*search_cmd) {
            InputFile prices_file = read_input(se.prices);
            InputFile cpi_file = read_input(se.cpi);
            auto [ticker, price] = read_single_series(prices_file, se.series);
            CpiCatalog catalog = parse_catalog_csv(cpi_file.text);
            SearchConfig cfg;
            cfg.start = parse_month_flag(se.start, "--start");
            cfg.anchor = se.anchor.empty() ? price.end() : parse_month_flag(se.anchor, "--anchor");
            cfg.max_lag = se.max_lag;
            cfg.max_lead = se.max_lead;
            cfg.latest_cpi = catalog.latest_month().value_or(cfg.anchor);
            cfg.top_k = se.top;
            cfg.min_obs = se.min_obs;
            SearchResult result = best_fit_search(price, catalog, cfg, se.threads);
            RunManifest manifest{"search"};
            manifest.inputs = {{"prices:" + prices_file.path, prices_file.digest},
                               {"cpi:" + cpi_file.path, cpi_file.digest}};
            manifest.config = {{"series", ticker},
                               {"start", format_month(cfg.start)},
                               {"anchor", format_month(cfg.anchor)},
                               {"max_lag", std::to_string(cfg.max_lag)},
                               {"max_lead", std::to_string(cfg.max_lead)},
                               {"effective_lead", std::to_string(effective_lead(cfg))},
                               {"top", std::to_string(cfg.top_k)},
                               {"min_obs", std::to_string(cfg.min_obs)}};
            emit(se.out, "search_report", search_report_tsv(manifest, result), search_report_json(manifest, result));
        } else if (*stability_cmd) {
            InputFile prices_file = read_input(st.prices);
            InputFile cpi_file = read_input(st.cpi);
            auto [ticker, price] = read_single_series(prices_file, st.series);
            CpiCatalog catalog = parse_catalog_csv(cpi_file.text);
            SearchConfig cfg;
            cfg.start = parse_month_flag(st.start, "--start");
            cfg.anchor = st.anchor.empty() ? price.end() : parse_month_flag(st.anchor, "--anchor");
            cfg.max_lag = st.max_lag;
            cfg.max_lead = st.max_lead;
            cfg.latest_cpi = catalog.latest_month().value_or(cfg.anchor);
            cfg.top_k = st.top;
            cfg.min_obs = st.min_obs;
            StabilityReport report = backtrack_models(price, catalog, cfg.anchor, st.window, cfg, st.threads);
            RunManifest manifest{"stability"};
            manifest.inputs = {{"prices:" + prices_file.path, prices_file.digest},
                               {"cpi:" + cpi_file.path, cpi_file.digest}};
            manifest.config = {{"series", ticker},
                               {"start", format_month(cfg.start)},
                               {"anchor", format_month(cfg.anchor)},
                               {"window", std::to_string(st.window)},
                               {"quorum", std::to_string(st.quorum > 0 ? st.quorum : st.window - 1)},
                               {"max_lag", std::to_string(cfg.max_lag)},
                               {"max_lead", std::to_string(cfg.max_lead)},
                               {"min_obs", std::to_string(cfg.min_obs)}};
            emit(st.out, "stability_report", stability_report_tsv(manifest, report, st.quorum),
                 stability_report_json(manifest, report, st.quorum));
        } else if (*corr_cmd) {
            InputFile cpi_file = read_input(co.cpi);
            CpiCatalog catalog = parse_catalog_csv(cpi_file.text);
            std::vector<std::string> wanted = co.series.empty() ? catalog.codes() : split_list(co.series);
            std::vector<std::pair<std::string, MonthlySeries>> series;
            for (const auto& code : wanted) {
                MonthlySeries s = catalog.get(code);
                if (co.diff) s = first_difference(s);
                series.emplace_back(co.diff ? "d" + code : code, std::move(s));
            }
            CorrelationMatrix matrix = correlation_matrix(series, co.scan, co.max_lag);
            RunManifest manifest{"corr"};
            manifest.inputs = {{"cpi:" + cpi_file.path, cpi_file.digest}};
            manifest.config = {{"scan", co.scan ? "true" : "false"},
                               {"diff", co.diff ? "true" : "false"},
                               {"max_lag", std::to_string(co.max_lag)}};
            emit(co.out, "corr_report", correlation_report_tsv(manifest, matrix),
                 correlation_report_json(manifest, matrix));
        } else if (*adf_cmd) {
            if (ad.cpi.empty() == ad.prices.empty()) {
                raise(Errc::InvalidArgument, "pass exactly one of --cpi or --prices");
            }
            InputFile file = read_input(ad.cpi.empty() ? ad.prices : ad.cpi);
            auto [label, series] = read_single_series(file, ad.series);
            if (ad.diff) {
                series = first_difference(series);
                label = "d" + label;
            }
            std::optional<int> lag;
            if (ad.lag_order >= 0) lag = ad.lag_order;
            AdfResult result = adf_test(series, ad.level, lag);
            RunManifest manifest{"adf"};
            manifest.inputs = {{"input:" + file.path, file.digest}};
            manifest.config = {{"series", label},
                               {"level", std::to_string(ad.level)},
                               {"lag_order", lag ? std::to_string(*lag) : "auto"}};
            json j{{"manifest", manifest_json(manifest)}, {"series", label}, {"adf", adf_to_json(result)}};
            emit(ad.out, "adf_report", adf_report_tsv(manifest, label, result), j);
        } else if (*coint_cmd) {
            InputFile prices_file = read_input(ci.prices);
            auto [ticker, actual] = read_single_series(prices_file, ci.series);
            RunManifest manifest{"coint"};
            manifest.inputs = {{"prices:" + prices_file.path, prices_file.digest}};
            std::optional<MonthlySeries> predicted;
            if (!ci.predicted.empty()) {
                InputFile predicted_file = read_input(ci.predicted);
                predicted = read_single_series(predicted_file, "").second;
                manifest.inputs.emplace_back("predicted:" + predicted_file.path, predicted_file.digest);
            } else if (!ci.model.empty() && !ci.cpi.empty()) {
                InputFile model_file = read_input(ci.model);
                InputFile cpi_file = read_input(ci.cpi);
                ModelSpec spec = load_model(model_file);
                CpiCatalog catalog = parse_catalog_csv(cpi_file.text);
                const MonthlySeries& s1 = catalog.get(spec.code1);
                const MonthlySeries& s2 = catalog.get(spec.code2);
                MonthKey lo = std::max(add_months(s1.start(), spec.lag1), add_months(s2.start(), spec.lag2));
                MonthKey hi = std::min(add_months(s1.end(), spec.lag1), add_months(s2.end(), spec.lag2));
                lo = std::max(lo, actual.start());
                hi = std::min(hi, actual.end());
                if (hi < lo) raise(Errc::InsufficientOverlap, "model prediction and prices never overlap");
                predicted = project_price(spec, catalog, lo, hi);
                manifest.inputs.emplace_back("model:" + model_file.path, model_file.digest);
                manifest.inputs.emplace_back("cpi:" + cpi_file.path, cpi_file.digest);
            } else {
                raise(Errc::InvalidArgument, "pass --predicted, or --model together with --cpi");
            }
            std::optional<int> lag;
            if (ci.lag_order >= 0) lag = ci.lag_order;
            EngleGrangerResult result = engle_granger_test(actual, *predicted, ci.level, lag);
            manifest.config = {{"series", ticker},
                               {"level", std::to_string(ci.level)},
                               {"lag_order", lag ? std::to_string(*lag) : "auto"}};
            emit(ci.out, "coint_report", coint_report_tsv(manifest, result), coint_report_json(manifest, result));
        } else if (*sens_cmd) {
            InputFile model_file = read_input(sn.model);
            ModelSpec spec = load_model(model_file);
            double ratio = coefficient_ratio(spec);
            UnitSensitivity s = unit_sensitivity(spec, sn.price);
            RunManifest manifest{"sensitivity"};
            manifest.inputs = {{"model:" + model_file.path, model_file.digest}};
            manifest.config = {{"price", fmt_full(sn.price)}};
            json j{{"manifest", manifest_json(manifest)},
                   {"model", model_to_json(spec)},
                   {"coefficient_ratio", ratio},
                   {"dollars_per_unit", s.dollars_per_unit},
                   {"percent_per_unit", s.percent_per_unit}};
            emit(sn.out, "sensitivity_report", sensitivity_report_tsv(manifest, spec, sn.price, ratio, s), j);
        } else if (*compare_cmd) {
            RunManifest manifest{"compare"};
            std::vector<std::pair<std::string, ModelSpec>> specs;
            for (const auto& path : split_list(cm.models)) {
                InputFile model_file = read_input(path);
                json j = json::parse(model_file.text);
                std::string label =
                    j.contains("label") ? j.at("label").get<std::string>() : fs::path(path).stem().string();
                specs.emplace_back(label, model_from_any_json(j));
                manifest.inputs.emplace_back("model:" + path, model_file.digest);
            }
            if (specs.empty()) raise(Errc::InvalidArgument, "--models lists no files");

            MonthKey from = parse_month_flag(cm.from, "--from");
            MonthKey to = parse_month_flag(cm.to, "--to");

            ScenarioPath path = [&]() -> ScenarioPath {
                if (!cm.path.empty()) {
                    InputFile path_file = read_input(cm.path);
                    manifest.inputs.emplace_back("path:" + path_file.path, path_file.digest);
                    return parse_catalog_csv(path_file.text);
                }
                if (cm.cpi.empty()) raise(Errc::InvalidArgument, "pass --path, or --cpi (optionally with --growth)");
                InputFile cpi_file = read_input(cm.cpi);
                manifest.inputs.emplace_back("cpi:" + cpi_file.path, cpi_file.digest);
                CpiCatalog catalog = parse_catalog_csv(cpi_file.text);
                std::map<std::string, double> growth;  // percent per month
                for (const auto& item : split_list(cm.growth)) {
                    auto eq = item.find('=');
                    if (eq == std::string::npos) raise(Errc::InvalidArgument, "--growth expects CODE=pct");
                    growth[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
                }
                // extend each referenced series at its constant monthly growth
                ScenarioPath extended;
                for (const auto& [label, spec] : specs) {
                    for (const auto& code : {spec.code1, spec.code2}) {
                        if (extended.has(code)) continue;
                        const MonthlySeries& s = catalog.get(code);
                        std::vector<double> values(s.values());
                        double rate = growth.count(code) ? growth.at(code) / 100.0 : 0.0;
                        MonthKey need_to = std::max(add_months(to, std::max(-spec.lag1, -spec.lag2)), to);
                        double level = values.back();
                        for (int m = months_between(s.end(), need_to); m > 0; --m) {
                            level *= 1.0 + rate;
                            values.push_back(level);
                        }
                        extended.add(code, MonthlySeries(s.start(), std::move(values)));
                    }
                }
                return extended;
            }();

            std::map<std::string, double> entries;
            for (const auto& item : split_list(cm.entry)) {
                auto eq = item.find('=');
                if (eq == std::string::npos) raise(Errc::InvalidArgument, "--entry expects LABEL=PRICE");
                entries[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            }
            auto ranking = compare_models(specs, path, from, to, entries);
            manifest.config = {{"from", format_month(from)}, {"to", format_month(to)}, {"growth", cm.growth}};
            emit(cm.out, "compare_report", compare_report_tsv(manifest, ranking),
                 compare_report_json(manifest, ranking));
        } else if (*synth_cmd) {
            MonthKey from = parse_month_flag(sy.from, "--from");
            MonthKey to = add_months(from, sy.months - 1);
            CpiCatalog catalog = generate_catalog(sy.n_series, from, to, sy.seed);

            // deterministic truth model drawn from a stream decoupled from the catalog's
            Prng rng(sy.seed ^ 0x5DEECE66Dull);
            std::vector<std::string> codes = catalog.codes();
            std::size_t i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(codes.size())) % codes.size();
            std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(codes.size() - 1)) % (codes.size() - 1);
            if (j >= i) ++j;
            TruthSpec truth;
            truth.model.code1 = codes[std::min(i, j)];
            truth.model.code2 = codes[std::max(i, j)];
            truth.model.lag1 = static_cast<int>(rng.uniform() * 7.0);
            truth.model.lag2 = static_cast<int>(rng.uniform() * 7.0);
            truth.model.b1 = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + 9.0 * rng.uniform());
            truth.model.b2 = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + 9.0 * rng.uniform());
            truth.model.c = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (5.0 + 25.0 * rng.uniform());
            truth.model.d = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (100.0 + 400.0 * rng.uniform());
            truth.noise_sigma = sy.noise;
            truth.seed = sy.seed + 1;
            truth.from = add_months(from, 12);
            truth.to = to;
            MonthlySeries price = synthesize_price(truth, catalog);

            CpiCatalog price_catalog;
            price_catalog.add("SYNTH", price);
            std::string catalog_csv = write_catalog_csv(catalog);
            std::string price_csv = write_catalog_csv(price_catalog);
            json truth_json{{"model", model_to_json(truth.model)},
                            {"noise_sigma", truth.noise_sigma},
                            {"seed", truth.seed},
                            {"from", format_month(truth.from)},
                            {"to", format_month(truth.to)}};
            write_text(sy.out, "synth_catalog.csv", catalog_csv);
            write_text(sy.out, "synth_price.csv", price_csv);
            write_text(sy.out, "synth_truth.json", truth_json.dump(2) + "\n");

            RunManifest manifest{"synth"};
            manifest.config = {{"seed", std::to_string(sy.seed)},
                               {"n_series", std::to_string(sy.n_series)},
                               {"months", std::to_string(sy.months)},
                               {"noise", fmt_full(sy.noise)},
                               {"from", format_month(from)}};
            manifest.inputs = {{"out:synth_catalog.csv", hex64(fnv1a64(catalog_csv))},
                               {"out:synth_price.csv", hex64(fnv1a64(price_csv))}};
            json report{{"manifest", manifest_json(manifest)}, {"truth", truth_json}};
            emit(sy.out, "synth_report", manifest_tsv(manifest) + "truth\t" + truth_json.dump() + "\n", report);
        } else if (*norm_cmd) {
            InputFile file = read_input(no.prices);
            CpiCatalog catalog = parse_catalog_csv(file.text);
            MonthKey from = parse_month_flag(no.from, "--from");
            MonthKey to = parse_month_flag(no.to, "--to");
            std::vector<std::string> wanted = no.series.empty() ? catalog.codes() : split_list(no.series);
            std::vector<std::pair<std::string, MonthlySeries>> columns;
            for (const auto& code : wanted) {
                columns.emplace_back(code, normalize_to_peak(catalog.get(code), from, to));
            }
            RunManifest manifest{"normalize"};
            manifest.inputs = {{"prices:" + file.path, file.digest}};
            manifest.config = {{"from", format_month(from)}, {"to", format_month(to)}};
            json cols = json::object();
            for (const auto& [code, s] : columns) {
                json values = json::array();
                for (double v : s.values()) values.push_back(v);
                cols[code] = json{{"start", format_month(s.start())}, {"values", values}};
            }
            json j{{"manifest", manifest_json(manifest)}, {"series", cols}};
            emit(no.out, "normalize_report", series_table_tsv(manifest, columns), j);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::NoFeasibleCandidate ? 3 : 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
