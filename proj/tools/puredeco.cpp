// puredeco.cpp: Command-line front end
//
//   puredeco evolve  --config FILE --out FILE.csv [--KEY VALUE ...]
//   puredeco figures {fig1|fig2} --out DIR [--config FILE] [--KEY VALUE ...]
//   puredeco oracle  --config FILE --out FILE.csv [--KEY VALUE ...]
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 oracle
// tolerance exceeded.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "puredeco/errors.hpp"
#include "puredeco/report.hpp"
#include "puredeco/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kNumerical = 2, kTolerance = 3 };

struct Overrides {
    std::map<std::string, std::string> values;
    std::vector<std::string> set;  // KEY=VALUE from --set

    void attach(CLI::App* cmd)
    {
        for (const auto& key : puredeco::config_keys()) {
            cmd->add_option("--" + key, values[key], "override config key '" + key + "'");
        }
        cmd->add_option("--set", set, "override any config key, KEY=VALUE (repeatable)");
    }

    void apply(puredeco::ScenarioConfig& cfg) const
    {
        for (const auto& [k, v] : values) {
            if (!v.empty()) puredeco::apply_setting(cfg, k, v);
        }
        for (const auto& kv : set) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw puredeco::ValidationError("--set expects KEY=VALUE, got '" + kv + "'");
            puredeco::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
    }
};

puredeco::ScenarioConfig make_config(const std::string& path, const Overrides& ov, puredeco::ScenarioConfig base)
{
    puredeco::ScenarioConfig cfg = path.empty() ? base : puredeco::load_config(path, base);
    ov.apply(cfg);
    cfg.validate();
    return cfg;
}

int fail(int code, const char* kind, const std::exception& e)
{
    std::fprintf(stderr, "puredeco: %s: %s\n", kind, e.what());
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Thermodynamics of pure decoherence: local and global ledgers for qubit dephasing"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::string figure;

    Overrides evolve_ov, figures_ov, oracle_ov;

    auto* evolve = app.add_subcommand("evolve", "evolve the model and write the thermodynamic trace as CSV");
    evolve->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
    evolve->add_option("--out", out_path, "output CSV")->required();
    evolve_ov.attach(evolve);

    auto* figures = app.add_subcommand("figures", "write figure data (CSV), metadata and SVG");
    figures->add_option("which", figure, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
    figures->add_option("--out", out_path, "output directory")->required();
    figures->add_option("--config", config_path, "optional config file")->check(CLI::ExistingFile);
    figures_ov.attach(figures);

    auto* oracle = app.add_subcommand("oracle", "compare closed forms with exact finite-bath evolution");
    oracle->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
    oracle->add_option("--out", out_path, "output CSV")->required();
    oracle_ov.attach(oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (evolve->parsed()) {
            const auto cfg = make_config(config_path, evolve_ov, {});
            const auto trace = puredeco::run_scenario(cfg);
            puredeco::write_trace_csv(out_path, trace);
            return kOk;
        }
        if (figures->parsed()) {
            const auto cfg = make_config(config_path, figures_ov, {});
            const auto which = figure == "fig1" ? puredeco::Figure::EntropyProduction : puredeco::Figure::FirstLaw;
            const auto res = puredeco::reproduce_figure(which, out_path, cfg);
            for (const auto& f : res.files) std::cout << f.string() << '\n';
            return kOk;
        }
        if (oracle->parsed()) {
            const auto cfg = make_config(config_path, oracle_ov, puredeco::ScenarioConfig::oracle_defaults());
            const auto report = puredeco::oracle_run(cfg);
            puredeco::write_oracle_csv(out_path, report);
            puredeco::write_oracle_summary(std::cout, report);
            return report.passed() ? kOk : kTolerance;
        }
    } catch (const puredeco::NumericalError& e) {
        return fail(kNumerical, "numerical failure", e);
    } catch (const puredeco::DomainError& e) {
        return fail(kNumerical, "numerical failure", e);
    } catch (const puredeco::ValidationError& e) {
        return fail(kInvalid, "invalid input", e);
    } catch (const puredeco::UnsupportedError& e) {
        return fail(kInvalid, "unsupported", e);
    } catch (const std::exception& e) {
        return fail(kInvalid, "error", e);
    }
    return kInvalid;
}
