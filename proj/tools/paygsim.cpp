// Command-line front end: validate, project, simulate, entrants, estimate.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "payg/io.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::string> stochastic;
    std::optional<std::string> percentiles;
};

std::vector<double> parse_probes(std::string const& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        auto const* b = item.data();
        auto [ptr, ec] = std::from_chars(b, b + item.size(), v);
        if (ec != std::errc{} || ptr != b + item.size()) {
            throw payg::ValidationError("--percentiles: bad probe '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw payg::ValidationError("--percentiles: no probes given");
    }
    return out;
}

void apply(payg::ScenarioConfig& cfg, Overrides const& o)
{
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.reps) {
        cfg.replications = *o.reps;
    }
    if (o.stochastic) {
        cfg.flags = payg::parse_flags(*o.stochastic);
    }
    if (o.percentiles) {
        cfg.probes = parse_probes(*o.percentiles);
    }
    payg::validate(cfg);
}

std::filesystem::path output_dir(std::string const& flag, payg::ScenarioConfig const& cfg)
{
    return flag.empty() ? std::filesystem::path(cfg.output_dir) : std::filesystem::path(flag);
}

void print_written(std::vector<std::filesystem::path> const& files)
{
    for (auto const& f : files) {
        std::cout << "wrote " << f.string() << '\n';
    }
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stochastic projection of a pay-as-you-go professional pension fund"};
    app.set_version_flag("--version", std::string(payg::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string manifest_path;
    std::string out;
    std::string history_path;
    unsigned threads = 1;
    int study_lag = 5;
    int training_lag = 4;
    Overrides ov;

    auto add_config = [&](CLI::App* cmd) {
        return cmd->add_option("--config", config_path, "Scenario config (JSON)")
            ->check(CLI::ExistingFile);
    };
    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--seed", ov.seed, "Override the master seed");
        cmd->add_option("--reps", ov.reps, "Override the number of replications");
        cmd->add_option("--stochastic", ov.stochastic,
                        "Stochastic factors: comma list of entrants,mortality,returns, or all/none");
        cmd->add_option("--out", out, "Output directory");
        cmd->add_option("--threads", threads, "Worker threads (results do not depend on it)")
            ->check(CLI::Range(1u, 1024u));
    };

    auto* validate = app.add_subcommand("validate", "Load and validate a config");
    add_config(validate)->required();

    auto* project = app.add_subcommand("project", "Deterministic projection (fund ledger)");
    add_config(project)->required();
    project->add_option("--out", out, "Output directory");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation");
    auto* cfg_opt = add_config(simulate);
    auto* man_opt = simulate->add_option("--manifest", manifest_path,
                                         "Repeat the run described by a manifest")
                        ->check(CLI::ExistingFile);
    cfg_opt->excludes(man_opt);
    add_run_flags(simulate);
    simulate->add_option("--percentiles", ov.percentiles, "Comma list of percentile probes");

    auto* entrants = app.add_subcommand("entrants", "New-entrant expectations and simulation");
    add_config(entrants)->required();
    entrants->add_option("--seed", ov.seed, "Override the master seed");
    std::size_t entrant_reps = 0;
    entrants->add_option("--reps", entrant_reps, "Replications (0: closed form only)");
    entrants->add_option("--out", out, "Output directory");
    entrants->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));

    auto* estimate = app.add_subcommand("estimate", "Estimate transition moments from history");
    estimate->add_option("--history", history_path, "Education history CSV")
        ->required()
        ->check(CLI::ExistingFile);
    estimate->add_option("--study-lag", study_lag, "Years from enrolment to graduation");
    estimate->add_option("--training-lag", training_lag, "Years from graduation to profession");

    try {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    }
    catch (CLI::CallForVersion const& e) {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*validate) {
            auto const cfg = payg::load_config(config_path);
            std::cout << "ok " << payg::config_hash(cfg) << '\n';
        }
        else if (*project) {
            auto const cfg = payg::load_config(config_path);
            auto const start = std::chrono::steady_clock::now();
            auto const p = payg::run_deterministic_projection(payg::Projector(cfg.scenario));
            std::cout << payg::ledger_csv(p.ledger);
            print_written(payg::emit_projection(output_dir(out, cfg), cfg, p.ledger));
            std::fprintf(stderr, "projection: %.3f s\n", seconds_since(start));
        }
        else if (*simulate) {
            if (config_path.empty() && manifest_path.empty()) {
                throw payg::ValidationError("simulate: one of --config or --manifest is required");
            }
            auto cfg = manifest_path.empty() ? payg::load_config(config_path)
                                             : payg::replay_config(manifest_path);
            apply(cfg, ov);
            auto const start = std::chrono::steady_clock::now();
            payg::Projector const projector(cfg.scenario);
            auto const res = payg::run_simulation(projector, cfg.settings(threads), cfg.replications);
            print_written(payg::emit_simulation(output_dir(out, cfg), cfg, res));
            std::fprintf(stderr, "simulation: %zu replications [%s] in %.3f s\n", cfg.replications,
                         payg::flags_text(cfg.flags).c_str(), seconds_since(start));
        }
        else if (*entrants) {
            auto cfg = payg::load_config(config_path);
            apply(cfg, ov);
            auto const& sc = cfg.scenario;
            auto const rows =
                payg::run_entrants(sc.pep, sc.population, cfg.entrants_first_year,
                                   cfg.entrants_last_year, cfg.seed, entrant_reps, threads);
            std::cout << "year,male,female\n";
            for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
                double const m = entrant_reps ? rows[i].mean : rows[i].expected;
                double const f = entrant_reps ? rows[i + 1].mean : rows[i + 1].expected;
                std::printf("%d,%.1f,%.1f\n", rows[i].year, m, f);
            }
            auto const dir = output_dir(out, cfg);
            std::filesystem::create_directories(dir);
            payg::write_text_file(dir / "entrants.csv", payg::entrants_csv(rows));
            print_written({dir / "entrants.csv"});
        }
        else if (*estimate) {
            auto const hist = payg::load_education_history(payg::read_csv(history_path));
            payg::json j;
            for (payg::Sex s : payg::kSexes) {
                auto const est =
                    payg::estimate_transition_moments(hist[payg::index(s)], study_lag, training_lag);
                auto m = [](payg::SampleMoments const& x) {
                    return payg::json{{"mean", x.mean}, {"sigma", x.sigma}, {"count", x.count}};
                };
                j[std::string(payg::sex_name(s))] = {
                    {"p13", m(est.p13)}, {"p34", m(est.p34)}, {"p46", m(est.p46)}, {"p67", m(est.p67)}};
            }
            std::cout << j.dump(2) << '\n';
        }
    }
    catch (payg::ValidationError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
