#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "montecarlo.hpp"
#include "projection.hpp"

namespace payg {

using nlohmann::json;

/// Where the scenario's data came from; paths are absolute after loading.
struct ConfigSources {
    std::filesystem::path population;
    std::filesystem::path census;
    std::filesystem::path mortality;
    std::filesystem::path income_profiles;
    std::string subjective_column = "income";
    std::string integrative_column = "vat_sales";
    std::filesystem::path legacy_pension;
    std::vector<std::filesystem::path> benefit_profiles; ///< one per benefit type, empty if none

    friend bool operator==(ConfigSources const&, ConfigSources const&) = default;
};

struct ScenarioConfig {
    Scenario scenario;
    ConfigSources sources;
    int entrants_first_year = 0; ///< range reported by the `entrants` command
    int entrants_last_year = 0;
    std::uint64_t seed = 0;
    std::size_t replications = 1;
    std::vector<double> probes = default_probes();
    std::vector<int> report_years;
    StochasticFlags flags;
    std::string output_dir = "out";

    SimulationSettings settings(unsigned threads = 1) const
    {
        return {seed, flags, probes, report_years, threads};
    }

    friend bool operator==(ScenarioConfig const&, ScenarioConfig const&) = default;
};

namespace detail {

inline json const& member(json const& j, char const* key, std::string const& path)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(path + "." + key + ": missing");
    }
    return j.at(key);
}

template<class T>
T value(json const& j, char const* key, std::string const& path)
{
    try {
        return member(j, key, path).get<T>();
    }
    catch (json::exception const&) {
        throw ValidationError(path + "." + key + ": wrong type");
    }
}

template<class T>
T value_or(json const& j, char const* key, std::string const& path, T fallback)
{
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    return value<T>(j, key, path);
}

template<class T>
YearSchedule<T> schedule(json const& j, std::string const& path)
{
    try {
        if (j.is_number()) {
            return YearSchedule<T>::constant(j.get<T>());
        }
        if (j.is_array()) {
            std::vector<typename YearSchedule<T>::Step> steps;
            for (auto const& s : j) {
                steps.push_back({s.at("from").get<int>(), s.at("value").get<T>()});
            }
            return YearSchedule<T>(std::move(steps));
        }
    }
    catch (json::exception const&) {
    }
    catch (ValidationError const& e) {
        throw ValidationError(path + ": " + e.what());
    }
    throw ValidationError(path + ": expected a number or a list of {from, value} steps");
}

template<class T>
json schedule_json(YearSchedule<T> const& s)
{
    if (s.is_constant()) {
        return s.steps().front().value;
    }
    json out = json::array();
    for (auto const& step : s.steps()) {
        out.push_back({{"from", step.from}, {"value", step.value}});
    }
    return out;
}

/// Either one schedule for both sexes or {"male": ..., "female": ...}.
template<class T>
BySex<YearSchedule<T>> sex_schedule(json const& j, std::string const& path)
{
    if (j.is_object()) {
        return {schedule<T>(member(j, "male", path), path + ".male"),
                schedule<T>(member(j, "female", path), path + ".female")};
    }
    auto s = schedule<T>(j, path);
    return {s, s};
}

template<class T>
json sex_schedule_json(BySex<YearSchedule<T>> const& s)
{
    return {{"male", schedule_json(s[0])}, {"female", schedule_json(s[1])}};
}

inline std::filesystem::path resolve(std::filesystem::path const& base, std::string const& ref)
{
    std::filesystem::path p(ref);
    if (p.is_relative()) {
        p = base / p;
    }
    return std::filesystem::absolute(p).lexically_normal();
}

template<class F>
auto with_context(std::string const& path, F&& f)
{
    try {
        return f();
    }
    catch (CoverageError const& e) {
        throw CoverageError(path + ": " + e.what());
    }
    catch (ValidationError const& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline void require(bool ok, std::string const& message)
{
    if (!ok) {
        throw ValidationError(message);
    }
}

inline void require_covers(bool ok, std::string const& message)
{
    if (!ok) {
        throw CoverageError(message);
    }
}

inline TransitionFactor factor(json const& j, std::string const& path)
{
    TransitionFactor f;
    f.mean = schedule<double>(member(j, "mean", path), path + ".mean");
    f.sigma = schedule<double>(member(j, "sigma", path), path + ".sigma");
    return f;
}

} // namespace detail

/*!
 * Cross-field checks on a fully loaded config. Every message starts with the
 * path of the offending field.
 */
inline void validate(ScenarioConfig const& cfg)
{
    using detail::require;
    using detail::require_covers;
    auto const& sc = cfg.scenario;
    int const first = sc.first_year;
    int const last = sc.last_year;
    require(first <= last, "horizon: first_year must be <= last_year");
    require(cfg.entrants_first_year <= cfg.entrants_last_year,
            "entrants.report: first_year must be <= last_year");
    require(cfg.replications >= 1, "replications: must be >= 1");
    for (double p : cfg.probes) {
        require(p >= 0.0 && p <= 100.0, "percentiles: probes must lie in [0, 100]");
    }
    for (int y : cfg.report_years) {
        require(y >= first && y <= last,
                "report_years: " + std::to_string(y) + " outside horizon");
    }

    auto const& grid = sc.initial_grid;
    require(sc.entry_age >= grid.min_age() && sc.entry_age <= grid.max_age(),
            "demography.entry_age: must lie in [min_age, max_age]");

    validate(sc.pep);
    int const lag = sc.pep.total_lag();
    int const pop_first = std::min(first, cfg.entrants_first_year) - lag;
    int const pop_last = std::max(last, cfg.entrants_last_year) - lag;
    int const gap = sc.population.first_gap(pop_first, pop_last);
    require_covers(gap > pop_last, "entrants.population: missing year " + std::to_string(gap)
                                       + " (needs " + std::to_string(pop_first) + "-"
                                       + std::to_string(pop_last) + ")");
    for (Sex s : kSexes) {
        auto const& f = sc.pep.by_sex[index(s)];
        std::string const where = "entrants.transitions." + std::string(sex_name(s));
        int const start = std::min(first, cfg.entrants_first_year);
        require_covers(f.p13.mean.covers(start - lag) && f.p13.sigma.covers(start - lag),
                       where + ".p13: schedule does not cover " + std::to_string(start - lag));
        require_covers(f.p34.mean.covers(start - sc.pep.training_lag)
                           && f.p34.sigma.covers(start - sc.pep.training_lag),
                       where + ".p34: schedule does not cover "
                           + std::to_string(start - sc.pep.training_lag));
        require_covers(f.p46.mean.covers(start) && f.p46.sigma.covers(start),
                       where + ".p46: schedule does not cover " + std::to_string(start));
        require_covers(f.p67.mean.covers(start) && f.p67.sigma.covers(start),
                       where + ".p67: schedule does not cover " + std::to_string(start));
    }

    require(sc.mortality.base_year() <= first,
            "demography.mortality.base_year: must be <= horizon.first_year");

    auto const& econ = sc.economy;
    validate(econ.ar1, "economy.ar1");
    require(econ.initial_assets >= 0.0, "economy.initial_assets: must be >= 0");
    require(econ.admin_base >= 0.0, "economy.admin.base: must be >= 0");
    require(econ.admin_growth > -1.0, "economy.admin.growth: must be > -1");
    require_covers(econ.expected_return.covers(first),
                   "economy.expected_return: schedule does not cover " + std::to_string(first));
    int price_first = std::min({first, sc.contributions.subjective.base_year,
                                sc.contributions.integrative.base_year,
                                sc.benefits.legacy_base_year});
    for (auto const& t : sc.benefits.types) {
        if (t.formula == BenefitFormula::fixed_profile) {
            price_first = std::min(price_first, t.base_year);
        }
    }
    require_covers(econ.inflation.covers(price_first + 1),
                   "economy.inflation: schedule does not cover " + std::to_string(price_first + 1));

    auto const& contrib = sc.contributions;
    require(contrib.exemption_years >= 0, "contributions.exemption_years: must be >= 0");
    std::pair<char const*, ContributionStream const*> const streams[] = {
        {"subjective", &contrib.subjective}, {"integrative", &contrib.integrative}};
    for (auto const& [name, st] : streams) {
        std::string const where = std::string("contributions.") + name + ".rate";
        require_covers(st->rate.covers(first),
                       where + ": schedule does not cover " + std::to_string(first));
        require(st->rate.all_of([](double r) { return r >= 0.0 && r <= 1.0; }),
                where + ": rates must lie in [0, 1]");
    }

    auto const& ben = sc.benefits;
    require(ben.accrual_rate >= 0.0, "benefits.accrual_rate: must be >= 0");
    require(!ben.types.empty(), "benefits.types: at least one benefit type is required");
    for (std::size_t i = 0; i < ben.types.size(); ++i) {
        auto const& t = ben.types[i];
        std::string const where = "benefits.types[" + std::to_string(i) + "]";
        for (std::size_t j = 0; j < i; ++j) {
            require(ben.types[j].name != t.name, where + ".name: duplicate '" + t.name + "'");
        }
        if (t.formula == BenefitFormula::notional_account) {
            require(!t.conversion.empty(), where + ".conversion: required for notional_account");
            for (auto const& [age, c] : t.conversion) {
                require(c > 0.0, where + ".conversion: coefficients must be > 0 (age "
                                     + std::to_string(age) + ")");
            }
        }
    }

    auto const& reqs = sc.retirement.requirements;
    require(!reqs.empty(), "retirement: at least one requirement is required");
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        auto const& r = reqs[i];
        std::string const where = "retirement[" + std::to_string(i) + "]";
        bool known = false;
        for (auto const& t : ben.types) {
            known = known || t.name == r.benefit;
        }
        require(known, where + ".benefit: unknown benefit type '" + r.benefit + "'");
        for (Sex s : kSexes) {
            auto const& age = r.age_threshold[index(s)];
            auto const& sen = r.min_seniority[index(s)];
            require_covers(age.covers(first) && sen.covers(first),
                           where + ": schedules do not cover " + std::to_string(first));
            require(age.all_of([&](int v) { return v >= sc.entry_age; }),
                    where + ".age_threshold: must be >= entry_age");
            require(sen.all_of([](int v) { return v >= 0; }),
                    where + ".min_seniority: must be >= 0");
        }
        for (std::size_t j = 0; j < i; ++j) {
            require(!(reqs[j].age_threshold == r.age_threshold
                      && reqs[j].min_seniority == r.min_seniority),
                    where + ": duplicates the requirements of retirement["
                        + std::to_string(j) + "] with a different benefit");
        }
    }
}

/// Parses a config document; relative fixture paths resolve against base_dir.
inline ScenarioConfig parse_config(json const& j, std::filesystem::path const& base_dir)
{
    using namespace detail;
    ScenarioConfig cfg;
    auto& sc = cfg.scenario;
    auto& src = cfg.sources;

    auto const& horizon = member(j, "horizon", "");
    sc.first_year = value<int>(horizon, "first_year", "horizon");
    sc.last_year = value<int>(horizon, "last_year", "horizon");
    cfg.seed = value_or<std::uint64_t>(j, "seed", "", 0);
    cfg.replications = value_or<std::size_t>(j, "replications", "", 1000);
    cfg.probes = value_or<std::vector<double>>(j, "percentiles", "", default_probes());
    cfg.report_years = value_or<std::vector<int>>(j, "report_years", "", {});
    cfg.output_dir = value_or<std::string>(j, "output_dir", "", "out");
    if (j.contains("stochastic")) {
        auto const& st = j.at("stochastic");
        cfg.flags = {value<bool>(st, "entrants", "stochastic"),
                     value<bool>(st, "mortality", "stochastic"),
                     value<bool>(st, "returns", "stochastic")};
    }

    // demography
    auto const& demo = member(j, "demography", "");
    sc.entry_age = value<int>(demo, "entry_age", "demography");
    int const min_age = value<int>(demo, "min_age", "demography");
    int const max_age = value<int>(demo, "max_age", "demography");
    require(min_age <= max_age, "demography: min_age must be <= max_age");
    require(sc.entry_age >= min_age && sc.entry_age <= max_age,
            "demography.entry_age: must lie in [min_age, max_age]");
    src.census = resolve(base_dir, value<std::string>(demo, "initial_population", "demography"));
    sc.initial_grid = with_context("demography.initial_population", [&] {
        return load_census(read_csv(src.census), min_age, max_age, sc.first_year, sc.entry_age);
    });
    auto const& mort = member(demo, "mortality", "demography");
    src.mortality = resolve(base_dir, value<std::string>(mort, "file", "demography.mortality"));
    int const mort_base = value<int>(mort, "base_year", "demography.mortality");
    sc.mortality = with_context("demography.mortality", [&] {
        return load_mortality(read_csv(src.mortality), min_age, max_age, mort_base);
    });

    // entrants
    auto const& ent = member(j, "entrants", "");
    sc.pep.study_lag = value<int>(ent, "study_lag", "entrants");
    sc.pep.training_lag = value<int>(ent, "training_lag", "entrants");
    auto const band = value_or<std::vector<int>>(ent, "age_band", "entrants", {18, 25});
    require(band.size() == 2, "entrants.age_band: expected [m, M]");
    src.population = resolve(base_dir, value<std::string>(ent, "population", "entrants"));
    sc.population = with_context("entrants.population", [&] {
        return load_population(read_csv(src.population), band[0], band[1]);
    });
    auto const& trans = member(ent, "transitions", "entrants");
    for (Sex s : kSexes) {
        std::string const key(sex_name(s));
        std::string const path = "entrants.transitions." + key;
        auto const& f = member(trans, key.c_str(), "entrants.transitions");
        auto& set = sc.pep.by_sex[index(s)];
        set.p13 = factor(member(f, "p13", path), path + ".p13");
        set.p34 = factor(member(f, "p34", path), path + ".p34");
        set.p46 = factor(member(f, "p46", path), path + ".p46");
        set.p67 = factor(member(f, "p67", path), path + ".p67");
    }
    cfg.entrants_first_year = sc.first_year;
    cfg.entrants_last_year = sc.last_year;
    if (ent.contains("report")) {
        auto const& rep = ent.at("report");
        cfg.entrants_first_year = value<int>(rep, "first_year", "entrants.report");
        cfg.entrants_last_year = value<int>(rep, "last_year", "entrants.report");
    }

    // retirement
    auto const& ret = member(j, "retirement", "");
    require(ret.is_array(), "retirement: expected a list of requirements");
    for (std::size_t i = 0; i < ret.size(); ++i) {
        std::string const path = "retirement[" + std::to_string(i) + "]";
        RetirementRequirement r;
        r.benefit = value<std::string>(ret[i], "benefit", path);
        r.age_threshold = sex_schedule<int>(member(ret[i], "age_threshold", path),
                                            path + ".age_threshold");
        r.min_seniority = sex_schedule<int>(member(ret[i], "min_seniority", path),
                                            path + ".min_seniority");
        sc.retirement.requirements.push_back(std::move(r));
    }

    // contributions
    auto const& con = member(j, "contributions", "");
    auto& rule = sc.contributions;
    rule.exemption_years = value<int>(con, "exemption_years", "contributions");
    src.income_profiles = resolve(base_dir, value<std::string>(con, "profiles", "contributions"));
    int const profile_base = value<int>(con, "base_year", "contributions");
    auto const profiles = with_context("contributions.profiles",
                                       [&] { return read_csv(src.income_profiles); });
    auto const& subj = member(con, "subjective", "contributions");
    auto const& integ = member(con, "integrative", "contributions");
    src.subjective_column = value_or<std::string>(subj, "column", "contributions.subjective", "income");
    src.integrative_column =
        value_or<std::string>(integ, "column", "contributions.integrative", "vat_sales");
    rule.subjective.rate =
        schedule<double>(member(subj, "rate", "contributions.subjective"), "contributions.subjective.rate");
    rule.integrative.rate = schedule<double>(member(integ, "rate", "contributions.integrative"),
                                             "contributions.integrative.rate");
    rule.subjective.base_year = rule.integrative.base_year = profile_base;
    rule.subjective.base = with_context("contributions.profiles", [&] {
        return load_profile(profiles, src.subjective_column, min_age, max_age);
    });
    rule.integrative.base = with_context("contributions.profiles", [&] {
        return load_profile(profiles, src.integrative_column, min_age, max_age);
    });

    // benefits
    auto const& ben = member(j, "benefits", "");
    sc.benefits.accrual_rate = value<double>(ben, "accrual_rate", "benefits");
    auto const& legacy = member(ben, "legacy", "benefits");
    src.legacy_pension = resolve(base_dir, value<std::string>(legacy, "file", "benefits.legacy"));
    sc.benefits.legacy_base_year = value<int>(legacy, "base_year", "benefits.legacy");
    sc.benefits.legacy = with_context("benefits.legacy", [&] {
        return load_profile(read_csv(src.legacy_pension), "amount", min_age, max_age);
    });
    auto const& types = member(ben, "types", "benefits");
    require(types.is_array(), "benefits.types: expected a list");
    for (std::size_t i = 0; i < types.size(); ++i) {
        std::string const path = "benefits.types[" + std::to_string(i) + "]";
        BenefitType t;
        t.name = value<std::string>(types[i], "name", path);
        auto const formula = value<std::string>(types[i], "formula", path);
        if (formula == "fixed_profile") {
            t.formula = BenefitFormula::fixed_profile;
            auto const file = resolve(base_dir, value<std::string>(types[i], "profile", path));
            t.base_year = value<int>(types[i], "base_year", path);
            t.profile = with_context(path + ".profile", [&] {
                return load_profile(read_csv(file), "amount", min_age, max_age);
            });
            src.benefit_profiles.push_back(file);
        }
        else if (formula == "notional_account") {
            t.formula = BenefitFormula::notional_account;
            auto const& conv = member(types[i], "conversion", path);
            require(conv.is_object(), path + ".conversion: expected {age: coefficient}");
            for (auto const& [age, c] : conv.items()) {
                try {
                    t.conversion[std::stoi(age)] = c.get<double>();
                }
                catch (std::exception const&) {
                    throw ValidationError(path + ".conversion: bad entry '" + age + "'");
                }
            }
            src.benefit_profiles.emplace_back();
        }
        else {
            throw ValidationError(path + ".formula: expected fixed_profile or notional_account");
        }
        sc.benefits.types.push_back(std::move(t));
    }

    // economy
    auto const& eco = member(j, "economy", "");
    auto& econ = sc.economy;
    econ.initial_assets = value<double>(eco, "initial_assets", "economy");
    auto const& admin = member(eco, "admin", "economy");
    econ.admin_base = value<double>(admin, "base", "economy.admin");
    econ.admin_growth = value<double>(admin, "growth", "economy.admin");
    econ.admin_base_year = value<int>(admin, "base_year", "economy.admin");
    econ.inflation = schedule<double>(member(eco, "inflation", "economy"), "economy.inflation");
    econ.expected_return =
        schedule<double>(member(eco, "expected_return", "economy"), "economy.expected_return");
    auto const& ar1 = member(eco, "ar1", "economy");
    econ.ar1 = {value<double>(ar1, "phi", "economy.ar1"), value<double>(ar1, "sigma", "economy.ar1"),
                value_or<double>(ar1, "x0", "economy.ar1", 0.0)};

    validate(cfg);
    return cfg;
}

inline ScenarioConfig load_config(std::filesystem::path const& path)
{
    auto const text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    }
    catch (json::parse_error const& e) {
        throw ValidationError(path.string() + ": parse error: " + e.what());
    }
    return parse_config(j, std::filesystem::absolute(path).parent_path());
}

/// Canonical config document; fixture paths are absolute.
inline json to_json(ScenarioConfig const& cfg)
{
    using detail::schedule_json;
    using detail::sex_schedule_json;
    auto const& sc = cfg.scenario;
    auto const& src = cfg.sources;
    json j;
    j["horizon"] = {{"first_year", sc.first_year}, {"last_year", sc.last_year}};
    j["seed"] = cfg.seed;
    j["replications"] = cfg.replications;
    j["percentiles"] = cfg.probes;
    j["report_years"] = cfg.report_years;
    j["output_dir"] = cfg.output_dir;
    j["stochastic"] = {{"entrants", cfg.flags.entrants},
                       {"mortality", cfg.flags.mortality},
                       {"returns", cfg.flags.returns}};
    j["demography"] = {
        {"entry_age", sc.entry_age},
        {"min_age", sc.initial_grid.min_age()},
        {"max_age", sc.initial_grid.max_age()},
        {"initial_population", src.census.string()},
        {"mortality", {{"file", src.mortality.string()}, {"base_year", sc.mortality.base_year()}}}};

    json trans;
    for (Sex s : kSexes) {
        auto const& set = sc.pep.by_sex[index(s)];
        auto fj = [](TransitionFactor const& f) {
            return json{{"mean", schedule_json(f.mean)}, {"sigma", schedule_json(f.sigma)}};
        };
        trans[std::string(sex_name(s))] = {
            {"p13", fj(set.p13)}, {"p34", fj(set.p34)}, {"p46", fj(set.p46)}, {"p67", fj(set.p67)}};
    }
    j["entrants"] = {{"population", src.population.string()},
                     {"age_band", {sc.population.min_age(), sc.population.max_age()}},
                     {"study_lag", sc.pep.study_lag},
                     {"training_lag", sc.pep.training_lag},
                     {"report",
                      {{"first_year", cfg.entrants_first_year},
                       {"last_year", cfg.entrants_last_year}}},
                     {"transitions", trans}};

    json ret = json::array();
    for (auto const& r : sc.retirement.requirements) {
        ret.push_back({{"benefit", r.benefit},
                       {"age_threshold", sex_schedule_json(r.age_threshold)},
                       {"min_seniority", sex_schedule_json(r.min_seniority)}});
    }
    j["retirement"] = ret;

    auto const& con = sc.contributions;
    j["contributions"] = {
        {"exemption_years", con.exemption_years},
        {"profiles", src.income_profiles.string()},
        {"base_year", con.subjective.base_year},
        {"subjective", {{"rate", schedule_json(con.subjective.rate)}, {"column", src.subjective_column}}},
        {"integrative",
         {{"rate", schedule_json(con.integrative.rate)}, {"column", src.integrative_column}}}};

    json types = json::array();
    for (std::size_t i = 0; i < sc.benefits.types.size(); ++i) {
        auto const& t = sc.benefits.types[i];
        json tj = {{"name", t.name}, {"formula", std::string(to_string(t.formula))}};
        if (t.formula == BenefitFormula::fixed_profile) {
            tj["profile"] = src.benefit_profiles.at(i).string();
            tj["base_year"] = t.base_year;
        }
        else {
            json conv = json::object();
            for (auto const& [age, c] : t.conversion) {
                conv[std::to_string(age)] = c;
            }
            tj["conversion"] = conv;
        }
        types.push_back(tj);
    }
    j["benefits"] = {{"accrual_rate", sc.benefits.accrual_rate},
                     {"legacy",
                      {{"file", src.legacy_pension.string()},
                       {"base_year", sc.benefits.legacy_base_year}}},
                     {"types", types}};

    auto const& econ = sc.economy;
    j["economy"] = {{"initial_assets", econ.initial_assets},
                    {"admin",
                     {{"base", econ.admin_base},
                      {"growth", econ.admin_growth},
                      {"base_year", econ.admin_base_year}}},
                    {"inflation", schedule_json(econ.inflation)},
                    {"expected_return", schedule_json(econ.expected_return)},
                    {"ar1", {{"phi", econ.ar1.phi}, {"sigma", econ.ar1.sigma}, {"x0", econ.ar1.x0}}}};
    return j;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull)
{
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

/*!
 * Hash of the config content: the canonical document with every fixture path
 * replaced by the hash of the file's bytes, so moving the files does not
 * change it but editing them does.
 */
inline std::string config_hash(ScenarioConfig const& cfg)
{
    json j = to_json(cfg);
    auto content = [](std::filesystem::path const& p) {
        return hex64(fnv1a(read_text_file(p)));
    };
    j["demography"]["initial_population"] = content(cfg.sources.census);
    j["demography"]["mortality"]["file"] = content(cfg.sources.mortality);
    j["entrants"]["population"] = content(cfg.sources.population);
    j["contributions"]["profiles"] = content(cfg.sources.income_profiles);
    j["benefits"]["legacy"]["file"] = content(cfg.sources.legacy_pension);
    for (std::size_t i = 0; i < cfg.sources.benefit_profiles.size(); ++i) {
        if (!cfg.sources.benefit_profiles[i].empty()) {
            j["benefits"]["types"][i]["profile"] = content(cfg.sources.benefit_profiles[i]);
        }
    }
    return hex64(fnv1a(j.dump()));
}

} // namespace payg
