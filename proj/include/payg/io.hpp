#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "csv.hpp"
#include "montecarlo.hpp"

#ifndef PAYG_VERSION
#define PAYG_VERSION "1.0.0"
#endif

namespace payg {

inline constexpr char const* kVersion = PAYG_VERSION;

//---------------------------------------------------------------------------//
// Formatting
//---------------------------------------------------------------------------//

/// Shortest text that parses back to the same double.
inline std::string format_number(double v)
{
    if (v == 0.0) {
        return "0";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

/// Exact decimal euros with two places.
inline std::string format_cents(std::int64_t cents)
{
    bool const neg = cents < 0;
    auto const mag = neg ? -static_cast<std::uint64_t>(cents) : static_cast<std::uint64_t>(cents);
    auto const frac = mag % 100;
    std::string out = neg ? "-" : "";
    out += std::to_string(mag / 100);
    out += '.';
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
    return out;
}

inline std::int64_t parse_cents(std::string_view text, std::string const& where)
{
    bool neg = false;
    if (!text.empty() && text.front() == '-') {
        neg = true;
        text.remove_prefix(1);
    }
    auto const dot = text.find('.');
    if (dot == std::string_view::npos || text.size() - dot != 3) {
        throw ValidationError(where + ": expected an amount with two decimals");
    }
    std::int64_t whole = 0;
    std::int64_t frac = 0;
    auto const w = std::from_chars(text.data(), text.data() + dot, whole);
    auto const f = std::from_chars(text.data() + dot + 1, text.data() + text.size(), frac);
    if (w.ec != std::errc{} || w.ptr != text.data() + dot || f.ec != std::errc{}
        || f.ptr != text.data() + text.size()) {
        throw ValidationError(where + ": bad amount '" + std::string(text) + "'");
    }
    std::int64_t const cents = whole * 100 + frac;
    return neg ? -cents : cents;
}

inline void write_text_file(std::filesystem::path const& path, std::string const& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(path.string() + ": cannot open for writing");
    }
    out << content;
    out.close();
    if (!out) {
        throw Error(path.string() + ": write failed");
    }
}

inline std::string flags_text(StochasticFlags f)
{
    std::string out;
    auto add = [&](bool on, char const* name) {
        if (on) {
            out += out.empty() ? "" : ",";
            out += name;
        }
    };
    add(f.entrants, "entrants");
    add(f.mortality, "mortality");
    add(f.returns, "returns");
    return out.empty() ? "none" : out;
}

/// Comma-separated factor names; "none" and "all" are accepted too.
inline StochasticFlags parse_flags(std::string_view text)
{
    StochasticFlags f;
    if (text == "none" || text.empty()) {
        return f;
    }
    if (text == "all") {
        return StochasticFlags::all();
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto const end = std::min(text.find(',', pos), text.size());
        auto const name = text.substr(pos, end - pos);
        if (name == "entrants") {
            f.entrants = true;
        }
        else if (name == "mortality") {
            f.mortality = true;
        }
        else if (name == "returns") {
            f.returns = true;
        }
        else {
            throw ValidationError("--stochastic: unknown factor '" + std::string(name) + "'");
        }
        pos = end + 1;
    }
    return f;
}

inline json flags_json(StochasticFlags f)
{
    return {{"entrants", f.entrants}, {"mortality", f.mortality}, {"returns", f.returns}};
}

//---------------------------------------------------------------------------//
// Ledger
//---------------------------------------------------------------------------//

/// Display ledger: each column independently rounded to thousands.
inline std::string ledger_csv(std::vector<LedgerRow> const& rows)
{
    std::ostringstream os;
    os << "Year,A,B,C,D,E,F,G,H,I\n";
    for (auto const& r : rows) {
        os << r.year;
        for (Money m : {r.value_start, r.subjective, r.integrative, r.pensions, r.pension_balance,
                        r.investment_returns, r.admin, r.total_balance, r.value_end}) {
            os << ',' << m.thousands();
        }
        os << '\n';
    }
    return os.str();
}

/// Full-precision ledger in euros, plus the year's return rate.
inline std::string ledger_raw_csv(std::vector<LedgerRow> const& rows)
{
    std::ostringstream os;
    os << "year,value_start,subjective,integrative,pensions,pension_balance,"
          "investment_returns,admin,total_balance,value_end,rate\n";
    for (auto const& r : rows) {
        os << r.year;
        for (Money m : {r.value_start, r.subjective, r.integrative, r.pensions, r.pension_balance,
                        r.investment_returns, r.admin, r.total_balance, r.value_end}) {
            os << ',' << format_cents(m.cents());
        }
        os << ',' << format_number(r.rate) << '\n';
    }
    return os.str();
}

struct DisplayLedgerRow {
    int year = 0;
    std::array<std::int64_t, 9> columns{}; ///< A..I in thousands
};

inline std::vector<DisplayLedgerRow> read_ledger_csv(CsvTable const& t)
{
    static constexpr char const* names[] = {"A", "B", "C", "D", "E", "F", "G", "H", "I"};
    std::vector<DisplayLedgerRow> rows;
    auto const year = t.column("Year");
    std::array<std::size_t, 9> cols{};
    for (std::size_t i = 0; i < 9; ++i) {
        cols[i] = t.column(names[i]);
    }
    for (std::size_t r = 0; r < t.size(); ++r) {
        DisplayLedgerRow row;
        row.year = t.integer(r, year);
        for (std::size_t i = 0; i < 9; ++i) {
            row.columns[i] = static_cast<std::int64_t>(t.number(r, cols[i]));
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<LedgerRow> read_ledger_raw_csv(CsvTable const& t)
{
    std::vector<LedgerRow> rows;
    auto const c = [&](char const* n) { return t.column(n); };
    std::size_t const cy = c("year"), ca = c("value_start"), cb = c("subjective"),
                      cc = c("integrative"), cd = c("pensions"), ce = c("pension_balance"),
                      cf = c("investment_returns"), cg = c("admin"), ch = c("total_balance"),
                      ci = c("value_end"), cr = c("rate");
    for (std::size_t r = 0; r < t.size(); ++r) {
        auto m = [&](std::size_t col) {
            return Money::from_cents(parse_cents(t.text(r, col), t.where(r)));
        };
        LedgerRow row;
        row.year = t.integer(r, cy);
        row.value_start = m(ca);
        row.subjective = m(cb);
        row.integrative = m(cc);
        row.pensions = m(cd);
        row.pension_balance = m(ce);
        row.investment_returns = m(cf);
        row.admin = m(cg);
        row.total_balance = m(ch);
        row.value_end = m(ci);
        row.rate = t.number(r, cr);
        rows.push_back(row);
    }
    return rows;
}

//---------------------------------------------------------------------------//
// Fan chart and moments
//---------------------------------------------------------------------------//

inline std::string fan_chart_csv(FanChart const& fan)
{
    std::ostringstream os;
    os << "series,year,probe,value\n";
    for (Series s : kSeries) {
        for (std::size_t y = 0; y < fan.years.size(); ++y) {
            auto const& row = fan.at(s, y);
            for (std::size_t p = 0; p < fan.probes.size(); ++p) {
                os << to_string(s) << ',' << fan.years[y] << ',' << format_number(fan.probes[p])
                   << ',' << format_number(row[p]) << '\n';
            }
        }
    }
    return os.str();
}

inline FanChart read_fan_chart_csv(CsvTable const& t)
{
    FanChart fan;
    auto const cs = t.column("series"), cy = t.column("year"), cp = t.column("probe"),
               cv = t.column("value");
    std::map<std::pair<int, int>, std::map<double, double>> cells; // (series, year) -> probe
    std::set<int> years;
    std::set<double> probes;
    for (std::size_t r = 0; r < t.size(); ++r) {
        auto const s = static_cast<int>(parse_series(t.text(r, cs)));
        int const y = t.integer(r, cy);
        double const p = t.number(r, cp);
        cells[{s, y}][p] = t.number(r, cv);
        years.insert(y);
        probes.insert(p);
    }
    fan.years.assign(years.begin(), years.end());
    fan.probes.assign(probes.begin(), probes.end());
    for (Series s : kSeries) {
        auto& dest = fan.values[static_cast<std::size_t>(s)];
        for (int y : fan.years) {
            std::vector<double> row;
            auto const it = cells.find({static_cast<int>(s), y});
            for (double p : fan.probes) {
                if (it == cells.end() || !it->second.contains(p)) {
                    throw ValidationError(t.source() + ": missing fan-chart cell " +
                                          std::string(to_string(s)) + " " + std::to_string(y));
                }
                row.push_back(it->second.at(p));
            }
            dest.push_back(std::move(row));
        }
    }
    return fan;
}

inline std::string moments_csv(MomentsTable const& m)
{
    std::ostringstream os;
    os << "series,year,statistic,value\n";
    for (Series s : kSeries) {
        if (m.values[static_cast<std::size_t>(s)].empty()) {
            continue;
        }
        for (std::size_t y = 0; y < m.years.size(); ++y) {
            auto const& v = m.at(s, y);
            auto const head = std::string(to_string(s)) + ',' + std::to_string(m.years[y]) + ',';
            os << head << "mean," << format_number(v.mean) << '\n';
            os << head << "std," << format_number(v.std) << '\n';
            os << head << "skewness," << format_number(v.skewness) << '\n';
            os << head << "excess_kurtosis," << format_number(v.excess_kurtosis) << '\n';
            os << head << "degenerate," << (v.degenerate ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

inline MomentsTable read_moments_csv(CsvTable const& t)
{
    MomentsTable out;
    auto const cs = t.column("series"), cy = t.column("year"), cst = t.column("statistic"),
               cv = t.column("value");
    std::map<std::pair<int, int>, Moments> cells;
    std::set<int> years;
    for (std::size_t r = 0; r < t.size(); ++r) {
        auto const s = static_cast<int>(parse_series(t.text(r, cs)));
        int const y = t.integer(r, cy);
        auto const stat = t.text(r, cst);
        double const v = t.number(r, cv);
        auto& m = cells[{s, y}];
        years.insert(y);
        if (stat == "mean") {
            m.mean = v;
        }
        else if (stat == "std") {
            m.std = v;
        }
        else if (stat == "skewness") {
            m.skewness = v;
        }
        else if (stat == "excess_kurtosis") {
            m.excess_kurtosis = v;
        }
        else if (stat == "degenerate") {
            m.degenerate = v != 0.0;
        }
        else {
            throw ValidationError(t.where(r) + ": unknown statistic '" + std::string(stat) + "'");
        }
    }
    out.years.assign(years.begin(), years.end());
    for (Series s : kSeries) {
        for (int y : out.years) {
            auto const it = cells.find({static_cast<int>(s), y});
            if (it != cells.end()) {
                out.values[static_cast<std::size_t>(s)].push_back(it->second);
            }
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
// Entrants
//---------------------------------------------------------------------------//

inline std::string entrants_csv(std::vector<EntrantsRow> const& rows)
{
    std::ostringstream os;
    os << "year,sex,expected,variance,replications,mean,std,std_error\n";
    for (auto const& r : rows) {
        os << r.year << ',' << to_string(r.sex) << ',' << format_number(r.expected) << ','
           << format_number(r.variance) << ',' << r.replications << ',' << format_number(r.mean)
           << ',' << format_number(r.std) << ',' << format_number(r.std_error) << '\n';
    }
    return os.str();
}

inline std::vector<EntrantsRow> read_entrants_csv(CsvTable const& t)
{
    std::vector<EntrantsRow> rows;
    auto const cy = t.column("year"), cs = t.column("sex"), ce = t.column("expected"),
               cvar = t.column("variance"), cn = t.column("replications"), cm = t.column("mean"),
               csd = t.column("std"), cse = t.column("std_error");
    for (std::size_t r = 0; r < t.size(); ++r) {
        EntrantsRow row;
        row.year = t.integer(r, cy);
        row.sex = parse_sex(t.text(r, cs));
        row.expected = t.number(r, ce);
        row.variance = t.number(r, cvar);
        row.replications = static_cast<std::size_t>(t.integer(r, cn));
        row.mean = t.number(r, cm);
        row.std = t.number(r, csd);
        row.std_error = t.number(r, cse);
        rows.push_back(row);
    }
    return rows;
}

//---------------------------------------------------------------------------//
// Summary and manifest
//---------------------------------------------------------------------------//

/// What is needed to repeat a simulation bit for bit.
struct RunManifest {
    std::string version = kVersion;
    std::uint64_t seed = 0;
    std::size_t replications = 0;
    StochasticFlags flags;
    std::vector<double> probes;
    std::vector<int> report_years;
    std::string config_hash;
    std::string config_file = "config.json"; ///< relative to the manifest

    friend bool operator==(RunManifest const&, RunManifest const&) = default;
};

inline RunManifest make_manifest(ScenarioConfig const& cfg)
{
    RunManifest m;
    m.seed = cfg.seed;
    m.replications = cfg.replications;
    m.flags = cfg.flags;
    m.probes = cfg.probes;
    m.report_years = cfg.report_years;
    m.config_hash = config_hash(cfg);
    return m;
}

inline json to_json(RunManifest const& m)
{
    return {{"version", m.version},
            {"seed", m.seed},
            {"replications", m.replications},
            {"stochastic", flags_json(m.flags)},
            {"percentiles", m.probes},
            {"report_years", m.report_years},
            {"config_hash", m.config_hash},
            {"config", m.config_file}};
}

inline RunManifest read_manifest(std::filesystem::path const& path)
{
    json j;
    try {
        j = json::parse(read_text_file(path));
    }
    catch (json::parse_error const& e) {
        throw ValidationError(path.string() + ": parse error: " + e.what());
    }
    std::string const where = path.string();
    RunManifest m;
    m.version = detail::value<std::string>(j, "version", where);
    m.seed = detail::value<std::uint64_t>(j, "seed", where);
    m.replications = detail::value<std::size_t>(j, "replications", where);
    auto const& st = detail::member(j, "stochastic", where);
    m.flags = {detail::value<bool>(st, "entrants", where + ".stochastic"),
               detail::value<bool>(st, "mortality", where + ".stochastic"),
               detail::value<bool>(st, "returns", where + ".stochastic")};
    m.probes = detail::value<std::vector<double>>(j, "percentiles", where);
    m.report_years = detail::value<std::vector<int>>(j, "report_years", where);
    m.config_hash = detail::value<std::string>(j, "config_hash", where);
    m.config_file = detail::value<std::string>(j, "config", where);
    return m;
}

/*!
 * Config of a manifest replay: the config stored next to the manifest with
 * the run settings of the manifest. The content hash must still match.
 */
inline ScenarioConfig replay_config(std::filesystem::path const& manifest_path)
{
    auto const m = read_manifest(manifest_path);
    auto cfg = load_config(std::filesystem::absolute(manifest_path).parent_path() / m.config_file);
    cfg.seed = m.seed;
    cfg.replications = m.replications;
    cfg.flags = m.flags;
    cfg.probes = m.probes;
    cfg.report_years = m.report_years;
    validate(cfg);
    if (config_hash(cfg) != m.config_hash) {
        throw ValidationError(manifest_path.string()
                              + ": config_hash does not match the stored config or its fixtures");
    }
    return cfg;
}

inline json simulation_summary(ScenarioConfig const& cfg, SimulationResult const& res)
{
    json j;
    j["version"] = kVersion;
    j["seed"] = cfg.seed;
    j["replications"] = res.replications;
    j["stochastic"] = flags_json(cfg.flags);
    j["horizon"] = {{"first_year", res.years.front()}, {"last_year", res.years.back()}};

    // The fund stays positive at the 99.9% level when the 0.1st percentile
    // of the 1 January value is positive in every year.
    auto const& fund = res.samples[static_cast<std::size_t>(Series::fund_value)];
    double lowest = 0.0;
    int lowest_year = res.years.front();
    for (std::size_t y = 0; y < res.years.size(); ++y) {
        double const p = percentile(fund[y], 0.1);
        if (y == 0 || p < lowest) {
            lowest = p;
            lowest_year = res.years[y];
        }
    }
    j["fund_value"] = {{"p0_1_min", lowest},
                       {"p0_1_min_year", lowest_year},
                       {"positive_at_99_9", lowest > 0.0}};

    auto const& pb = res.samples[static_cast<std::size_t>(Series::pension_balance)];
    json negative = nullptr;
    for (std::size_t y = 0; y < res.years.size(); ++y) {
        if (percentile(pb[y], 50.0) < 0.0) {
            negative = res.years[y];
            break;
        }
    }
    j["pension_balance"] = {{"median_first_negative_year", negative}};

    json mom = json::object();
    for (Series s : kSeries) {
        auto const& vals = res.moments.values[static_cast<std::size_t>(s)];
        if (vals.empty()) {
            continue;
        }
        json per_year = json::object();
        for (std::size_t y = 0; y < res.moments.years.size(); ++y) {
            auto const& m = vals[y];
            per_year[std::to_string(res.moments.years[y])] = {
                {"mean", m.mean},
                {"std", m.std},
                {"skewness", m.skewness},
                {"excess_kurtosis", m.excess_kurtosis},
                {"degenerate", m.degenerate}};
        }
        mom[std::string(to_string(s))] = per_year;
    }
    j["moments"] = mom;
    return j;
}

//---------------------------------------------------------------------------//
// Emission
//---------------------------------------------------------------------------//

/// Files of a simulation run; returns the paths written.
inline std::vector<std::filesystem::path>
emit_simulation(std::filesystem::path const& dir, ScenarioConfig const& cfg,
                SimulationResult const& res)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto put = [&](char const* name, std::string const& content) {
        write_text_file(dir / name, content);
        written.push_back(dir / name);
    };
    put("fan_chart.csv", fan_chart_csv(res.fan));
    put("moments.csv", moments_csv(res.moments));
    put("summary.json", simulation_summary(cfg, res).dump(2) + "\n");
    put("config.json", to_json(cfg).dump(2) + "\n");
    put("manifest.json", to_json(make_manifest(cfg)).dump(2) + "\n");
    return written;
}

inline std::vector<std::filesystem::path>
emit_projection(std::filesystem::path const& dir, ScenarioConfig const& cfg,
                std::vector<LedgerRow> const& ledger)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto put = [&](char const* name, std::string const& content) {
        write_text_file(dir / name, content);
        written.push_back(dir / name);
    };
    put("ledger.csv", ledger_csv(ledger));
    put("ledger_raw.csv", ledger_raw_csv(ledger));
    put("config.json", to_json(cfg).dump(2) + "\n");
    return written;
}

} // namespace payg
