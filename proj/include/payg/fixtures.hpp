#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <string>

#include "cashflows.hpp"
#include "cohorts.hpp"
#include "csv.hpp"
#include "entrants.hpp"

namespace payg {

// Readers for the CSV fixtures referenced from a scenario config.

/// Columns: year, sex, expected_pop, sigma_pop.
inline PopulationSeries load_population(CsvTable const& t, int min_age, int max_age)
{
    PopulationSeries series(min_age, max_age);
    auto const cy = t.column("year");
    auto const cs = t.column("sex");
    auto const ce = t.column("expected_pop");
    auto const cg = t.column("sigma_pop");
    for (std::size_t r = 0; r < t.size(); ++r) {
        try {
            series.set(parse_sex(t.text(r, cs)), t.integer(r, cy),
                       {t.number(r, ce), t.number(r, cg)});
        }
        catch (ValidationError const& e) {
            throw ValidationError(t.where(r) + ": " + e.what());
        }
    }
    return series;
}

/// Columns: sex, age, q0, mu, sigma.
inline MortalityModel load_mortality(CsvTable const& t, int min_age, int max_age, int base_year)
{
    MortalityModel mm(min_age, max_age, base_year);
    auto const cs = t.column("sex");
    auto const ca = t.column("age");
    auto const cq = t.column("q0");
    auto const cm = t.column("mu");
    auto const cg = t.column("sigma");
    BySex<std::vector<bool>> seen;
    for (auto& v : seen) {
        v.assign(static_cast<std::size_t>(max_age - min_age + 1), false);
    }
    for (std::size_t r = 0; r < t.size(); ++r) {
        int const age = t.integer(r, ca);
        if (age < min_age || age > max_age) {
            continue;
        }
        Sex const s = parse_sex(t.text(r, cs));
        try {
            mm.set(s, age, {t.number(r, cq), t.number(r, cm), t.number(r, cg)});
        }
        catch (ValidationError const& e) {
            throw ValidationError(t.where(r) + ": " + e.what());
        }
        seen[index(s)][static_cast<std::size_t>(age - min_age)] = true;
    }
    for (Sex s : kSexes) {
        for (int x = min_age; x <= max_age; ++x) {
            if (!seen[index(s)][static_cast<std::size_t>(x - min_age)]) {
                throw CoverageError(t.source() + ": no mortality rate for "
                                    + std::string(sex_name(s)) + " age " + std::to_string(x));
            }
        }
    }
    return mm;
}

/// Columns: sex, age, <column>. Ages outside [min_age, max_age] are ignored.
inline AgeProfile load_profile(CsvTable const& t, std::string const& column, int min_age,
                               int max_age)
{
    AgeProfile p(min_age, max_age);
    auto const cs = t.column("sex");
    auto const ca = t.column("age");
    auto const cv = t.column(column);
    for (std::size_t r = 0; r < t.size(); ++r) {
        int const age = t.integer(r, ca);
        if (age < min_age || age > max_age) {
            continue;
        }
        double const v = t.number(r, cv);
        if (!(v >= 0.0)) {
            throw ValidationError(t.where(r) + ": " + column + " must be >= 0");
        }
        p.set(parse_sex(t.text(r, cs)), age, v);
    }
    return p;
}

/*!
 * Columns: sex, age, seniority, status, count and optional amount.
 *
 * amount is the per-capita notional balance of actives (default 0) or the
 * nominal first-year pension of retirees (default: legacy profile, left as
 * NaN here).
 */
inline CohortGrid load_census(CsvTable const& t, int min_age, int max_age, int year, int entry_age)
{
    CohortGrid grid(min_age, max_age, year);
    auto const cs = t.column("sex");
    auto const ca = t.column("age");
    auto const cn = t.column("seniority");
    auto const cst = t.column("status");
    auto const cc = t.column("count");
    bool const has_amount = t.has_column("amount");
    auto const cm = has_amount ? t.column("amount") : 0;
    for (std::size_t r = 0; r < t.size(); ++r) {
        Sex const s = parse_sex(t.text(r, cs));
        int const x = t.integer(r, ca);
        int const a = t.integer(r, cn);
        Status const st = parse_status(t.text(r, cst));
        double const n = t.number(r, cc);
        if (!(n >= 0.0)) {
            throw ValidationError(t.where(r) + ": count must be >= 0");
        }
        if (n == 0.0) {
            continue;
        }
        if (x < min_age || x > max_age) {
            throw CoverageError(t.where(r) + ": age " + std::to_string(x) + " outside grid ["
                                + std::to_string(min_age) + ", " + std::to_string(max_age) + "]");
        }
        if (a < 0 || a > x - entry_age) {
            throw ValidationError(t.where(r) + ": seniority " + std::to_string(a)
                                  + " must lie in [0, age - entry_age]");
        }
        double amount = st == Status::active ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        if (has_amount && !t.text(r, cm).empty()) {
            amount = t.number(r, cm);
            if (!(amount >= 0.0)) {
                throw ValidationError(t.where(r) + ": amount must be >= 0");
            }
        }
        grid.add(s, x, a, st, n, amount);
    }
    return grid;
}

/// Columns: year, sex, population, enrolments, graduations, new_professionals,
/// new_fund_members, cancellations.
inline BySex<EducationHistory> load_education_history(CsvTable const& t)
{
    BySex<EducationHistory> out;
    auto const cy = t.column("year");
    auto const cs = t.column("sex");
    std::size_t const cols[] = {t.column("population"), t.column("enrolments"),
                                t.column("graduations"), t.column("new_professionals"),
                                t.column("new_fund_members"), t.column("cancellations")};
    for (std::size_t r = 0; r < t.size(); ++r) {
        double v[6];
        for (int i = 0; i < 6; ++i) {
            v[i] = t.number(r, cols[i]);
            if (!(v[i] >= 0.0)) {
                throw ValidationError(t.where(r) + ": " + t.header()[cols[i]] + " must be >= 0");
            }
        }
        out[index(parse_sex(t.text(r, cs)))][t.integer(r, cy)] =
            EducationRecord{v[0], v[1], v[2], v[3], v[4], v[5]};
    }
    return out;
}

} // namespace payg
