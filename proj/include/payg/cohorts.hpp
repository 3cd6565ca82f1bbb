#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "common.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "stochastic.hpp"

namespace payg {

enum class Status : int { active = 0, retired = 1 };

inline constexpr std::array<Status, 2> kStatuses = {Status::active, Status::retired};

inline std::string_view to_string(Status st) noexcept
{
    return st == Status::active ? "active" : "retired";
}

inline Status parse_status(std::string_view text)
{
    if (text == "active") {
        return Status::active;
    }
    if (text == "retired") {
        return Status::retired;
    }
    throw ValidationError("unknown status '" + std::string(text) + "' (expected active or retired)");
}

//---------------------------------------------------------------------------//
/*!
 * Member counts N(s, x, a, status) plus one per-capita amount per cell.
 *
 * For active cells the amount is the notional account balance (nominal).
 * For retired cells it is the annual pension in real units (nominal pension
 * divided by the price level of the retirement year), so indexation to
 * inflation is implicit; NaN marks a retiree cohort whose pension was never
 * assigned.
 *
 * Storage is one dense seniority row per (sex, age, status) with a [lo, hi)
 * bound on the populated part, so sweeps only touch occupied seniorities.
 */
class CohortGrid {
public:
    struct Cell {
        double count = 0.0;
        double amount = 0.0;
    };

    CohortGrid() = default;
    CohortGrid(int min_age, int max_age, int year)
        : min_age_{min_age}, max_age_{max_age}, year_{year}
    {
        if (max_age < min_age) {
            throw ValidationError("cohort grid: max_age < min_age");
        }
        auto const rows = static_cast<std::size_t>(kSexCount * ages() * 2);
        cells_.assign(rows * static_cast<std::size_t>(row_width()), Cell{});
        bounds_.assign(rows, Bounds{});
    }

    int min_age() const noexcept { return min_age_; }
    int max_age() const noexcept { return max_age_; }
    int max_seniority() const noexcept { return max_age_ - min_age_; }
    int year() const noexcept { return year_; }
    void set_year(int year) noexcept { year_ = year; }

    Cell const& cell(Sex s, int age, int a, Status st) const
    {
        check(age, a);
        return cells_[offset(s, age, st) + static_cast<std::size_t>(a)];
    }

    double count(Sex s, int age, int a, Status st) const { return cell(s, age, a, st).count; }
    double amount(Sex s, int age, int a, Status st) const { return cell(s, age, a, st).amount; }

    /// Adds members; the cell amount becomes the count-weighted average.
    void add(Sex s, int age, int a, Status st, double n, double per_capita)
    {
        check(age, a);
        if (!(n >= 0.0)) {
            throw ValidationError("cohort grid: negative count");
        }
        if (n == 0.0) {
            return;
        }
        auto const row = row_index(s, age, st);
        Cell& c = cells_[row * static_cast<std::size_t>(row_width()) + static_cast<std::size_t>(a)];
        double const total = c.count + n;
        c.amount = c.count == 0.0 ? per_capita : (c.count * c.amount + n * per_capita) / total;
        c.count = total;
        auto& b = bounds_[row];
        if (b.lo == b.hi) {
            b = {a, a + 1};
        }
        else {
            b.lo = std::min(b.lo, a);
            b.hi = std::max(b.hi, a + 1);
        }
    }

    /// Overwrites the per-capita amount of an existing cell.
    void set_amount(Sex s, int age, int a, Status st, double per_capita)
    {
        check(age, a);
        cells_[offset(s, age, st) + static_cast<std::size_t>(a)].amount = per_capita;
    }

    double total() const noexcept { return total(Status::active) + total(Status::retired); }

    double total(Status st) const noexcept
    {
        double sum = 0.0;
        for_each(st, [&](Sex, int, int, Cell const& c) { sum += c.count; });
        return sum;
    }

    /// Calls f(sex, age, seniority, cell) for every cell with a positive count.
    template<class F>
    void for_each(Status st, F&& f) const
    {
        for (Sex s : kSexes) {
            for (int x = min_age_; x <= max_age_; ++x) {
                auto const row = row_index(s, x, st);
                auto const& b = bounds_[row];
                Cell const* base = &cells_[row * static_cast<std::size_t>(row_width())];
                for (int a = b.lo; a < b.hi; ++a) {
                    if (base[a].count > 0.0) {
                        f(s, x, a, base[a]);
                    }
                }
            }
        }
    }

    /// Mutable variant of for_each; counts must stay >= 0.
    template<class F>
    void for_each_mut(Status st, F&& f)
    {
        for (Sex s : kSexes) {
            for (int x = min_age_; x <= max_age_; ++x) {
                auto const row = row_index(s, x, st);
                auto const& b = bounds_[row];
                Cell* base = &cells_[row * static_cast<std::size_t>(row_width())];
                for (int a = b.lo; a < b.hi; ++a) {
                    if (base[a].count > 0.0) {
                        f(s, x, a, base[a]);
                    }
                }
            }
        }
    }

    friend bool operator==(CohortGrid const& l, CohortGrid const& r)
    {
        if (l.min_age_ != r.min_age_ || l.max_age_ != r.max_age_ || l.year_ != r.year_) {
            return false;
        }
        for (std::size_t i = 0; i < l.cells_.size(); ++i) {
            auto const& a = l.cells_[i];
            auto const& b = r.cells_[i];
            if (a.count != b.count) {
                return false;
            }
            if (a.count > 0.0 && !(a.amount == b.amount || (std::isnan(a.amount) && std::isnan(b.amount)))) {
                return false;
            }
        }
        return true;
    }

private:
    struct Bounds {
        int lo = 0;
        int hi = 0;
    };

    int min_age_ = 0;
    int max_age_ = -1;
    int year_ = 0;
    std::vector<Cell> cells_;
    std::vector<Bounds> bounds_;

    int ages() const noexcept { return max_age_ - min_age_ + 1; }
    int row_width() const noexcept { return max_seniority() + 1; }

    std::size_t row_index(Sex s, int age, Status st) const noexcept
    {
        return (static_cast<std::size_t>(index(s)) * static_cast<std::size_t>(ages())
                + static_cast<std::size_t>(age - min_age_))
                   * 2
               + static_cast<std::size_t>(st);
    }

    std::size_t offset(Sex s, int age, Status st) const noexcept
    {
        return row_index(s, age, st) * static_cast<std::size_t>(row_width());
    }

    void check(int age, int a) const
    {
        if (age < min_age_ || age > max_age_ || a < 0 || a > max_seniority()) {
            throw CoverageError("cohort cell (age " + std::to_string(age) + ", seniority "
                                + std::to_string(a) + ") outside grid");
        }
    }

    friend CohortGrid shift_and_scale(CohortGrid grid, BySex<std::vector<double>> const& survival);
};

//---------------------------------------------------------------------------//
// Mortality
//---------------------------------------------------------------------------//

struct MortalityPoint {
    double q0 = 0.0;    ///< death probability at the base year
    double mu = 0.0;    ///< expected annual rate of change of q
    double sigma = 0.0; ///< deviation of the yearly q draw

    friend bool operator==(MortalityPoint const&, MortalityPoint const&) = default;
};

/// q(s, x, t) ~ clip[0,1]( (1 + mu)^(t - t0) q0 + sigma eps ).
class MortalityModel {
public:
    MortalityModel() = default;
    MortalityModel(int min_age, int max_age, int base_year)
        : min_age_{min_age}, max_age_{max_age}, base_year_{base_year}
    {
        for (auto& v : points_) {
            v.assign(static_cast<std::size_t>(max_age - min_age + 1), MortalityPoint{});
        }
    }

    void set(Sex s, int age, MortalityPoint p)
    {
        if (age < min_age_ || age > max_age_) {
            throw CoverageError("mortality: age " + std::to_string(age) + " outside table");
        }
        if (!(p.q0 >= 0.0 && p.q0 <= 1.0)) {
            throw ValidationError("mortality: q0 must lie in [0, 1] (age " + std::to_string(age)
                                  + ")");
        }
        if (!(1.0 + p.mu > 0.0)) {
            throw ValidationError("mortality: 1 + mu must be > 0 (age " + std::to_string(age) + ")");
        }
        if (!(p.sigma >= 0.0)) {
            throw ValidationError("mortality: sigma must be >= 0 (age " + std::to_string(age) + ")");
        }
        points_[index(s)][static_cast<std::size_t>(age - min_age_)] = p;
    }

    MortalityPoint const& at(Sex s, int age) const
    {
        if (age < min_age_ || age > max_age_) {
            throw CoverageError("mortality: age " + std::to_string(age) + " outside table");
        }
        return points_[index(s)][static_cast<std::size_t>(age - min_age_)];
    }

    int min_age() const noexcept { return min_age_; }
    int max_age() const noexcept { return max_age_; }
    int base_year() const noexcept { return base_year_; }

    friend bool operator==(MortalityModel const&, MortalityModel const&) = default;

private:
    int min_age_ = 0;
    int max_age_ = -1;
    int base_year_ = 0;
    BySex<std::vector<MortalityPoint>> points_;
};

/// Capped at 1.
inline double expected_mortality(MortalityModel const& mm, Sex s, int age, int year)
{
    if (year < mm.base_year()) {
        throw CoverageError("mortality: year " + std::to_string(year) + " precedes base year "
                            + std::to_string(mm.base_year()));
    }
    auto const& p = mm.at(s, age);
    return std::min(1.0, std::pow(1.0 + p.mu, year - mm.base_year()) * p.q0);
}

/// Expected q for every grid age at one year, indexed [sex][age - min_age].
using MortalityRates = BySex<std::vector<double>>;

inline MortalityRates expected_mortality_rates(MortalityModel const& mm, int min_age, int max_age,
                                               int year)
{
    MortalityRates out;
    for (Sex s : kSexes) {
        auto& row = out[index(s)];
        row.reserve(static_cast<std::size_t>(max_age - min_age + 1));
        for (int x = min_age; x <= max_age; ++x) {
            row.push_back(expected_mortality(mm, s, x, year));
        }
    }
    return out;
}

/// Shifts every row one year older, scaling counts by the survival rates.
inline CohortGrid shift_and_scale(CohortGrid grid, BySex<std::vector<double>> const& survival)
{
    auto const width = static_cast<std::size_t>(grid.row_width());
    for (Sex s : kSexes) {
        for (int x = grid.max_age_; x >= grid.min_age_; --x) {
            double const keep = survival[index(s)][static_cast<std::size_t>(x - grid.min_age_)];
            for (Status st : kStatuses) {
                auto const row = grid.row_index(s, x, st);
                auto& b = grid.bounds_[row];
                if (b.lo == b.hi) {
                    continue;
                }
                CohortGrid::Cell* src = &grid.cells_[row * width];
                if (x < grid.max_age_) {
                    int const shift = st == Status::active ? 1 : 0;
                    if (b.hi + shift > grid.row_width()) {
                        throw StateError("cohort grid: seniority exceeds age span at age "
                                         + std::to_string(x));
                    }
                    auto const dest_row = grid.row_index(s, x + 1, st);
                    CohortGrid::Cell* dest = &grid.cells_[dest_row * width];
                    for (int a = b.lo; a < b.hi; ++a) {
                        dest[a + shift] = {src[a].count * keep, src[a].amount};
                    }
                    grid.bounds_[dest_row] = {b.lo + shift, b.hi + shift};
                }
                for (int a = b.lo; a < b.hi; ++a) {
                    src[a] = {};
                }
                b = {};
            }
        }
    }
    grid.year_ += 1;
    return grid;
}

/*!
 * One year of mortality and ageing.
 *
 * The death rate of (s, x) is the expected rate, or with `stochastic` set a
 * clipped draw sharing one normal across all seniorities and both statuses.
 * Normals are drawn for every (sex, age) of the grid, males first, ages
 * ascending, whether or not the row is populated. Active seniority grows by
 * one; retired seniority is frozen. Survivors past max_age leave the grid.
 */
inline CohortGrid age_and_kill(CohortGrid grid, MortalityModel const& mm,
                               MortalityRates const& expected, NormalSource* src, bool stochastic)
{
    if (stochastic && src == nullptr) {
        throw StateError("stochastic mortality requires a normal source");
    }
    BySex<std::vector<double>> survival;
    for (Sex s : kSexes) {
        auto& row = survival[index(s)];
        row.resize(expected[index(s)].size());
        for (int x = grid.min_age(); x <= grid.max_age(); ++x) {
            auto const i = static_cast<std::size_t>(x - grid.min_age());
            double q = expected[index(s)][i];
            if (stochastic) {
                q = sample_clipped_affine({q, mm.at(s, x).sigma}, (*src)());
            }
            row[i] = 1.0 - q;
        }
    }
    return shift_and_scale(std::move(grid), survival);
}

inline CohortGrid age_and_kill(CohortGrid grid, MortalityModel const& mm, NormalSource* src,
                               bool stochastic)
{
    auto const rates = expected_mortality_rates(mm, grid.min_age(), grid.max_age(), grid.year());
    return age_and_kill(std::move(grid), mm, rates, src, stochastic);
}

inline CohortGrid inject_new_entrants(CohortGrid grid, BySex<double> const& ne, int entry_age)
{
    for (Sex s : kSexes) {
        grid.add(s, entry_age, 0, Status::active, ne[index(s)], 0.0);
    }
    return grid;
}

//---------------------------------------------------------------------------//
// Retirement
//---------------------------------------------------------------------------//

/// Members of sex s retire for this benefit when age > x_hat and seniority >= a_hat.
struct RetirementRequirement {
    std::string benefit;
    BySex<YearSchedule<int>> age_threshold;
    BySex<YearSchedule<int>> min_seniority;

    bool eligible(Sex s, int age, int seniority, int year) const
    {
        return age > age_threshold[index(s)].at(year)
               && seniority >= min_seniority[index(s)].at(year);
    }

    friend bool operator==(RetirementRequirement const&, RetirementRequirement const&) = default;
};

struct RetirementRule {
    std::vector<RetirementRequirement> requirements;

    /// Index of the first listed requirement met, or -1.
    int eligible(Sex s, int age, int seniority, int year) const
    {
        for (std::size_t i = 0; i < requirements.size(); ++i) {
            if (requirements[i].eligible(s, age, seniority, year)) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }

    friend bool operator==(RetirementRule const&, RetirementRule const&) = default;
};

/// Keeps the active amount as the retired amount.
struct KeepAmount {
    double operator()(std::size_t, Sex, int, int, double amount) const noexcept { return amount; }
};

/*!
 * Moves every eligible active cell to retired status.
 *
 * `assign(requirement_index, sex, age, seniority, active_amount)` returns
 * the per-capita amount stored on the retired cell. Retired cells never
 * return to active.
 */
template<class Assign = KeepAmount>
CohortGrid retire_eligible(CohortGrid grid, RetirementRule const& rule, Assign&& assign = {})
{
    int const year = grid.year();
    struct Move {
        Sex s;
        int x;
        int a;
        double count;
        double amount;
    };
    std::vector<Move> moves;
    grid.for_each_mut(Status::active, [&](Sex s, int x, int a, CohortGrid::Cell& c) {
        int const which = rule.eligible(s, x, a, year);
        if (which < 0) {
            return;
        }
        moves.push_back({s, x, a, c.count,
                         assign(static_cast<std::size_t>(which), s, x, a, c.amount)});
        c = {};
    });
    for (auto const& m : moves) {
        grid.add(m.s, m.x, m.a, Status::retired, m.count, m.amount);
    }
    return grid;
}

/// age_and_kill(t), then inject_new_entrants(t + 1), then retire_eligible(t + 1).
template<class Assign = KeepAmount>
CohortGrid evolve_year(CohortGrid grid, MortalityModel const& mm, MortalityRates const& expected,
                       RetirementRule const& rule, BySex<double> const& entrants_next,
                       int entry_age, NormalSource* src, bool stochastic_mortality,
                       Assign&& assign = {})
{
    grid = age_and_kill(std::move(grid), mm, expected, src, stochastic_mortality);
    grid = inject_new_entrants(std::move(grid), entrants_next, entry_age);
    return retire_eligible(std::move(grid), rule, std::forward<Assign>(assign));
}

template<class Assign = KeepAmount>
CohortGrid evolve_year(CohortGrid grid, MortalityModel const& mm, RetirementRule const& rule,
                       BySex<double> const& entrants_next, int entry_age, NormalSource* src,
                       bool stochastic_mortality, Assign&& assign = {})
{
    auto const rates = expected_mortality_rates(mm, grid.min_age(), grid.max_age(), grid.year());
    return evolve_year(std::move(grid), mm, rates, rule, entrants_next, entry_age, src,
                       stochastic_mortality, std::forward<Assign>(assign));
}

} // namespace payg
