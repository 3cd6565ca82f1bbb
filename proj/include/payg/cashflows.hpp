#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cohorts.hpp"
#include "common.hpp"
#include "error.hpp"
#include "stochastic.hpp"

namespace payg {

//---------------------------------------------------------------------------//
/*!
 * Currency amount in integer cents.
 *
 * Ledger arithmetic happens on cents so the accounting identities hold
 * exactly; conversions from floating point round half away from zero.
 */
class Money {
public:
    constexpr Money() = default;

    static constexpr Money from_cents(std::int64_t cents) noexcept { return Money(cents); }

    static Money from_euros(double euros)
    {
        double const cents = std::round(euros * 100.0);
        if (!std::isfinite(cents) || std::abs(cents) > 9.0e18) {
            throw StateError("currency amount out of range");
        }
        return Money(static_cast<std::int64_t>(cents));
    }

    /// This amount times `factor`, rounded to the cent.
    Money scaled(double factor) const
    {
        double const cents = std::round(static_cast<double>(cents_) * factor);
        if (!std::isfinite(cents) || std::abs(cents) > 9.0e18) {
            throw StateError("currency amount out of range");
        }
        return Money(static_cast<std::int64_t>(cents));
    }

    constexpr std::int64_t cents() const noexcept { return cents_; }
    constexpr double euros() const noexcept { return static_cast<double>(cents_) / 100.0; }

    /// Nearest thousand euros, halves away from zero.
    constexpr std::int64_t thousands() const noexcept
    {
        std::int64_t const unit = 100'000;
        std::int64_t const half = unit / 2;
        return cents_ >= 0 ? (cents_ + half) / unit : -((-cents_ + half) / unit);
    }

    friend constexpr Money operator+(Money a, Money b) noexcept { return Money(a.cents_ + b.cents_); }
    friend constexpr Money operator-(Money a, Money b) noexcept { return Money(a.cents_ - b.cents_); }
    friend constexpr auto operator<=>(Money, Money) = default;

private:
    constexpr explicit Money(std::int64_t cents) : cents_{cents} {}
    std::int64_t cents_ = 0;
};

//---------------------------------------------------------------------------//
// Rules and assumptions
//---------------------------------------------------------------------------//

/// Rate applied to a per-capita base amount quoted at base_year prices.
struct ContributionStream {
    YearSchedule<double> rate = YearSchedule<double>::constant(0.0);
    AgeProfile base;
    int base_year = 0;

    friend bool operator==(ContributionStream const&, ContributionStream const&) = default;
};

struct ContributionRule {
    ContributionStream subjective;  ///< on professional income, credited to notional accounts
    ContributionStream integrative; ///< on VAT sales
    int exemption_years = 0;        ///< seniorities 0..exemption_years-1 pay nothing

    friend bool operator==(ContributionRule const&, ContributionRule const&) = default;
};

enum class BenefitFormula { fixed_profile, notional_account };

inline std::string_view to_string(BenefitFormula f) noexcept
{
    return f == BenefitFormula::fixed_profile ? "fixed_profile" : "notional_account";
}

struct BenefitType {
    std::string name;
    BenefitFormula formula = BenefitFormula::fixed_profile;
    AgeProfile profile;       ///< fixed_profile: pension by retirement age at base_year prices
    int base_year = 0;
    std::map<int, double> conversion; ///< notional_account: annuity coefficient by retirement age

    /// Coefficient of the nearest tabulated age.
    double conversion_at(int age) const
    {
        if (conversion.empty()) {
            throw StateError("benefit '" + name + "' has no conversion coefficients");
        }
        auto it = conversion.lower_bound(age);
        if (it == conversion.end()) {
            return std::prev(it)->second;
        }
        if (it->first == age || it == conversion.begin()) {
            return it->second;
        }
        auto prev = std::prev(it);
        return (age - prev->first) <= (it->first - age) ? prev->second : it->second;
    }

    friend bool operator==(BenefitType const&, BenefitType const&) = default;
};

struct BenefitRule {
    std::vector<BenefitType> types;
    double accrual_rate = 0.0; ///< nominal yearly growth of notional balances
    AgeProfile legacy;         ///< pensions of members already retired at the start
    int legacy_base_year = 0;

    friend bool operator==(BenefitRule const&, BenefitRule const&) = default;
};

struct EconomicAssumptions {
    double initial_assets = 0.0;
    double admin_base = 0.0;
    double admin_growth = 0.0;
    int admin_base_year = 0;
    YearSchedule<double> inflation = YearSchedule<double>::constant(0.0);
    YearSchedule<double> expected_return = YearSchedule<double>::constant(0.0);
    Ar1Params ar1;

    friend bool operator==(EconomicAssumptions const&, EconomicAssumptions const&) = default;
};

//---------------------------------------------------------------------------//
/*!
 * Cumulative price level over a fixed year range.
 *
 * level(t) = prod_{u = first+1}^{t} (1 + inflation(u)), so level(first) = 1,
 * and factor(from, to) = level(to) / level(from) appreciates a base-year
 * amount to year `to`.
 */
class PriceIndex {
public:
    PriceIndex() = default;
    PriceIndex(YearSchedule<double> const& inflation, int first_year, int last_year)
        : first_year_{first_year}
    {
        level_.push_back(1.0);
        for (int y = first_year + 1; y <= last_year; ++y) {
            level_.push_back(level_.back() * (1.0 + inflation.at(y)));
        }
    }

    double level(int year) const
    {
        if (year < first_year_ || year > last_year()) {
            throw CoverageError("price index does not cover year " + std::to_string(year));
        }
        return level_[static_cast<std::size_t>(year - first_year_)];
    }

    double factor(int from, int to) const { return level(to) / level(from); }
    int first_year() const noexcept { return first_year_; }
    int last_year() const noexcept { return first_year_ + static_cast<int>(level_.size()) - 1; }

private:
    int first_year_ = 0;
    std::vector<double> level_;
};

//---------------------------------------------------------------------------//
// Operations
//---------------------------------------------------------------------------//

struct ContributionTotals {
    double subjective = 0.0;
    double integrative = 0.0;
};

/*!
 * Contributions of year t from active cells with seniority >= exemption_years.
 *
 * Per-capita contribution is rate(t) * base(s, x) appreciated from the
 * stream's base year. The active cell amounts (notional balances) are
 * updated in place: balance * (1 + accrual_rate) + subjective contribution.
 */
inline ContributionTotals contribution_income(CohortGrid& grid, ContributionRule const& rule,
                                              double accrual_rate, int year,
                                              PriceIndex const& prices)
{
    double const rate_subj = rule.subjective.rate.at(year);
    double const rate_integ = rule.integrative.rate.at(year);
    double const up_subj = prices.factor(rule.subjective.base_year, year);
    double const up_integ = prices.factor(rule.integrative.base_year, year);
    double const growth = 1.0 + accrual_rate;
    ContributionTotals out;
    grid.for_each_mut(Status::active, [&](Sex s, int x, int a, CohortGrid::Cell& c) {
        double const income = rule.subjective.base.get(s, x);
        double const sales = rule.integrative.base.get(s, x);
        if (std::isnan(income) || std::isnan(sales)) {
            throw CoverageError("contributions: no income profile for " + std::string(sex_name(s))
                                + " age " + std::to_string(x));
        }
        double balance = c.amount * growth;
        if (a >= rule.exemption_years) {
            double const subj = rate_subj * income * up_subj;
            double const integ = rate_integ * sales * up_integ;
            out.subjective += subj * c.count;
            out.integrative += integ * c.count;
            balance += subj;
        }
        c.amount = balance;
    });
    return out;
}

/// Nominal pension disbursement of year t; retired amounts are real units.
inline double pension_disbursement(CohortGrid const& grid, int year, PriceIndex const& prices)
{
    double const level = prices.level(year);
    double total = 0.0;
    grid.for_each(Status::retired, [&](Sex s, int x, int a, CohortGrid::Cell const& c) {
        if (std::isnan(c.amount)) {
            throw StateError("retired cohort (" + std::string(sex_name(s)) + ", age "
                             + std::to_string(x) + ", seniority " + std::to_string(a)
                             + ") has no benefit assigned");
        }
        total += c.amount * c.count;
    });
    return total * level;
}

/*!
 * Nominal first-year pension for a member retiring in `year` under `type`.
 *
 * fixed_profile: profile(s, age) appreciated from the type's base year.
 * notional_account: notional balance times the conversion coefficient.
 */
inline double initial_pension(BenefitType const& type, Sex s, int age, double notional_balance,
                              int year, PriceIndex const& prices)
{
    if (type.formula == BenefitFormula::fixed_profile) {
        double const base = type.profile.get(s, age);
        if (std::isnan(base)) {
            throw CoverageError("benefit '" + type.name + "': no profile value for "
                                + std::string(sex_name(s)) + " age " + std::to_string(age));
        }
        return base * prices.factor(type.base_year, year);
    }
    return notional_balance * type.conversion_at(age);
}

inline double admin_expense(EconomicAssumptions const& e, int year)
{
    return e.admin_base * std::pow(1.0 + e.admin_growth, year - e.admin_base_year);
}

struct ReturnDraw {
    double rate = 0.0;
    double deviation = 0.0; ///< X_t
};

/// r_t = expected_return(t) + X_t, with X_t the AR(1) deviation (0 when not stochastic).
inline ReturnDraw sample_return(EconomicAssumptions const& e, int year, double x_prev, double eps,
                                bool stochastic)
{
    double const x = stochastic ? ar1_step(e.ar1, x_prev, eps) : 0.0;
    return {e.expected_return.at(year) + x, x};
}

/// One row of the yearly fund ledger, columns A to I.
struct LedgerRow {
    int year = 0;
    Money value_start;        ///< A
    Money subjective;         ///< B
    Money integrative;        ///< C
    Money pensions;           ///< D
    Money pension_balance;    ///< E = B + C - D
    Money investment_returns; ///< F = A * r
    Money admin;              ///< G
    Money total_balance;      ///< H = E + F - G
    Money value_end;          ///< I = A + H
    double rate = 0.0;

    friend bool operator==(LedgerRow const&, LedgerRow const&) = default;
};

struct LedgerInputs {
    int year = 0;
    Money value_start;
    Money subjective;
    Money integrative;
    Money pensions;
    Money admin;
    double rate = 0.0;
};

/// Cash flows settle at year end; returns accrue on the opening value only.
inline LedgerRow step_fund_value(LedgerInputs const& in)
{
    LedgerRow row;
    row.year = in.year;
    row.value_start = in.value_start;
    row.subjective = in.subjective;
    row.integrative = in.integrative;
    row.pensions = in.pensions;
    row.admin = in.admin;
    row.rate = in.rate;
    row.pension_balance = in.subjective + in.integrative - in.pensions;
    row.investment_returns = in.value_start.scaled(in.rate);
    row.total_balance = row.pension_balance + row.investment_returns - row.admin;
    row.value_end = row.value_start + row.total_balance;
    return row;
}

} // namespace payg
