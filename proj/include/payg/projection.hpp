#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cashflows.hpp"
#include "cohorts.hpp"
#include "entrants.hpp"
#include "rng.hpp"

namespace payg {

/// Which risk factors are drawn; the others stay at their expected values.
struct StochasticFlags {
    bool entrants = false;
    bool mortality = false;
    bool returns = false;

    bool any() const noexcept { return entrants || mortality || returns; }
    bool demographic() const noexcept { return entrants || mortality; }

    static StochasticFlags all() noexcept { return {true, true, true}; }
    static StochasticFlags none() noexcept { return {}; }

    friend bool operator==(StochasticFlags const&, StochasticFlags const&) = default;
};

/// Every model input of one fund projection.
struct Scenario {
    int first_year = 0;
    int last_year = 0;
    int entry_age = 0;
    PepParams pep;
    PopulationSeries population;
    CohortGrid initial_grid; ///< members on 1 January of first_year
    MortalityModel mortality;
    RetirementRule retirement;
    ContributionRule contributions;
    BenefitRule benefits;
    EconomicAssumptions economy;

    friend bool operator==(Scenario const&, Scenario const&) = default;
};

/// Yearly demographic cash flows, in nominal euros.
struct YearFlows {
    int year = 0;
    double subjective = 0.0;
    double integrative = 0.0;
    double pensions = 0.0;
    double actives = 0.0;
    double retirees = 0.0;
};

struct DemographicPath {
    EntrantsPath entrants;
    std::vector<YearFlows> flows;
};

/// Draw streams of one replication, one lane per risk factor.
struct ReplicationStreams {
    NormalSource entrants;
    NormalSource mortality;
    NormalSource returns;

    ReplicationStreams(std::uint64_t seed, std::uint64_t replication)
        : entrants(seed, replication, Lane::entrants),
          mortality(seed, replication, Lane::mortality),
          returns(seed, replication, Lane::returns)
    {
    }
};

//---------------------------------------------------------------------------//
/*!
 * Runs projections of one scenario.
 *
 * Construction precomputes what does not depend on the draws: expected
 * mortality by year, the price index and the benefit type of each retirement
 * requirement. One Projector is shared read-only by concurrent replications.
 *
 * Year loop: on 1 January of the first year the year's entrants join the
 * census and eligible members retire. Each year t then books contributions
 * and pensions on the grid of t, settles the fund, and evolves the grid to
 * t + 1 (deaths, then entrants of t + 1, then retirements).
 */
class Projector {
public:
    explicit Projector(Scenario scenario) : scenario_(std::move(scenario))
    {
        auto const& sc = scenario_;
        if (sc.last_year < sc.first_year) {
            throw ValidationError("horizon: last_year < first_year");
        }
        int first_price = sc.first_year;
        first_price = std::min(first_price, sc.contributions.subjective.base_year);
        first_price = std::min(first_price, sc.contributions.integrative.base_year);
        first_price = std::min(first_price, sc.benefits.legacy_base_year);
        for (auto const& t : sc.benefits.types) {
            if (t.formula == BenefitFormula::fixed_profile) {
                first_price = std::min(first_price, t.base_year);
            }
        }
        prices_ = PriceIndex(sc.economy.inflation, first_price, sc.last_year);

        std::unordered_map<std::string, std::size_t> by_name;
        for (std::size_t i = 0; i < sc.benefits.types.size(); ++i) {
            by_name.emplace(sc.benefits.types[i].name, i);
        }
        for (auto const& req : sc.retirement.requirements) {
            auto it = by_name.find(req.benefit);
            if (it == by_name.end()) {
                throw ValidationError("retirement: unknown benefit type '" + req.benefit + "'");
            }
            requirement_type_.push_back(it->second);
        }

        for (int t = sc.first_year; t <= sc.last_year; ++t) {
            mortality_.push_back(expected_mortality_rates(
                sc.mortality, sc.initial_grid.min_age(), sc.initial_grid.max_age(), t));
        }
        initial_grid_ = prepare_initial_grid();
    }

    Scenario const& scenario() const noexcept { return scenario_; }
    PriceIndex const& prices() const noexcept { return prices_; }

    /// Census with legacy pensions resolved; entrants not yet injected.
    CohortGrid const& initial_grid() const noexcept { return initial_grid_; }

    DemographicPath demography(StochasticFlags flags, ReplicationStreams* streams) const
    {
        auto const& sc = scenario_;
        if (flags.demographic() && streams == nullptr) {
            throw StateError("stochastic demography requires draw streams");
        }
        DemographicPath out;
        out.entrants = flags.entrants
                           ? simulate_entrants_path(sc.pep, sc.population, sc.first_year,
                                                    sc.last_year, streams->entrants)
                           : expected_entrants_path(sc.pep, sc.population, sc.first_year,
                                                    sc.last_year);
        out.flows.reserve(static_cast<std::size_t>(sc.last_year - sc.first_year + 1));

        CohortGrid grid = initial_grid_;
        grid = inject_new_entrants(std::move(grid), out.entrants.at(sc.first_year), sc.entry_age);
        grid = retire_eligible(std::move(grid), sc.retirement, assigner(sc.first_year));

        NormalSource* mort = flags.mortality ? &streams->mortality : nullptr;
        for (int t = sc.first_year; t <= sc.last_year; ++t) {
            YearFlows f;
            f.year = t;
            auto const contrib = contribution_income(grid, sc.contributions,
                                                     sc.benefits.accrual_rate, t, prices_);
            f.subjective = contrib.subjective;
            f.integrative = contrib.integrative;
            f.pensions = pension_disbursement(grid, t, prices_);
            f.actives = grid.total(Status::active);
            f.retirees = grid.total(Status::retired);
            out.flows.push_back(f);
            if (t < sc.last_year) {
                grid = evolve_year(std::move(grid), sc.mortality,
                                   mortality_[static_cast<std::size_t>(t - sc.first_year)],
                                   sc.retirement, out.entrants.at(t + 1), sc.entry_age, mort,
                                   flags.mortality, assigner(t + 1));
            }
        }
        return out;
    }

    /// Fund recursion over the horizon; draws one normal per year when stochastic.
    std::vector<LedgerRow> fund(std::vector<YearFlows> const& flows, bool stochastic_returns,
                                NormalSource* src) const
    {
        auto const& econ = scenario_.economy;
        if (stochastic_returns && src == nullptr) {
            throw StateError("stochastic returns require a normal source");
        }
        std::vector<LedgerRow> ledger;
        ledger.reserve(flows.size());
        Money value = Money::from_euros(econ.initial_assets);
        double x = econ.ar1.x0;
        for (auto const& f : flows) {
            double const eps = stochastic_returns ? (*src)() : 0.0;
            auto const r = sample_return(econ, f.year, x, eps, stochastic_returns);
            x = r.deviation;
            LedgerInputs in;
            in.year = f.year;
            in.value_start = value;
            in.subjective = Money::from_euros(f.subjective);
            in.integrative = Money::from_euros(f.integrative);
            in.pensions = Money::from_euros(f.pensions);
            in.admin = Money::from_euros(admin_expense(econ, f.year));
            in.rate = r.rate;
            ledger.push_back(step_fund_value(in));
            value = ledger.back().value_end;
        }
        return ledger;
    }

private:
    Scenario scenario_;
    PriceIndex prices_;
    std::vector<std::size_t> requirement_type_;
    std::vector<MortalityRates> mortality_;
    CohortGrid initial_grid_;

    struct Assigner {
        Projector const* self;
        int year;

        double operator()(std::size_t requirement, Sex s, int age, int, double balance) const
        {
            auto const& type =
                self->scenario_.benefits.types[self->requirement_type_[requirement]];
            double const nominal = initial_pension(type, s, age, balance, year, self->prices_);
            return nominal / self->prices_.level(year);
        }
    };

    Assigner assigner(int year) const { return {this, year}; }

    // Census retirees without an explicit pension take the legacy profile;
    // explicit census pensions are nominal at the first year.
    CohortGrid prepare_initial_grid() const
    {
        auto const& sc = scenario_;
        CohortGrid grid = sc.initial_grid;
        grid.set_year(sc.first_year);
        double const legacy_up = prices_.factor(sc.benefits.legacy_base_year, sc.first_year);
        double const level = prices_.level(sc.first_year);
        grid.for_each_mut(Status::retired, [&](Sex s, int x, int, CohortGrid::Cell& c) {
            double nominal = c.amount;
            if (std::isnan(nominal)) {
                nominal = sc.benefits.legacy.get(s, x) * legacy_up;
            }
            c.amount = nominal / level;
        });
        return grid;
    }
};

/// Deterministic projection: every factor at its expected value.
struct Projection {
    DemographicPath demography;
    std::vector<LedgerRow> ledger;
};

inline Projection run_deterministic_projection(Projector const& projector)
{
    Projection p;
    p.demography = projector.demography(StochasticFlags::none(), nullptr);
    p.ledger = projector.fund(p.demography.flows, false, nullptr);
    return p;
}

inline Projection run_deterministic_projection(Scenario scenario)
{
    return run_deterministic_projection(Projector(std::move(scenario)));
}

} // namespace payg
