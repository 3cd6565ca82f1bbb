#include <cmath>

#include <gtest/gtest.h>

#include "payg/projection.hpp"
#include "test_support.hpp"

using namespace payg;

namespace {

Scenario bundled_scenario()
{
    return test::bundled_config().scenario;
}

Projection const& bundled_projection()
{
    static Projection const p = run_deterministic_projection(bundled_scenario());
    return p;
}

} // namespace

TEST(Projection, CoversHorizon)
{
    auto const& p = bundled_projection();
    auto const& sc = test::bundled_config().scenario;
    ASSERT_EQ(p.ledger.size(), static_cast<std::size_t>(sc.last_year - sc.first_year + 1));
    ASSERT_EQ(p.demography.flows.size(), p.ledger.size());
    for (std::size_t i = 0; i < p.ledger.size(); ++i) {
        EXPECT_EQ(p.ledger[i].year, sc.first_year + static_cast<int>(i));
        EXPECT_EQ(p.demography.flows[i].year, p.ledger[i].year);
    }
}

TEST(Projection, LedgerIdentitiesExactAndChained)
{
    auto const& ledger = bundled_projection().ledger;
    EXPECT_EQ(ledger.front().value_start, Money::from_euros(2'067'793'989.0));
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        auto const& r = ledger[i];
        EXPECT_EQ(r.pension_balance, r.subjective + r.integrative - r.pensions);
        EXPECT_EQ(r.total_balance, r.pension_balance + r.investment_returns - r.admin);
        EXPECT_EQ(r.value_end, r.value_start + r.total_balance);
        EXPECT_EQ(r.investment_returns, r.value_start.scaled(0.034));
        if (i + 1 < ledger.size()) {
            EXPECT_EQ(r.value_end, ledger[i + 1].value_start);
        }
    }
}

TEST(Projection, OpeningYearMatchesPublishedFlowsClosely)
{
    auto const& r = bundled_projection().ledger.front();
    EXPECT_NEAR(r.subjective.thousands(), 235'721, 0.02 * 235'721);
    EXPECT_NEAR(r.integrative.thousands(), 155'133, 0.02 * 155'133);
    EXPECT_NEAR(r.pensions.thousands(), 126'378, 0.02 * 126'378);
    EXPECT_EQ(r.admin.thousands(), 28'448);
}

TEST(Projection, AdminColumnFollowsGrowth)
{
    auto const& ledger = bundled_projection().ledger;
    std::int64_t const expected[] = {28'448, 29'870, 31'364, 32'932, 34'579};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(ledger[i].admin.thousands(), expected[i]) << ledger[i].year;
    }
}

TEST(Projection, Deterministic)
{
    auto const again = run_deterministic_projection(bundled_scenario());
    EXPECT_EQ(again.ledger, bundled_projection().ledger);
}

TEST(Projection, NoEntrantsDrivesPensionBalanceNegative)
{
    auto sc = bundled_scenario();
    sc.population = sc.population.scaled(0.0);
    auto const p = run_deterministic_projection(std::move(sc));
    for (auto const& f : p.demography.flows) {
        EXPECT_EQ(p.demography.entrants.at(Sex::male, f.year), 0.0);
    }
    EXPECT_LT(p.ledger.back().pension_balance.cents(), 0);
    // Closed group: actives never grow.
    for (std::size_t i = 1; i < p.demography.flows.size(); ++i) {
        EXPECT_LE(p.demography.flows[i].actives, p.demography.flows[i - 1].actives + 1e-6);
    }
}

TEST(Projection, DoublingAdminOnlyChangesAdminColumnAndBelow)
{
    auto sc = bundled_scenario();
    sc.economy.admin_base *= 2.0;
    auto const p = run_deterministic_projection(std::move(sc));
    auto const& base = bundled_projection().ledger;
    EXPECT_EQ(p.ledger.front().admin, Money::from_euros(2.0 * 28'447'830.0));
    for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_EQ(p.ledger[i].subjective, base[i].subjective);
        EXPECT_EQ(p.ledger[i].integrative, base[i].integrative);
        EXPECT_EQ(p.ledger[i].pensions, base[i].pensions);
        EXPECT_NEAR(static_cast<double>(p.ledger[i].admin.cents()),
                    2.0 * static_cast<double>(base[i].admin.cents()), 1.0);
        EXPECT_LT(p.ledger[i].value_end, base[i].value_end);
    }
}

TEST(Projection, HigherExpectedReturnRaisesFundValue)
{
    auto sc = bundled_scenario();
    sc.economy.expected_return = YearSchedule<double>::constant(0.05);
    auto const p = run_deterministic_projection(std::move(sc));
    auto const& base = bundled_projection().ledger;
    for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_GT(p.ledger[i].value_end, base[i].value_end) << base[i].year;
    }
}

TEST(Projection, ContributionsLinearInRates)
{
    auto sc = bundled_scenario();
    sc.contributions.subjective.rate = YearSchedule<double>::constant(2.0 * 0.107);
    auto const p = run_deterministic_projection(std::move(sc));
    auto const& base = bundled_projection();
    // Contributions do not feed back into counts, so year one scales exactly.
    EXPECT_NEAR(p.demography.flows.front().subjective,
                2.0 * base.demography.flows.front().subjective, 1e-3);
    for (std::size_t i = 0; i < base.ledger.size(); ++i) {
        EXPECT_NEAR(p.demography.flows[i].subjective, 2.0 * base.demography.flows[i].subjective,
                    1e-6 * base.demography.flows[i].subjective);
        EXPECT_EQ(p.demography.flows[i].actives, base.demography.flows[i].actives);
    }
}

TEST(Projection, HeadcountsPositiveAndFlowsFinite)
{
    for (auto const& f : bundled_projection().demography.flows) {
        EXPECT_GT(f.actives, 0.0);
        EXPECT_GT(f.retirees, 0.0);
        EXPECT_TRUE(std::isfinite(f.subjective));
        EXPECT_TRUE(std::isfinite(f.pensions));
        EXPECT_GE(f.integrative, 0.0);
    }
}

TEST(Projection, ZeroSigmaStochasticEqualsDeterministic)
{
    auto sc = bundled_scenario();
    sc.economy.ar1.sigma = 0.0;
    Projector const proj(sc);
    ReplicationStreams streams(7, 3);
    auto const demo = proj.demography(StochasticFlags::none(), nullptr);
    auto const stoch = proj.fund(demo.flows, true, &streams.returns);
    auto const det = proj.fund(demo.flows, false, nullptr);
    EXPECT_EQ(stoch, det);
}

TEST(Projection, StochasticModesNeedStreams)
{
    Projector const proj(bundled_scenario());
    EXPECT_THROW(proj.demography(StochasticFlags{true, false, false}, nullptr), StateError);
    EXPECT_THROW(proj.demography(StochasticFlags{false, true, false}, nullptr), StateError);
    auto const demo = proj.demography(StochasticFlags::none(), nullptr);
    EXPECT_THROW(proj.fund(demo.flows, true, nullptr), StateError);
}

TEST(Projection, UnknownBenefitTypeRejected)
{
    auto sc = bundled_scenario();
    sc.retirement.requirements.front().benefit = "missing";
    EXPECT_THROW(Projector{sc}, ValidationError);
}
