#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "payg/cohorts.hpp"

using namespace payg;

namespace {

MortalityModel flat_mortality(int min_age, int max_age, double q0, double sigma = 0.0,
                              double mu = 0.0, int base_year = 2006)
{
    MortalityModel mm(min_age, max_age, base_year);
    for (Sex s : kSexes) {
        for (int x = min_age; x <= max_age; ++x) {
            mm.set(s, x, {q0, mu, sigma});
        }
    }
    return mm;
}

RetirementRequirement requirement(std::string name, int x_hat, int a_hat)
{
    RetirementRequirement r;
    r.benefit = std::move(name);
    r.age_threshold = {YearSchedule<int>::constant(x_hat), YearSchedule<int>::constant(x_hat)};
    r.min_seniority = {YearSchedule<int>::constant(a_hat), YearSchedule<int>::constant(a_hat)};
    return r;
}

RetirementRule single_rule(int x_hat, int a_hat)
{
    return RetirementRule{{requirement("b", x_hat, a_hat)}};
}

// Ages 20..24 with seniorities 0..3, entry at 20.
constexpr int kMin = 20, kMax = 24, kMaxSen = 3;

CohortGrid random_small_grid(std::mt19937_64& gen, int year, double retired_share)
{
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::bernoulli_distribution empty(0.3);
    std::bernoulli_distribution retired(retired_share);
    CohortGrid g(kMin, kMax, year);
    for (Sex s : kSexes) {
        for (int x = kMin; x <= kMax; ++x) {
            for (int a = 0; a <= std::min(kMaxSen, x - kMin); ++a) {
                if (empty(gen)) {
                    continue;
                }
                g.add(s, x, a, retired(gen) ? Status::retired : Status::active, u(gen), u(gen));
            }
        }
    }
    return g;
}

} // namespace

TEST(ExpectedMortality, Examples)
{
    MortalityModel mm(60, 60, 2000);
    mm.set(Sex::male, 60, {0.01, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(expected_mortality(mm, Sex::male, 60, 2007), 0.01);
    mm.set(Sex::male, 60, {0.01, 0.01, 0.0});
    EXPECT_NEAR(expected_mortality(mm, Sex::male, 60, 2003), 0.0103030, 1e-7);
    EXPECT_NEAR(expected_mortality(mm, Sex::male, 60, 2003), 0.01 * 1.01 * 1.01 * 1.01, 1e-16);
    mm.set(Sex::male, 60, {0.9, 0.2, 0.0});
    EXPECT_EQ(expected_mortality(mm, Sex::male, 60, 2005), 1.0);
    EXPECT_THROW(expected_mortality(mm, Sex::male, 60, 1999), CoverageError);
}

TEST(MortalityModel, RejectsInvalidPoints)
{
    MortalityModel mm(60, 61, 2000);
    EXPECT_THROW(mm.set(Sex::male, 60, {1.2, 0.0, 0.0}), ValidationError);
    EXPECT_THROW(mm.set(Sex::male, 60, {0.1, -1.0, 0.0}), ValidationError);
    EXPECT_THROW(mm.set(Sex::male, 60, {0.1, 0.0, -0.1}), ValidationError);
    EXPECT_THROW(mm.set(Sex::male, 62, {0.1, 0.0, 0.0}), CoverageError);
}

TEST(AgeAndKill, ZeroMortalityShiftsAges)
{
    CohortGrid g(kMin, kMax, 2006);
    g.add(Sex::male, 21, 1, Status::active, 10.0, 5.0);
    g.add(Sex::female, 23, 2, Status::retired, 4.0, 7.0);
    auto const out = age_and_kill(g, flat_mortality(kMin, kMax, 0.0), nullptr, false);
    EXPECT_EQ(out.year(), 2007);
    EXPECT_EQ(out.count(Sex::male, 22, 2, Status::active), 10.0);
    EXPECT_EQ(out.amount(Sex::male, 22, 2, Status::active), 5.0);
    EXPECT_EQ(out.count(Sex::female, 24, 2, Status::retired), 4.0);
    EXPECT_EQ(out.total(), 14.0);
}

TEST(AgeAndKill, CertainDeathEmptiesGrid)
{
    std::mt19937_64 gen(1);
    auto const g = random_small_grid(gen, 2006, 0.5);
    auto const out = age_and_kill(g, flat_mortality(kMin, kMax, 1.0), nullptr, false);
    EXPECT_EQ(out.total(), 0.0);
}

TEST(AgeAndKill, SingleCellHandArithmetic)
{
    CohortGrid g(kMin, kMax, 2006);
    g.add(Sex::male, 22, 0, Status::active, 100.0, 0.0);
    auto const out = age_and_kill(g, flat_mortality(kMin, kMax, 0.1), nullptr, false);
    EXPECT_DOUBLE_EQ(out.count(Sex::male, 23, 1, Status::active), 90.0);
}

TEST(AgeAndKill, TerminalAgeLeavesGrid)
{
    CohortGrid g(kMin, kMax, 2006);
    g.add(Sex::female, kMax, 0, Status::retired, 50.0, 1.0);
    auto const out = age_and_kill(g, flat_mortality(kMin, kMax, 0.0), nullptr, false);
    EXPECT_EQ(out.total(), 0.0);
}

TEST(AgeAndKill, OneDrawPerSexAndAge)
{
    CohortGrid g(kMin, kMax, 2006);
    g.add(Sex::male, 21, 1, Status::active, 10.0, 0.0);
    NormalSource src(3, 0, Lane::mortality);
    auto const out = age_and_kill(g, flat_mortality(kMin, kMax, 0.01, 0.002), &src, true);
    EXPECT_EQ(src.drawn(), 2u * (kMax - kMin + 1));
    EXPECT_EQ(out.year(), 2007);
}

TEST(AgeAndKill, SharedDrawAcrossSeniorityAndStatus)
{
    CohortGrid g(kMin, kMax, 2006);
    g.add(Sex::male, 22, 0, Status::active, 100.0, 0.0);
    g.add(Sex::male, 22, 2, Status::active, 100.0, 0.0);
    g.add(Sex::male, 22, 1, Status::retired, 100.0, 1.0);
    NormalSource src(8, 2, Lane::mortality);
    auto const out = age_and_kill(g, flat_mortality(kMin, kMax, 0.2, 0.1), &src, true);
    double const a = out.count(Sex::male, 23, 1, Status::active);
    EXPECT_EQ(a, out.count(Sex::male, 23, 3, Status::active));
    EXPECT_EQ(a, out.count(Sex::male, 23, 1, Status::retired));
    EXPECT_NE(a, 80.0);
}

TEST(AgeAndKill, StochasticRequiresSource)
{
    CohortGrid g(kMin, kMax, 2006);
    EXPECT_THROW(age_and_kill(g, flat_mortality(kMin, kMax, 0.1), nullptr, true), StateError);
}

TEST(AgeAndKill, HigherMortalityNeverRaisesCounts)
{
    std::mt19937_64 gen(4);
    auto const g = random_small_grid(gen, 2006, 0.3);
    CohortGrid prev = age_and_kill(g, flat_mortality(kMin, kMax, 0.0), nullptr, false);
    for (double q : {0.05, 0.1, 0.3, 0.7, 1.0}) {
        auto const out = age_and_kill(g, flat_mortality(kMin, kMax, q), nullptr, false);
        for (Status st : kStatuses) {
            for (Sex s : kSexes) {
                for (int x = kMin; x <= kMax; ++x) {
                    for (int a = 0; a <= kMax - kMin; ++a) {
                        EXPECT_LE(out.count(s, x, a, st), prev.count(s, x, a, st));
                    }
                }
            }
        }
        prev = out;
    }
}

TEST(InjectNewEntrants, Examples)
{
    CohortGrid g(25, 40, 2020);
    auto const same = inject_new_entrants(g, {0.0, 0.0}, 29);
    EXPECT_EQ(same, g);
    auto const one = inject_new_entrants(g, {595.0, 0.0}, 29);
    EXPECT_EQ(one.count(Sex::male, 29, 0, Status::active), 595.0);
    EXPECT_EQ(one.total(), 595.0);
    auto const two = inject_new_entrants(one, {595.0, 10.5}, 29);
    EXPECT_EQ(two.count(Sex::male, 29, 0, Status::active), 1190.0);
    EXPECT_EQ(two.count(Sex::female, 29, 0, Status::active), 10.5);
}

TEST(RetireEligible, Examples)
{
    CohortGrid g(25, 80, 2020);
    g.add(Sex::male, 66, 31, Status::active, 3.0, 1.0);
    g.add(Sex::male, 66, 5, Status::active, 2.0, 1.0);
    g.add(Sex::female, 70, 1, Status::retired, 4.0, 9.0);
    auto const out = retire_eligible(g, single_rule(65, 30));
    EXPECT_EQ(out.count(Sex::male, 66, 31, Status::retired), 3.0);
    EXPECT_EQ(out.count(Sex::male, 66, 31, Status::active), 0.0);
    EXPECT_EQ(out.count(Sex::male, 66, 5, Status::active), 2.0);
    EXPECT_EQ(out.count(Sex::female, 70, 1, Status::retired), 4.0);
    EXPECT_EQ(out.total(), g.total());
}

TEST(RetireEligible, FirstListedTypeWinsAndAssignSeesIt)
{
    CohortGrid g(25, 80, 2020);
    g.add(Sex::male, 66, 40, Status::active, 1.0, 100.0);
    g.add(Sex::male, 66, 10, Status::active, 1.0, 100.0);
    RetirementRule rule{{requirement("old_age", 64, 35), requirement("contributory", 64, 0)}};
    auto const out = retire_eligible(g, rule, [](std::size_t which, Sex, int, int, double amount) {
        return static_cast<double>(which) * 1000.0 + amount;
    });
    EXPECT_EQ(out.amount(Sex::male, 66, 40, Status::retired), 100.0);
    EXPECT_EQ(out.amount(Sex::male, 66, 10, Status::retired), 1100.0);
}

TEST(RetireEligible, YearDependentThresholds)
{
    RetirementRequirement r;
    r.benefit = "b";
    r.age_threshold = {YearSchedule<int>({{2000, 60}, {2030, 65}}),
                       YearSchedule<int>({{2000, 60}, {2030, 65}})};
    r.min_seniority = {YearSchedule<int>::constant(0), YearSchedule<int>::constant(0)};
    RetirementRule const rule{{r}};
    CohortGrid g(25, 80, 2029);
    g.add(Sex::male, 63, 5, Status::active, 1.0, 0.0);
    EXPECT_EQ(retire_eligible(g, rule).total(Status::retired), 1.0);
    g.set_year(2030);
    EXPECT_EQ(retire_eligible(g, rule).total(Status::retired), 0.0);
}

TEST(EvolveYear, PureAgeing)
{
    std::mt19937_64 gen(10);
    auto const g = random_small_grid(gen, 2006, 0.4);
    auto const mm = flat_mortality(kMin, kMax, 0.0);
    auto const out = evolve_year(g, mm, single_rule(200, 0), {0.0, 0.0}, kMin, nullptr, false);
    EXPECT_EQ(out, age_and_kill(g, mm, nullptr, false));
    EXPECT_EQ(out.year(), 2007);
}

TEST(EvolveYear, Deterministic)
{
    std::mt19937_64 gen(11);
    auto const g = random_small_grid(gen, 2006, 0.4);
    auto const mm = flat_mortality(kMin, kMax, 0.05, 0.01);
    auto run = [&] {
        NormalSource src(5, 1, Lane::mortality);
        return evolve_year(g, mm, single_rule(22, 1), {3.0, 4.0}, kMin, &src, true);
    };
    EXPECT_EQ(run(), run());
}

// Exhaustive scan: random grids over every (x_hat, a_hat) pair and several
// mortality levels; every cell of the result is checked against the
// expected survivor count and the active/retired partition.
TEST(EvolveYear, ConservationAndPartitionExhaustive)
{
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 12; ++trial) {
        auto const g = random_small_grid(gen, 2010, 0.25);
        double const q = 0.02 * trial;
        auto const mm = flat_mortality(kMin, kMax, q);
        BySex<double> const ne = {1.5 * trial, 0.5 * trial};
        for (int x_hat = kMin - 1; x_hat <= kMax; ++x_hat) {
            for (int a_hat = 0; a_hat <= kMaxSen + 1; ++a_hat) {
                auto const rule = single_rule(x_hat, a_hat);
                auto const out = evolve_year(g, mm, rule, ne, kMin, nullptr, false);
                auto const aged = age_and_kill(g, mm, nullptr, false);

                // survivors: everything below the terminal age times (1 - q)
                double survivors = 0.0;
                for (Status st : kStatuses) {
                    g.for_each(st, [&](Sex, int x, int, CohortGrid::Cell const& c) {
                        if (x < kMax) {
                            survivors += c.count * (1.0 - q);
                        }
                    });
                }
                EXPECT_NEAR(out.total(), survivors + ne[0] + ne[1], 1e-9);

                for (Sex s : kSexes) {
                    for (int x = kMin; x <= kMax; ++x) {
                        for (int a = 0; a <= kMax - kMin; ++a) {
                            double const act = out.count(s, x, a, Status::active);
                            double const ret = out.count(s, x, a, Status::retired);
                            ASSERT_GE(act, 0.0);
                            ASSERT_GE(ret, 0.0);
                            bool const eligible = x > x_hat && a >= a_hat;
                            if (eligible) {
                                EXPECT_EQ(act, 0.0);
                            }
                            double const injected = (x == kMin && a == 0) ? ne[index(s)] : 0.0;
                            double const before_act = aged.count(s, x, a, Status::active) + injected;
                            double const before_ret = aged.count(s, x, a, Status::retired);
                            if (eligible) {
                                EXPECT_NEAR(ret, before_ret + before_act, 1e-9);
                            }
                            else {
                                EXPECT_NEAR(act, before_act, 1e-9);
                                EXPECT_NEAR(ret, before_ret, 1e-9);
                            }
                            if (act > 0.0) {
                                EXPECT_LE(a, x - kMin);
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST(EvolveYear, RetiredSeniorityFrozen)
{
    CohortGrid g(kMin, kMax, 2006);
    g.add(Sex::male, 21, 1, Status::retired, 5.0, 2.0);
    auto out = g;
    for (int i = 0; i < 3; ++i) {
        out = evolve_year(out, flat_mortality(kMin, kMax, 0.0), single_rule(0, 0), {0.0, 0.0},
                          kMin, nullptr, false);
    }
    EXPECT_EQ(out.count(Sex::male, 24, 1, Status::retired), 5.0);
    EXPECT_EQ(out.amount(Sex::male, 24, 1, Status::retired), 2.0);
}

TEST(CohortGrid, AddMergesAmountsAndRejectsBadInput)
{
    CohortGrid g(kMin, kMax, 2006);
    g.add(Sex::male, 22, 1, Status::active, 1.0, 10.0);
    g.add(Sex::male, 22, 1, Status::active, 3.0, 20.0);
    EXPECT_EQ(g.count(Sex::male, 22, 1, Status::active), 4.0);
    EXPECT_DOUBLE_EQ(g.amount(Sex::male, 22, 1, Status::active), 17.5);
    EXPECT_THROW(g.add(Sex::male, 22, 1, Status::active, -1.0, 0.0), ValidationError);
    EXPECT_THROW(g.add(Sex::male, 30, 1, Status::active, 1.0, 0.0), CoverageError);
    EXPECT_THROW(g.add(Sex::male, 22, kMax - kMin + 1, Status::active, 1.0, 0.0), CoverageError);
}
