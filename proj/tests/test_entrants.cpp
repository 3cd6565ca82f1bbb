#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "payg/montecarlo.hpp"
#include "test_support.hpp"

using namespace payg;
using payg::test::constant_params;
using payg::test::flat_population;
using payg::test::published_transitions;

namespace {

// Values from tests/oracles/pep_variance.py (numpy, 10^7 draws) for male
// entrants in 2020 on the bundled population series.
constexpr double kPop2011Male = 2267969.40;
constexpr double kSigmaPop2011Male = 34019.54;
constexpr double kOracleUntruncatedVariance = 121767.9;
constexpr double kOracleTruncatedVariance = 121024.4;
constexpr double kOracleTruncatedMean = 595.5505;

PopulationSeries const& bundled_population()
{
    return test::bundled_config().scenario.population;
}

} // namespace

TEST(SamplePop, Examples)
{
    PopulationSeries ps(18, 25);
    ps.set(Sex::male, 2000, {2266000.0, 0.0});
    ps.set(Sex::male, 2001, {1000.0, 500.0});
    EXPECT_EQ(sample_pop(ps, Sex::male, 2000, 4.2), 2266000.0);
    EXPECT_EQ(sample_pop(ps, Sex::male, 2001, -3.0), 0.0);
    EXPECT_EQ(sample_pop(ps, Sex::male, 2001, 1.0), 1500.0);
    EXPECT_THROW(sample_pop(ps, Sex::male, 1999, 0.0), CoverageError);
    EXPECT_THROW(sample_pop(ps, Sex::female, 2000, 0.0), CoverageError);
}

TEST(PopulationSeries, RejectsNegativeValues)
{
    PopulationSeries ps(18, 25);
    EXPECT_THROW(ps.set(Sex::male, 2000, {-1.0, 0.0}), ValidationError);
    EXPECT_THROW(ps.set(Sex::male, 2000, {1.0, -1.0}), ValidationError);
    EXPECT_THROW(PopulationSeries(26, 25), ValidationError);
}

TEST(SampleNewEntrants, DeterministicChainReproducesPublishedValue)
{
    auto pp = published_transitions();
    for (auto& set : pp.by_sex) {
        for (auto* f : {&set.p13, &set.p34, &set.p46, &set.p67}) {
            f->sigma = YearSchedule<double>::constant(0.0);
        }
    }
    PopulationSeries ps(18, 25);
    ps.set(Sex::male, 2011, {2266121.0, 0.0});
    NormalSource src(1, 0);
    EXPECT_NEAR(sample_new_entrants(pp, ps, Sex::male, 2020, src), 595.0, 0.5);
    EXPECT_EQ(src.drawn(), 5u);
}

TEST(SampleNewEntrants, AbsorbingZeroAndIdentityChain)
{
    auto zero = constant_params(1.0, 0.0);
    zero.by_sex[0].p46 = TransitionFactor::constant(0.0, 0.0);
    auto const ps = flat_population(1990, 2030, 1000.0, 0.0);
    NormalSource src(3, 0);
    EXPECT_EQ(sample_new_entrants(zero, ps, Sex::male, 2020, src), 0.0);
    EXPECT_EQ(sample_new_entrants(constant_params(1.0, 0.0), ps, Sex::female, 2020, src), 1000.0);
}

TEST(SampleNewEntrants, NonNegativeAndMonotoneInEachFactor)
{
    auto const pp = published_transitions();
    auto const& ps = bundled_population();
    // Evaluate the product directly with a scripted source: one factor's
    // eps sweeps while the others stay fixed.
    struct Scripted {
        std::array<double, 5> eps;
    };
    auto product = [&](Scripted const& s) {
        auto const& f = pp.by_sex[0];
        int const year = 2020;
        double v = sample_pop(ps, Sex::male, year - 9, s.eps[0]);
        v *= sample_truncated_affine(f.p13.at(year - 9), s.eps[1]);
        v *= sample_truncated_affine(f.p34.at(year - 4), s.eps[2]);
        v *= sample_truncated_affine(f.p46.at(year), s.eps[3]);
        v *= sample_truncated_affine(f.p67.at(year), s.eps[4]);
        return v;
    };
    for (std::size_t which = 0; which < 5; ++which) {
        double prev = -1.0;
        for (double e = -6.0; e <= 6.0; e += 0.05) {
            Scripted s{{0.3, -0.2, 0.5, 0.1, -0.4}};
            s.eps[which] = e;
            double const v = product(s);
            EXPECT_GE(v, 0.0);
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(ExpectedNewEntrants, PublishedSteadyStateValues)
{
    auto const pp = published_transitions();
    auto const& ps = bundled_population();
    EXPECT_NEAR(expected_new_entrants(pp, ps, Sex::male, 2020), 595.0, 1.0);
    EXPECT_NEAR(expected_new_entrants(pp, ps, Sex::female, 2020), 516.0, 1.0);
}

TEST(ExpectedNewEntrants, ZeroPopulationAndLinearity)
{
    auto const pp = published_transitions();
    auto const zero = flat_population(2000, 2020, 0.0, 0.0);
    EXPECT_EQ(expected_new_entrants(pp, zero, Sex::male, 2015), 0.0);

    auto const& ps = bundled_population();
    for (double c : {0.5, 2.0, 3.7}) {
        auto const scaled = ps.scaled(c);
        for (int y = 2006; y <= 2059; y += 7) {
            for (Sex s : kSexes) {
                EXPECT_DOUBLE_EQ(expected_new_entrants(pp, scaled, s, y),
                                 c * expected_new_entrants(pp, ps, s, y));
            }
        }
    }
}

TEST(ExpectedNewEntrants, UsesLaggedScheduleValues)
{
    auto pp = constant_params(1.0, 0.0);
    auto& m = pp.by_sex[0];
    m.p13.mean = YearSchedule<double>({{1990, 0.1}, {2011, 0.2}});
    m.p34.mean = YearSchedule<double>({{1990, 0.3}, {2016, 0.4}});
    m.p46.mean = YearSchedule<double>({{1990, 0.5}, {2020, 0.6}});
    auto const ps = flat_population(1990, 2030, 1000.0, 0.0);
    // 2020: p13 at 2011, p34 at 2016, p46/p67 at 2020
    EXPECT_DOUBLE_EQ(expected_new_entrants(pp, ps, Sex::male, 2020), 1000.0 * 0.2 * 0.4 * 0.6);
    // 2019: p13 at 2010, p34 at 2015, p46 at 2019
    EXPECT_DOUBLE_EQ(expected_new_entrants(pp, ps, Sex::male, 2019), 1000.0 * 0.1 * 0.3 * 0.5);
}

TEST(ExpectedNewEntrants, CoverageError)
{
    auto const ps = flat_population(2000, 2010, 1.0, 0.0);
    EXPECT_THROW(expected_new_entrants(published_transitions(), ps, Sex::male, 2025), CoverageError);
}

TEST(VarianceNewEntrants, Examples)
{
    auto const ps = flat_population(2000, 2030, 1000.0, 0.0);
    EXPECT_EQ(variance_new_entrants(constant_params(0.7, 0.0), ps, Sex::male, 2020), 0.0);

    PopulationSeries unit(18, 25);
    unit.set(Sex::male, 2011, {0.0, 1.0});
    EXPECT_DOUBLE_EQ(variance_new_entrants(constant_params(1.0, 0.0), unit, Sex::male, 2020), 1.0);
}

TEST(VarianceNewEntrants, FixtureValueMatchesOracles)
{
    auto const& ps = bundled_population();
    ASSERT_EQ(ps.at(Sex::male, 2011).expected, kPop2011Male);
    ASSERT_EQ(ps.at(Sex::male, 2011).sigma, kSigmaPop2011Male);
    double const v = variance_new_entrants(published_transitions(), ps, Sex::male, 2020);
    EXPECT_NEAR(v, 121834.14, 0.05);
    EXPECT_NEAR(v / kOracleUntruncatedVariance, 1.0, 0.01);
    // The printed second-moment form would be far off.
    double const mean = expected_new_entrants(published_transitions(), ps, Sex::male, 2020);
    EXPECT_GT(std::abs(v + mean * mean - kOracleUntruncatedVariance) / kOracleUntruncatedVariance,
              1.0);
}

// Independent check of the closed form: brute-force product of untruncated
// normals with the standard library generator.
TEST(VarianceNewEntrants, BruteForceUntruncated)
{
    std::mt19937_64 gen(12345);
    std::normal_distribution<double> z;
    double const factors[5][2] = {{kPop2011Male, kSigmaPop2011Male},
                                  {0.0090, 0.0005},
                                  {0.5110, 0.1996},
                                  {0.0893, 0.0320},
                                  {0.6388, 0.1108}};
    int const n = 2'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double p = 1.0;
        for (auto const& f : factors) {
            p *= f[0] + f[1] * z(gen);
        }
        sum += p;
        sum2 += p * p;
    }
    double const mean = sum / n;
    double const var = (sum2 - n * mean * mean) / (n - 1);
    double const closed = variance_new_entrants(published_transitions(), bundled_population(), Sex::male, 2020);
    EXPECT_NEAR(var / closed, 1.0, 0.01);
}

TEST(SimulateEntrants, ZeroSigmaEqualsExpectation)
{
    auto const pp = constant_params(0.5, 0.0);
    auto const ps = flat_population(1990, 2040, 1e6, 0.0);
    NormalSource src(9, 4);
    auto const path = simulate_entrants_path(pp, ps, 2006, 2030, src);
    EXPECT_EQ(path, expected_entrants_path(pp, ps, 2006, 2030));
}

TEST(SimulateEntrants, SameSeedSamePath)
{
    auto const pp = published_transitions();
    auto const& ps = bundled_population();
    NormalSource a(77, 3);
    NormalSource b(77, 3);
    EXPECT_EQ(simulate_entrants_path(pp, ps, 2006, 2059, a),
              simulate_entrants_path(pp, ps, 2006, 2059, b));
    EXPECT_EQ(a.drawn(), 54u * 2u * 5u);
}

TEST(SimulateEntrants, MonteCarloMeanWithinThreeStandardErrors)
{
    auto const rows = run_entrants(published_transitions(), bundled_population(), 2018, 2022, 20060101,
                                   10'000);
    for (auto const& r : rows) {
        EXPECT_LT(std::abs(r.mean - r.expected), 3.0 * r.std_error)
            << r.year << " " << to_string(r.sex);
        EXPECT_GE(r.mean, 0.0);
    }
}

TEST(SimulateEntrants, TruncatedVarianceMatchesOracle)
{
    auto const rows = run_entrants(published_transitions(), bundled_population(), 2020, 2020, 4242,
                                   100'000);
    auto const& male = rows[0];
    ASSERT_EQ(male.sex, Sex::male);
    EXPECT_NEAR(male.std * male.std / kOracleTruncatedVariance, 1.0, 0.05);
    EXPECT_NEAR(male.mean, kOracleTruncatedMean, 4.0 * male.std_error);
}

TEST(RunEntrants, ThreadCountDoesNotMatter)
{
    auto const pp = published_transitions();
    auto const& ps = bundled_population();
    auto const serial = run_entrants(pp, ps, 2006, 2059, 5, 300, 1);
    auto const parallel = run_entrants(pp, ps, 2006, 2059, 5, 300, 3);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].mean, parallel[i].mean);
        EXPECT_EQ(serial[i].std, parallel[i].std);
    }
}

//---------------------------------------------------------------------------//
// Estimation
//---------------------------------------------------------------------------//

namespace {

EducationHistory history_from_ratios(int first, int last, double r13, double r34, double r46,
                                     double r67)
{
    EducationHistory h;
    for (int y = first; y <= last; ++y) {
        auto& rec = h[y];
        rec.population = 1e6 + 1000.0 * (y - first);
        rec.enrolments = rec.population * r13;
    }
    for (int y = first; y <= last; ++y) {
        auto& rec = h[y];
        double const prev_enrol = h.contains(y - 5) ? h[y - 5].enrolments : rec.enrolments;
        rec.graduations = prev_enrol * r34;
    }
    for (int y = first; y <= last; ++y) {
        auto& rec = h[y];
        double const prev_grad = h.contains(y - 4) ? h[y - 4].graduations : rec.graduations;
        rec.new_professionals = prev_grad * r46;
        rec.cancellations = 0.1 * rec.new_professionals;
        rec.new_fund_members = rec.new_professionals * r67 + rec.cancellations;
    }
    return h;
}

} // namespace

TEST(Estimation, RecoversKnownRatiosExactly)
{
    auto const h = history_from_ratios(1985, 2005, 0.009, 0.511, 0.0893, 0.6388);
    auto const est = estimate_transition_moments(h, 5, 4);
    EXPECT_NEAR(est.p13.mean, 0.009, 1e-15);
    EXPECT_NEAR(est.p34.mean, 0.511, 1e-14);
    EXPECT_NEAR(est.p46.mean, 0.0893, 1e-14);
    EXPECT_NEAR(est.p67.mean, 0.6388, 1e-14);
    for (auto const* m : {&est.p13, &est.p34, &est.p46, &est.p67}) {
        EXPECT_NEAR(m->sigma, 0.0, 1e-14);
    }
    EXPECT_EQ(est.p13.count, 21u);
    EXPECT_EQ(est.p34.count, 16u);
    EXPECT_EQ(est.p46.count, 17u);
}

TEST(Estimation, TwoYearRatioSeries)
{
    EducationHistory h;
    h[2000] = {100.0, 40.0, 0.0, 0.0, 0.0, 0.0};
    h[2001] = {100.0, 60.0, 0.0, 0.0, 0.0, 0.0};
    h[2000].new_professionals = h[2001].new_professionals = 1.0;
    h[2000].graduations = h[2001].graduations = 1.0;
    // Lags of one year leave a single lagged ratio; use them only for P13.
    EXPECT_THROW(estimate_transition_moments(h, 1, 1), EstimationError);
    auto const m = detail::sample_moments({0.4, 0.6}, "P13");
    EXPECT_DOUBLE_EQ(m.mean, 0.5);
    EXPECT_NEAR(m.sigma, 0.1414213562373095, 1e-15);
}

TEST(Estimation, RatiosAboveOneAreKept)
{
    auto h = history_from_ratios(1985, 2005, 0.01, 0.5, 0.1, 0.6);
    for (auto& [y, rec] : h) {
        if (h.contains(y - 5)) {
            rec.graduations = 1.3 * h[y - 5].enrolments;
        }
    }
    auto const est = estimate_transition_moments(h, 5, 4);
    EXPECT_GT(est.p34.mean, 1.0);
}

TEST(Estimation, ZeroDenominatorNamesYearAndRatio)
{
    auto h = history_from_ratios(1985, 2005, 0.01, 0.5, 0.1, 0.6);
    h[1997].new_professionals = 0.0;
    try {
        estimate_transition_moments(h, 5, 4);
        FAIL() << "expected an estimation error";
    }
    catch (EstimationError const& e) {
        std::string const msg = e.what();
        EXPECT_NE(msg.find("1997"), std::string::npos);
        EXPECT_NE(msg.find("P67"), std::string::npos);
    }
}

TEST(Estimation, CancellationsNetAndFloored)
{
    auto h = history_from_ratios(1985, 2005, 0.01, 0.5, 0.1, 0.6);
    for (auto& [y, rec] : h) {
        rec.cancellations = rec.new_fund_members + 5.0;
    }
    auto const est = estimate_transition_moments(h, 5, 4);
    EXPECT_EQ(est.p67.mean, 0.0);
    EXPECT_EQ(est.p67.sigma, 0.0);
}

TEST(Estimation, BundledHistoryIsNearPublishedTransitions)
{
    auto const hist = load_education_history(read_csv(test::data_dir() / "education_history.csv"));
    auto const params = published_transitions();
    for (Sex s : kSexes) {
        auto const est = estimate_transition_moments(hist[index(s)], 5, 4);
        auto const& ref = params.by_sex[index(s)];
        for (auto [got, want] : {std::pair{est.p13, ref.p13}, std::pair{est.p34, ref.p34},
                                 std::pair{est.p46, ref.p46}, std::pair{est.p67, ref.p67}}) {
            EXPECT_NEAR(got.mean, want.mean.at(2006), 3.0 * want.sigma.at(2006)) << sex_name(s);
            EXPECT_GT(got.sigma, 0.0);
        }
    }
}
