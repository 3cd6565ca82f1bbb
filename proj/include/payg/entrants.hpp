#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "stochastic.hpp"

namespace payg {

//---------------------------------------------------------------------------//
// Population-Education-Profession chain for the new entrants of a fund with
// restricted entrance:
//
//   NE(t) = POP(t-h-k) * P13(t-h-k) * P34(t-k) * P46(t) * P67(t)
//
// POP is the aggregated reference population (ages m..M), P13 the
// enrolment rate, P34 the graduation rate h years later, P46 the admission
// rate to the profession k years after graduating and P67 the enrolment rate
// in the fund. Each factor is an affine normal floored at zero.
//---------------------------------------------------------------------------//

/// Mean and deviation of one transition factor, piecewise constant in time.
struct TransitionFactor {
    YearSchedule<double> mean = YearSchedule<double>::constant(0.0);
    YearSchedule<double> sigma = YearSchedule<double>::constant(0.0);

    TruncatedAffineParams at(int year) const { return {mean.at(year), sigma.at(year)}; }

    static TransitionFactor constant(double m, double s)
    {
        return {YearSchedule<double>::constant(m), YearSchedule<double>::constant(s)};
    }

    friend bool operator==(TransitionFactor const&, TransitionFactor const&) = default;
};

struct TransitionSet {
    TransitionFactor p13; ///< population -> enrolled
    TransitionFactor p34; ///< enrolled -> graduated
    TransitionFactor p46; ///< graduated -> professional
    TransitionFactor p67; ///< professional -> fund member

    friend bool operator==(TransitionSet const&, TransitionSet const&) = default;
};

struct PepParams {
    BySex<TransitionSet> by_sex;
    int study_lag = 5;    ///< h
    int training_lag = 4; ///< k

    int total_lag() const noexcept { return study_lag + training_lag; }

    friend bool operator==(PepParams const&, PepParams const&) = default;
};

inline void validate(PepParams const& pp)
{
    if (pp.study_lag <= 0 || pp.training_lag <= 0) {
        throw ValidationError("entrants: study_lag and training_lag must be > 0");
    }
    for (Sex s : kSexes) {
        auto const& set = pp.by_sex[index(s)];
        std::pair<char const*, TransitionFactor const*> const factors[] = {
            {"p13", &set.p13}, {"p34", &set.p34}, {"p46", &set.p46}, {"p67", &set.p67}};
        for (auto const& [name, f] : factors) {
            std::string const where = std::string("entrants.transitions.")
                                      + std::string(sex_name(s)) + "." + name;
            if (!f->mean.all_of([](double v) { return v >= 0.0; })) {
                throw ValidationError(where + ".mean: must be >= 0");
            }
            if (!f->sigma.all_of([](double v) { return v >= 0.0; })) {
                throw ValidationError(where + ".sigma: must be >= 0");
            }
        }
    }
}

//---------------------------------------------------------------------------//
/*!
 * Expected reference population (already summed over ages m..M) and its
 * standard deviation, by calendar year and sex.
 */
class PopulationSeries {
public:
    struct Point {
        double expected = 0.0;
        double sigma = 0.0;

        friend bool operator==(Point const&, Point const&) = default;
    };

    PopulationSeries() = default;
    PopulationSeries(int min_age, int max_age) : min_age_{min_age}, max_age_{max_age}
    {
        if (min_age > max_age) {
            throw ValidationError("population: age band m must be <= M");
        }
    }

    void set(Sex s, int year, Point p)
    {
        if (!(p.expected >= 0.0) || !(p.sigma >= 0.0)) {
            throw ValidationError("population: expected_pop and sigma_pop must be >= 0 (year "
                                  + std::to_string(year) + ")");
        }
        by_year_[year][index(s)] = p;
        present_[year][index(s)] = true;
    }

    Point const& at(Sex s, int year) const
    {
        auto it = by_year_.find(year);
        if (it == by_year_.end() || !present_.at(year)[index(s)]) {
            throw CoverageError("population series does not cover year " + std::to_string(year)
                                + " (" + std::string(sex_name(s)) + ")");
        }
        return it->second[index(s)];
    }

    bool covers(int first, int last) const
    {
        for (int y = first; y <= last; ++y) {
            auto it = present_.find(y);
            if (it == present_.end() || !it->second[0] || !it->second[1]) {
                return false;
            }
        }
        return true;
    }

    /// First uncovered year in [first, last], or last + 1 when fully covered.
    int first_gap(int first, int last) const
    {
        for (int y = first; y <= last; ++y) {
            auto it = present_.find(y);
            if (it == present_.end() || !it->second[0] || !it->second[1]) {
                return y;
            }
        }
        return last + 1;
    }

    /// Multiplies every expected value (not sigma) by a constant.
    PopulationSeries scaled(double factor) const
    {
        PopulationSeries out = *this;
        for (auto& [year, pts] : out.by_year_) {
            for (auto& p : pts) {
                p.expected *= factor;
            }
        }
        return out;
    }

    int min_age() const noexcept { return min_age_; }
    int max_age() const noexcept { return max_age_; }
    std::map<int, BySex<Point>> const& points() const noexcept { return by_year_; }

    friend bool operator==(PopulationSeries const&, PopulationSeries const&) = default;

private:
    int min_age_ = 18;
    int max_age_ = 25;
    std::map<int, BySex<Point>> by_year_;
    std::map<int, BySex<bool>> present_;
};

/// New entrants by sex for consecutive years.
class EntrantsPath {
public:
    EntrantsPath() = default;
    EntrantsPath(int first_year, int last_year)
        : first_year_{first_year},
          values_(static_cast<std::size_t>(std::max(0, last_year - first_year + 1)), {0.0, 0.0})
    {
    }

    int first_year() const noexcept { return first_year_; }
    int last_year() const noexcept { return first_year_ + static_cast<int>(values_.size()) - 1; }

    double at(Sex s, int year) const { return values_.at(offset(year))[index(s)]; }
    BySex<double> const& at(int year) const { return values_.at(offset(year)); }
    void set(Sex s, int year, double ne) { values_.at(offset(year))[index(s)] = ne; }

    friend bool operator==(EntrantsPath const&, EntrantsPath const&) = default;

private:
    int first_year_ = 0;
    std::vector<BySex<double>> values_;

    std::size_t offset(int year) const
    {
        if (year < first_year_ || year > last_year()) {
            throw CoverageError("entrants path does not cover year " + std::to_string(year));
        }
        return static_cast<std::size_t>(year - first_year_);
    }
};

inline double sample_pop(PopulationSeries const& series, Sex s, int year, double eps)
{
    auto const& p = series.at(s, year);
    return sample_truncated_affine({p.expected, p.sigma}, eps);
}

/// Draws POP, P13, P34, P46 and P67 in that order (five normals).
inline double sample_new_entrants(PepParams const& pp, PopulationSeries const& series, Sex s,
                                  int year, NormalSource& src)
{
    auto const& f = pp.by_sex[index(s)];
    int const start = year - pp.total_lag();
    int const graduation = year - pp.training_lag;
    double const pop = sample_pop(series, s, start, src());
    double const p13 = sample_truncated_affine(f.p13.at(start), src());
    double const p34 = sample_truncated_affine(f.p34.at(graduation), src());
    double const p46 = sample_truncated_affine(f.p46.at(year), src());
    double const p67 = sample_truncated_affine(f.p67.at(year), src());
    return pop * p13 * p34 * p46 * p67;
}

inline double expected_new_entrants(PepParams const& pp, PopulationSeries const& series, Sex s,
                                    int year)
{
    auto const& f = pp.by_sex[index(s)];
    int const start = year - pp.total_lag();
    return series.at(s, start).expected * f.p13.mean.at(start)
           * f.p34.mean.at(year - pp.training_lag) * f.p46.mean.at(year) * f.p67.mean.at(year);
}

/*!
 * Variance of NE(t) for independent, untruncated factors:
 * prod(mean_i^2 + sigma_i^2) - prod(mean_i)^2.
 *
 * The product of second moments alone is E[NE^2], not the variance; the
 * squared mean is subtracted here. The zero floor on each factor is ignored,
 * which is a good approximation whenever mean/sigma is large.
 */
inline double variance_new_entrants(PepParams const& pp, PopulationSeries const& series, Sex s,
                                    int year)
{
    auto const& f = pp.by_sex[index(s)];
    int const start = year - pp.total_lag();
    int const graduation = year - pp.training_lag;
    auto const& pop = series.at(s, start);
    TruncatedAffineParams const factors[] = {
        {pop.expected, pop.sigma}, f.p13.at(start), f.p34.at(graduation), f.p46.at(year),
        f.p67.at(year)};
    double second = 1.0;
    double mean = 1.0;
    for (auto const& p : factors) {
        second *= p.mean * p.mean + p.sigma * p.sigma;
        mean *= p.mean;
    }
    return std::max(0.0, second - mean * mean);
}

/// Draw order: year ascending, males before females within a year.
inline EntrantsPath simulate_entrants_path(PepParams const& pp, PopulationSeries const& series,
                                           int first_year, int last_year, NormalSource& src)
{
    EntrantsPath path(first_year, last_year);
    for (int t = first_year; t <= last_year; ++t) {
        for (Sex s : kSexes) {
            path.set(s, t, sample_new_entrants(pp, series, s, t, src));
        }
    }
    return path;
}

inline EntrantsPath expected_entrants_path(PepParams const& pp, PopulationSeries const& series,
                                           int first_year, int last_year)
{
    EntrantsPath path(first_year, last_year);
    for (int t = first_year; t <= last_year; ++t) {
        for (Sex s : kSexes) {
            path.set(s, t, expected_new_entrants(pp, series, s, t));
        }
    }
    return path;
}

//---------------------------------------------------------------------------//
// Ratio estimation from education and membership statistics.
//---------------------------------------------------------------------------//

struct EducationRecord {
    double population = 0.0;
    double enrolments = 0.0;
    double graduations = 0.0;
    double new_professionals = 0.0;
    double new_fund_members = 0.0;
    double cancellations = 0.0;

    friend bool operator==(EducationRecord const&, EducationRecord const&) = default;
};

/// Calendar-year statistics for one sex.
using EducationHistory = std::map<int, EducationRecord>;

struct SampleMoments {
    double mean = 0.0;
    double sigma = 0.0; ///< n-1 denominator
    std::size_t count = 0;
};

namespace detail {

inline SampleMoments sample_moments(std::vector<double> const& xs, char const* ratio)
{
    if (xs.size() < 2) {
        throw EstimationError(std::string(ratio) + ": need at least two yearly ratios, have "
                              + std::to_string(xs.size()));
    }
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1)), xs.size()};
}

inline double ratio(double num, double den, int year, char const* name)
{
    if (!(den > 0.0)) {
        throw EstimationError(std::string(name) + ": zero denominator in year "
                              + std::to_string(year));
    }
    return num / den;
}

} // namespace detail

struct TransitionEstimate {
    SampleMoments p13, p34, p46, p67;

    TransitionSet to_transitions() const
    {
        return {TransitionFactor::constant(p13.mean, p13.sigma),
                TransitionFactor::constant(p34.mean, p34.sigma),
                TransitionFactor::constant(p46.mean, p46.sigma),
                TransitionFactor::constant(p67.mean, p67.sigma)};
    }
};

/*!
 * Sample moments of the yearly transition ratios.
 *
 *   P13(y) = enrolments(y) / population(y)
 *   P34(y) = graduations(y) / enrolments(y - h)
 *   P46(y) = new_professionals(y) / graduations(y - k)
 *   P67(y) = max(0, new_fund_members(y) - cancellations(y)) / new_professionals(y)
 *
 * A lagged ratio is formed for every year whose lagged year is present.
 * Ratios above one are kept.
 */
inline TransitionEstimate estimate_transition_moments(EducationHistory const& hist, int h, int k)
{
    if (h <= 0 || k <= 0) {
        throw EstimationError("study and training lags must be > 0");
    }
    std::vector<double> r13, r34, r46, r67;
    for (auto const& [y, rec] : hist) {
        r13.push_back(detail::ratio(rec.enrolments, rec.population, y, "P13"));
        if (auto it = hist.find(y - h); it != hist.end()) {
            r34.push_back(detail::ratio(rec.graduations, it->second.enrolments, y, "P34"));
        }
        if (auto it = hist.find(y - k); it != hist.end()) {
            r46.push_back(detail::ratio(rec.new_professionals, it->second.graduations, y, "P46"));
        }
        r67.push_back(detail::ratio(std::max(0.0, rec.new_fund_members - rec.cancellations),
                                    rec.new_professionals, y, "P67"));
    }
    return {detail::sample_moments(r13, "P13"), detail::sample_moments(r34, "P34"),
            detail::sample_moments(r46, "P46"), detail::sample_moments(r67, "P67")};
}

} // namespace payg
