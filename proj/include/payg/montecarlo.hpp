#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "projection.hpp"
#include "stats.hpp"

namespace payg {

enum class Series { fund_value, total_balance, pension_balance, entrants_male, entrants_female };

inline constexpr std::array<Series, 5> kSeries = {Series::fund_value, Series::total_balance,
                                                  Series::pension_balance, Series::entrants_male,
                                                  Series::entrants_female};

inline std::string_view to_string(Series s) noexcept
{
    switch (s) {
    case Series::fund_value: return "fund_value";
    case Series::total_balance: return "total_balance";
    case Series::pension_balance: return "pension_balance";
    case Series::entrants_male: return "entrants_male";
    case Series::entrants_female: return "entrants_female";
    }
    return "?";
}

inline Series parse_series(std::string_view text)
{
    for (Series s : kSeries) {
        if (to_string(s) == text) {
            return s;
        }
    }
    throw ValidationError("unknown series '" + std::string(text) + "'");
}

inline std::vector<double> default_probes()
{
    return {0.1, 1, 5, 25, 50, 75, 95, 99, 99.9};
}

struct SimulationSettings {
    std::uint64_t seed = 0;
    StochasticFlags flags;
    std::vector<double> probes = default_probes();
    std::vector<int> report_years;
    unsigned threads = 1;
};

struct ReplicationOutput {
    DemographicPath demography;
    std::vector<LedgerRow> ledger;
};

/// Value of a tracked series in one replication; fund value is the 1 January value.
inline double series_value(ReplicationOutput const& out, Series s, std::size_t year_index)
{
    auto const& row = out.ledger[year_index];
    switch (s) {
    case Series::fund_value: return row.value_start.euros();
    case Series::total_balance: return row.total_balance.euros();
    case Series::pension_balance: return row.pension_balance.euros();
    case Series::entrants_male: return out.demography.entrants.at(Sex::male, row.year);
    case Series::entrants_female: return out.demography.entrants.at(Sex::female, row.year);
    }
    return 0.0;
}

/*!
 * One replication: stream id = rep_index, one lane per risk factor.
 *
 * Factors whose flag is off use expected values and draw nothing.
 */
inline ReplicationOutput run_replication(Projector const& projector, std::uint64_t seed,
                                         StochasticFlags flags, std::uint64_t rep_index)
{
    ReplicationStreams streams(seed, rep_index);
    ReplicationOutput out;
    out.demography = projector.demography(flags, &streams);
    out.ledger = projector.fund(out.demography.flows, flags.returns, &streams.returns);
    return out;
}

struct FanChart {
    std::vector<double> probes;
    std::vector<int> years;
    /// [series][year][probe]
    std::array<std::vector<std::vector<double>>, kSeries.size()> values;

    std::vector<double> const& at(Series s, std::size_t year_index) const
    {
        return values[static_cast<std::size_t>(s)][year_index];
    }
};

struct MomentsTable {
    std::vector<int> years;
    /// [series][report year]
    std::array<std::vector<Moments>, kSeries.size()> values;

    Moments const& at(Series s, std::size_t year_index) const
    {
        return values[static_cast<std::size_t>(s)][year_index];
    }
};

struct SimulationResult {
    std::size_t replications = 0;
    std::vector<int> years;
    /// Sorted replication values, [series][year][rep].
    std::array<std::vector<std::vector<double>>, kSeries.size()> samples;
    FanChart fan;
    MomentsTable moments;

    std::vector<double> const& sample(Series s, int year) const
    {
        auto it = std::find(years.begin(), years.end(), year);
        if (it == years.end()) {
            throw CoverageError("simulation does not cover year " + std::to_string(year));
        }
        return samples[static_cast<std::size_t>(s)][static_cast<std::size_t>(it - years.begin())];
    }
};

/*!
 * Runs n_reps replications and reduces them to fan charts and moments.
 *
 * Replication i always uses stream i, and the reduction works on sorted
 * samples, so the result is identical for any thread count or completion
 * order. When neither entrants nor mortality is stochastic the demographic
 * path is the same in every replication and is computed once.
 */
inline SimulationResult run_simulation(Projector const& projector,
                                       SimulationSettings const& settings, std::size_t n_reps)
{
    if (n_reps == 0) {
        throw ValidationError("replications must be >= 1");
    }
    if (n_reps - 1 > NormalSource::kMaxStreamId) {
        throw ValidationError("too many replications");
    }
    for (double p : settings.probes) {
        if (!(p >= 0.0 && p <= 100.0)) {
            throw ValidationError("percentile probes must lie in [0, 100]");
        }
    }
    auto const& sc = projector.scenario();
    for (int y : settings.report_years) {
        if (y < sc.first_year || y > sc.last_year) {
            throw ValidationError("report year " + std::to_string(y) + " outside horizon");
        }
    }

    std::optional<DemographicPath> shared;
    if (!settings.flags.demographic()) {
        shared = projector.demography(settings.flags, nullptr);
    }

    SimulationResult res;
    res.replications = n_reps;
    for (int y = sc.first_year; y <= sc.last_year; ++y) {
        res.years.push_back(y);
    }
    auto const n_years = res.years.size();
    for (auto& s : res.samples) {
        s.assign(n_years, std::vector<double>(n_reps, 0.0));
    }

    auto work = [&](std::size_t rep) {
        ReplicationOutput out;
        if (shared) {
            ReplicationStreams streams(settings.seed, rep);
            out.demography = *shared;
            out.ledger = projector.fund(shared->flows, settings.flags.returns, &streams.returns);
        }
        else {
            out = run_replication(projector, settings.seed, settings.flags, rep);
        }
        for (Series s : kSeries) {
            auto& dest = res.samples[static_cast<std::size_t>(s)];
            for (std::size_t y = 0; y < n_years; ++y) {
                dest[y][rep] = series_value(out, s, y);
            }
        }
    };

    unsigned const threads = std::max(1u, std::min<unsigned>(settings.threads,
                                                             static_cast<unsigned>(n_reps)));
    if (threads == 1) {
        for (std::size_t rep = 0; rep < n_reps; ++rep) {
            work(rep);
        }
    }
    else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t rep = w; rep < n_reps; rep += threads) {
                        work(rep);
                    }
                }
                catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    for (auto& series : res.samples) {
        for (auto& v : series) {
            std::sort(v.begin(), v.end());
        }
    }

    res.fan.probes = settings.probes;
    res.fan.years = res.years;
    for (Series s : kSeries) {
        auto& dest = res.fan.values[static_cast<std::size_t>(s)];
        for (auto const& v : res.samples[static_cast<std::size_t>(s)]) {
            std::vector<double> row;
            row.reserve(settings.probes.size());
            for (double p : settings.probes) {
                row.push_back(percentile(v, p));
            }
            dest.push_back(std::move(row));
        }
    }

    res.moments.years = settings.report_years;
    if (n_reps >= 2) {
        for (Series s : kSeries) {
            auto& dest = res.moments.values[static_cast<std::size_t>(s)];
            for (int y : settings.report_years) {
                dest.push_back(moments(res.sample(s, y)));
            }
        }
    }
    return res;
}

/// Per (year, sex) new-entrant statistics: closed form and, optionally, simulated.
struct EntrantsRow {
    int year = 0;
    Sex sex = Sex::male;
    double expected = 0.0;
    double variance = 0.0; ///< closed form, untruncated factors
    std::size_t replications = 0;
    double mean = 0.0;     ///< simulated, when replications > 0
    double std = 0.0;
    double std_error = 0.0;
};

/*!
 * Entrants model alone over [first_year, last_year]. Replication i draws its
 * path from entrants lane stream i; n_reps = 0 skips the simulation.
 */
inline std::vector<EntrantsRow> run_entrants(PepParams const& pp, PopulationSeries const& series,
                                             int first_year, int last_year, std::uint64_t seed,
                                             std::size_t n_reps, unsigned threads = 1)
{
    if (last_year < first_year) {
        throw ValidationError("entrants: last_year < first_year");
    }
    validate(pp);
    auto const n_years = static_cast<std::size_t>(last_year - first_year + 1);
    // [year * 2 + sex][rep]
    std::vector<std::vector<double>> draws(n_years * 2, std::vector<double>(n_reps, 0.0));
    auto work = [&](std::size_t rep) {
        NormalSource src(seed, rep, Lane::entrants);
        auto const path = simulate_entrants_path(pp, series, first_year, last_year, src);
        for (std::size_t y = 0; y < n_years; ++y) {
            for (Sex s : kSexes) {
                draws[y * 2 + index(s)][rep] = path.at(s, first_year + static_cast<int>(y));
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n_reps, 1))));
    if (threads == 1) {
        for (std::size_t rep = 0; rep < n_reps; ++rep) {
            work(rep);
        }
    }
    else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t rep = w; rep < n_reps; rep += threads) {
                        work(rep);
                    }
                }
                catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    std::vector<EntrantsRow> rows;
    for (std::size_t y = 0; y < n_years; ++y) {
        int const year = first_year + static_cast<int>(y);
        for (Sex s : kSexes) {
            EntrantsRow r;
            r.year = year;
            r.sex = s;
            r.expected = expected_new_entrants(pp, series, s, year);
            r.variance = variance_new_entrants(pp, series, s, year);
            r.replications = n_reps;
            auto const& v = draws[y * 2 + index(s)];
            if (n_reps >= 1) {
                double sum = 0.0;
                for (double x : v) {
                    sum += x;
                }
                r.mean = sum / static_cast<double>(n_reps);
            }
            if (n_reps >= 2) {
                r.std = std::sqrt(sample_variance(v));
                r.std_error = r.std / std::sqrt(static_cast<double>(n_reps));
            }
            rows.push_back(r);
        }
    }
    return rows;
}

} // namespace payg
