#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace payg {

enum class Sex : int { male = 0, female = 1 };

inline constexpr int kSexCount = 2;
inline constexpr std::array<Sex, kSexCount> kSexes = {Sex::male, Sex::female};

constexpr int index(Sex s) noexcept
{
    return static_cast<int>(s);
}

inline std::string_view to_string(Sex s) noexcept
{
    return s == Sex::male ? "M" : "F";
}

inline std::string_view sex_name(Sex s) noexcept
{
    return s == Sex::male ? "male" : "female";
}

inline Sex parse_sex(std::string_view text)
{
    if (text == "M" || text == "m" || text == "male") {
        return Sex::male;
    }
    if (text == "F" || text == "f" || text == "female") {
        return Sex::female;
    }
    throw ValidationError("unknown sex '" + std::string(text) + "' (expected M or F)");
}

/// One value per sex.
template<class T>
using BySex = std::array<T, kSexCount>;

//---------------------------------------------------------------------------//
/*!
 * Piecewise-constant function of the calendar year.
 *
 * Each step holds from its start year until the next step. Years before the
 * first step are not covered; a constant schedule covers every year.
 */
template<class T>
class YearSchedule {
public:
    struct Step {
        int from;
        T value;

        friend bool operator==(Step const&, Step const&) = default;
    };

    YearSchedule() = default;

    static YearSchedule constant(T value) { return YearSchedule({Step{INT_MIN, value}}); }

    explicit YearSchedule(std::vector<Step> steps) : steps_(std::move(steps))
    {
        if (steps_.empty()) {
            throw ValidationError("schedule has no steps");
        }
        for (std::size_t i = 1; i < steps_.size(); ++i) {
            if (steps_[i].from <= steps_[i - 1].from) {
                throw ValidationError("schedule steps must have strictly increasing years");
            }
        }
    }

    T const& at(int year) const
    {
        auto it = std::upper_bound(steps_.begin(), steps_.end(), year,
                                   [](int y, Step const& s) { return y < s.from; });
        if (it == steps_.begin()) {
            throw CoverageError("schedule does not cover year " + std::to_string(year));
        }
        return std::prev(it)->value;
    }

    bool covers(int year) const noexcept { return !steps_.empty() && steps_.front().from <= year; }
    bool is_constant() const noexcept { return steps_.size() == 1 && steps_.front().from == INT_MIN; }
    std::vector<Step> const& steps() const noexcept { return steps_; }

    template<class F>
    bool all_of(F&& pred) const
    {
        return std::all_of(steps_.begin(), steps_.end(),
                           [&](Step const& s) { return pred(s.value); });
    }

    friend bool operator==(YearSchedule const&, YearSchedule const&) = default;

private:
    std::vector<Step> steps_;
};

//---------------------------------------------------------------------------//
/*!
 * Per-capita amount by sex and age over a contiguous age range.
 *
 * Ages without data hold NaN so that a lookup on an uncovered age can be
 * reported instead of silently yielding zero.
 */
class AgeProfile {
public:
    AgeProfile() = default;
    AgeProfile(int min_age, int max_age)
        : min_age_{min_age}, max_age_{max_age}
    {
        if (max_age < min_age) {
            throw ValidationError("age profile: max_age < min_age");
        }
        for (auto& v : values_) {
            v.assign(static_cast<std::size_t>(max_age - min_age + 1),
                     std::numeric_limits<double>::quiet_NaN());
        }
    }

    void set(Sex s, int age, double value)
    {
        check(age);
        values_[index(s)][static_cast<std::size_t>(age - min_age_)] = value;
    }

    /// NaN when the age is outside the range or was never set.
    double get(Sex s, int age) const noexcept
    {
        if (age < min_age_ || age > max_age_ || values_[index(s)].empty()) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return values_[index(s)][static_cast<std::size_t>(age - min_age_)];
    }

    bool has(Sex s, int age) const noexcept { return !std::isnan(get(s, age)); }
    int min_age() const noexcept { return min_age_; }
    int max_age() const noexcept { return max_age_; }

    friend bool operator==(AgeProfile const& a, AgeProfile const& b)
    {
        if (a.min_age_ != b.min_age_ || a.max_age_ != b.max_age_) {
            return false;
        }
        for (Sex s : kSexes) {
            for (int x = a.min_age_; x <= a.max_age_; ++x) {
                double const u = a.get(s, x);
                double const v = b.get(s, x);
                if (!(u == v || (std::isnan(u) && std::isnan(v)))) {
                    return false;
                }
            }
        }
        return true;
    }

private:
    int min_age_ = 0;
    int max_age_ = -1;
    BySex<std::vector<double>> values_;

    void check(int age) const
    {
        if (age < min_age_ || age > max_age_) {
            throw CoverageError("age " + std::to_string(age) + " outside profile range ["
                                + std::to_string(min_age_) + ", " + std::to_string(max_age_)
                                + "]");
        }
    }
};

} // namespace payg
