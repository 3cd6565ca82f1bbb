#!/usr/bin/env python3
"""Regenerates the bundled scenario fixtures in this directory.

Everything here is deterministic. The population series is implied by
inverting the expected-entrants product against the published expected
new-entrant counts (year, male, female) in PUBLISHED_ENTRANTS below; the
census, income, mortality and benefit profiles are synthetic stand-ins sized to the
2005/2006 scale of the fund (about 44,700 members, 9.6 actives per
pensioner).
"""
import csv
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
STUDY_LAG, TRAINING_LAG = 5, 4

# year: (male, female) expected new entrants
PUBLISHED_ENTRANTS = {
    2006: (1119, 915), 2007: (1330, 1088), 2008: (1509, 1235), 2009: (1565, 1280),
    2010: (1280, 976), 2011: (1166, 904), 2012: (896, 724), 2013: (713, 573),
    2014: (650, 561), 2015: (621, 541), 2016: (613, 533), 2017: (606, 526),
    2018: (600, 521), 2019: (597, 518), 2020: (595, 516), 2021: (592, 513),
    2022: (591, 511), 2023: (589, 510), 2024: (585, 506), 2025: (582, 503),
    2026: (578, 499), 2027: (576, 497), 2028: (574, 495), 2029: (574, 495),
    2030: (576, 497), 2031: (579, 500), 2032: (584, 504), 2033: (588, 508),
    2034: (592, 511), 2035: (593, 512), 2036: (593, 512), 2037: (592, 511),
    2038: (590, 508), 2039: (586, 504), 2040: (578, 497), 2041: (570, 490),
    2042: (562, 484), 2043: (554, 476), 2044: (546, 470), 2045: (539, 464),
    2046: (574, 458), 2047: (568, 452), 2048: (561, 447), 2049: (556, 443),
    2050: (552, 440), 2051: (549, 437), 2052: (546, 435), 2053: (544, 434),
    2054: (543, 432), 2055: (542, 432), 2056: (542, 432), 2057: (542, 432),
    2058: (542, 432), 2059: (543, 433),
}

# (p13, p34, p46, p67) means
MEANS = {
    "M": (0.0090, 0.5110, 0.0893, 0.6388),
    "F": (0.0085, 0.5110, 0.0811, 0.6261),
}
SIGMAS = {
    "M": (0.0005, 0.1996, 0.0320, 0.1108),
    "F": (0.0007, 0.1996, 0.0291, 0.1088),
}
FORECAST_FROM = 2007
SIGMA_POP_SHARE = 0.015

MIN_AGE, MAX_AGE, ENTRY_AGE = 25, 100, 29
# Calibrated so the deterministic ledger lands near the published 2006
# contribution and disbursement totals and their long-run shape.
BULGE_AGE, BULGE_WIDTH, TAIL_WEIGHT = 38.0, 8.0, 0.1
INCOME_SCALE = 1.14
VAT_RATIO = 1.76
VECCHIAIA = 22000.0


def write(name, header, rows):
    with open(os.path.join(HERE, name), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def population():
    rows = []
    lag = STUDY_LAG + TRAINING_LAG
    for year in sorted(PUBLISHED_ENTRANTS):
        pop_year = year - lag
        for i, sex in enumerate(("M", "F")):
            prod = math.prod(MEANS[sex])
            expected = round(PUBLISHED_ENTRANTS[year][i] / prod, 2)
            sigma = round(SIGMA_POP_SHARE * expected, 2) if pop_year >= FORECAST_FROM else 0.0
            rows.append((pop_year, sex, f"{expected:.2f}", f"{sigma:.2f}"))
    write("population.csv", ("year", "sex", "expected_pop", "sigma_pop"), rows)


def mortality():
    # Gompertz-shaped 2006 death rates.
    rows = []
    for sex, (a, b) in (("M", (-10.5, 0.095)), ("F", (-11.2, 0.100))):
        for x in range(MIN_AGE, MAX_AGE + 1):
            q0 = min(1.0, math.exp(a + b * x))
            rows.append((sex, x, f"{q0:.6f}", "-0.015", f"{0.08 * q0:.7f}"))
    write("mortality.csv", ("sex", "age", "q0", "mu", "sigma"), rows)


def income(sex, x):
    # 2005 professional income by age, hump-shaped.
    peak = INCOME_SCALE * (88000.0 if sex == "M" else 62000.0)
    if x < ENTRY_AGE:
        return 0.0
    if x <= 52:
        return peak * (0.32 + 0.68 * (x - ENTRY_AGE) / (52 - ENTRY_AGE))
    return peak * max(0.35, 1.0 - 0.03 * (x - 52))


def income_profiles():
    rows = []
    for sex in ("M", "F"):
        for x in range(MIN_AGE, MAX_AGE + 1):
            inc = income(sex, x)
            rows.append((sex, x, f"{inc:.2f}", f"{VAT_RATIO * inc:.2f}"))
    write("income_profiles.csv", ("sex", "age", "income", "vat_sales"), rows)


def pension_profiles():
    legacy, vecchiaia = [], []
    for sex, scale in (("M", 1.0), ("F", 0.74)):
        for x in range(60, MAX_AGE + 1):
            legacy.append((sex, x, f"{scale * max(19000.0, 35000.0 - 400.0 * (x - 65)):.2f}"))
            vecchiaia.append((sex, x, f"{scale * VECCHIAIA:.2f}"))
    write("pension_2006.csv", ("sex", "age", "amount"), legacy)
    write("vecchiaia_profile.csv", ("sex", "age", "amount"), vecchiaia)


def census():
    # Members on 1 January 2006.
    rows = []
    entry_spread = (0.40, 0.25, 0.15, 0.12, 0.08)
    actives_total, retired_total = 40500.0, 4206.0
    # Bulge in the late thirties, thin tail towards retirement age.
    weights = {x: math.exp(-0.5 * ((x - BULGE_AGE) / BULGE_WIDTH) ** 2) + TAIL_WEIGHT
               for x in range(ENTRY_AGE, 65)}
    wsum = sum(weights.values())
    for sex, share in (("M", 0.68), ("F", 0.32)):
        for x, w in weights.items():
            n_age = actives_total * share * w / wsum
            spread = [(x - ENTRY_AGE - j, p) for j, p in enumerate(entry_spread) if x - ENTRY_AGE - j >= 0]
            psum = sum(p for _, p in spread)
            for a, p in spread:
                n = n_age * p / psum
                balance = 0.107 * income(sex, x) * 0.8 * a
                rows.append((sex, x, a, "active", f"{n:.4f}", f"{balance:.2f}"))
    rweights = {x: math.exp(-0.09 * (x - 65)) for x in range(65, 96)}
    rsum = sum(rweights.values())
    for sex, share in (("M", 0.85), ("F", 0.15)):
        for x, w in rweights.items():
            n = retired_total * share * w / rsum
            rows.append((sex, x, 30, "retired", f"{n:.4f}", ""))
    write("census_2006.csv", ("sex", "age", "seniority", "status", "count", "amount"), rows)


def positive_gauss(rng, mean, sigma):
    while True:
        v = rng.gauss(mean, sigma)
        if v > 0.0:
            return v


def education_history():
    # Synthetic 1985-2005 education/profession statistics whose ratios
    # scatter around the transition means.
    rng = random.Random(1985)
    rows = []
    for sex in ("M", "F"):
        means, sigmas = MEANS[sex], SIGMAS[sex]
        enrol, grads = {}, {}
        for y in range(1985, 2006):
            pop = 2.4e6 - 15000.0 * (y - 1985)
            r = [positive_gauss(rng, m, s) for m, s in zip(means, sigmas)]
            enrol[y] = pop * r[0]
            grads[y] = enrol[y - STUDY_LAG] * r[1] if y - STUDY_LAG in enrol else enrol[y] * means[1]
            prev_grads = grads.get(y - TRAINING_LAG, grads[y])
            prof = prev_grads * r[2]
            cancellations = 0.02 * prof
            members = prof * r[3] + cancellations
            rows.append((y, sex, f"{pop:.0f}", f"{enrol[y]:.2f}", f"{grads[y]:.2f}",
                         f"{prof:.2f}", f"{members:.2f}", f"{cancellations:.2f}"))
    write("education_history.csv",
          ("year", "sex", "population", "enrolments", "graduations",
           "new_professionals", "new_fund_members", "cancellations"), rows)


if __name__ == "__main__":
    population()
    mortality()
    income_profiles()
    pension_profiles()
    census()
    education_history()
