#include "citeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "citeval/common.hpp"

namespace citeval {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kSqrt2 = 1.41421356237309504880;

// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n (2x^2)^n x / (1*3*...*(2n+1)); all terms positive.
double erf_series(double x) {
    const double two_x2 = 2.0 * x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 500; ++n) {
        term *= two_x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return 2.0 * kInvSqrtPi * std::exp(-x * x) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
double erfc_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = f;
    double d = 0.0;
    for (int n = 1; n < 1000; ++n) {
        const double a = 0.5 * n;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        d = 1.0 / d;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) * kInvSqrtPi / f;
}

}  // namespace

double erfc_approx(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 - erfc_approx(-x);
    if (x < 2.5) return 1.0 - erf_series(x);
    if (x > 27.0) return 0.0;
    return erfc_continued_fraction(x);
}

double normal_cdf(double z) { return 0.5 * erfc_approx(-z / kSqrt2); }

double normal_two_sided_p(double z) { return std::min(1.0, erfc_approx(std::abs(z) / kSqrt2)); }

TestResult TestResult::from_z(double z) {
    TestResult r;
    r.statistic = z;
    r.p_value = normal_two_sided_p(z);
    r.significant_01 = r.p_value < 0.01;
    r.significant_05 = r.p_value < 0.05;
    return r;
}

TestResult two_proportion_z(long x1, long n1, long x2, long n2) {
    if (n1 < 1 || n2 < 1 || x1 < 0 || x2 < 0 || x1 > n1 || x2 > n2)
        throw ComputeError("proportion test needs 0 <= x <= n and n >= 1");
    const double p1 = static_cast<double>(x1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(x2) / static_cast<double>(n2);
    const double pooled = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
    if (pooled <= 0.0 || pooled >= 1.0) throw ComputeError("degenerate pooled proportion");
    const double se =
        std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    return TestResult::from_z((p1 - p2) / se);
}

ExpectationResult expectation_test(double unit_value, long unit_n, double total_value,
                                   long total_n) {
    if (total_n < 1 || unit_n < 0 || unit_n > total_n)
        throw ComputeError("expectation test needs 0 <= unit_n <= total_n, total_n >= 1");
    if (unit_value < 0.0 || unit_value > total_value)
        throw ComputeError("expectation test needs 0 <= unit value <= total value");
    if (unit_n == total_n) throw ComputeError("unit equals the whole set; no complement to compare");
    ExpectationResult r;
    r.observed_successes = std::lround(unit_value);
    r.observed_trials = std::lround(total_value);
    r.test = two_proportion_z(r.observed_successes, r.observed_trials, unit_n, total_n);
    r.above_expectation = r.test.statistic > 0.0;
    return r;
}

TestResult mean_diff_from_summary(double mean1, double sem1, double mean2, double sem2) {
    if (sem1 < 0.0 || sem2 < 0.0) throw ComputeError("standard errors must be non-negative");
    if (sem1 == 0.0 && sem2 == 0.0) throw ComputeError("both standard errors are zero");
    return TestResult::from_z((mean2 - mean1) / std::sqrt(sem1 * sem1 + sem2 * sem2));
}

double sem(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw ComputeError("standard error needs at least two values");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return sd / std::sqrt(static_cast<double>(n));
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ComputeError("correlation inputs differ in length");
    if (x.size() < 3) throw ComputeError("correlation needs at least three pairs");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ComputeError("correlation with zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> mid_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ComputeError("correlation inputs differ in length");
    auto rx = mid_ranks(x);
    auto ry = mid_ranks(y);
    return pearson_r(rx, ry);
}

}  // namespace citeval
