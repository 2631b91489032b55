#pragma once
// Significance tests and correlation measures. All p-values are two-sided.

#include <span>
#include <vector>

namespace citeval {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool significant_01 = false;
    bool significant_05 = false;

    static TestResult from_z(double z);
};

// Complementary error function. Power series below x = 2.5, continued
// fraction above; absolute error below 1e-15 on the real line.
double erfc_approx(double x);
double normal_cdf(double z);
double normal_two_sided_p(double z);

// Pooled two-proportion z. ComputeError("degenerate pooled proportion") when
// the pooled proportion is 0 or 1.
TestResult two_proportion_z(long x1, long n1, long x2, long n2);

struct ExpectationResult {
    TestResult test;
    // Value totals rounded to integer trial counts for the proportion test.
    long observed_successes = 0;
    long observed_trials = 0;
    bool above_expectation = false;
};

// Tests a unit's share of an additive value (unit_value / total_value)
// against its share of papers (unit_n / total_n).
ExpectationResult expectation_test(double unit_value, long unit_n, double total_value,
                                   long total_n);

// z = (mean2 - mean1) / sqrt(sem1^2 + sem2^2) under normality of the means.
TestResult mean_diff_from_summary(double mean1, double sem1, double mean2, double sem2);

// Sample standard deviation over sqrt(n); n >= 2.
double sem(std::span<const double> values);

double pearson_r(std::span<const double> x, std::span<const double> y);

// 1-based ranks with ties sharing their average rank.
std::vector<double> mid_ranks(std::span<const double> values);

double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace citeval
