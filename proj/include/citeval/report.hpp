#pragma once
// Per-unit indicator reports and pairwise comparisons.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "citeval/config.hpp"
#include "citeval/ingest.hpp"
#include "citeval/indicators.hpp"
#include "citeval/percentiles.hpp"
#include "citeval/stats.hpp"

namespace citeval {

// Columns of the csv report, in order.
inline constexpr const char* kReportColumns =
    "unit,n_pubs,total_cit,total_cit_frac,if,if_moving,quasi_if,i3_q,i3_pr6,pct_i3,pct_pr6,"
    "top10,top25,z_expect,sig01,sig05,rank_if,rank_i3";

// A value that may be undefined for a unit, with the reason when it is.
struct Measure {
    std::optional<double> value;
    std::string note;
};

// A mean-family value and its standard error (or why there is none).
struct MeanMeasure {
    Measure value;
    Measure sem;
};

struct UnitReport {
    std::string unit;
    bool is_journal = false;
    // Unit members inside the reference set, ascending.
    std::vector<std::string> members;
    long n_pubs = 0;

    double total_cit = 0.0;
    double total_cit_frac = 0.0;
    MeanMeasure mean_citations;

    CitationWindowCounts window;
    MeanMeasure if_classic;
    MeanMeasure if_moving;
    bool if_moving_fallback = false;
    MeanMeasure quasi_if;

    Measure rcr;
    MeanMeasure mean_ocr_ecr;

    double i3_q = 0.0;
    double i3_pr6 = 0.0;
    double pct_i3 = 0.0;
    double pct_pr6 = 0.0;
    std::vector<long> class_counts;
    // One entry per configured k, same order.
    std::vector<double> top_k;
    std::vector<long> top_k_counts;

    std::optional<ExpectationResult> expect_i3;
    std::optional<ExpectationResult> expect_pr6;
    std::string expect_note;

    int rank_if = 0;
    int rank_i3 = 0;
};

struct IndicatorReport {
    std::string reference_label;
    long reference_size = 0;
    bool non_discriminating = false;
    CountingMode counting = CountingMode::whole;
    int year = 0;
    YearRange pub_window;
    YearRange cite_window;
    std::vector<double> top_k;
    EvaluationScheme scheme;
    double i3_total = 0.0;
    double pr6_total = 0.0;
    std::vector<UnitReport> units;
};

// Whole-corpus reference set for the configuration.
ReferenceSet reference_for(const Corpus& corpus, const Config& config);

IndicatorReport compute_report(const Corpus& corpus, const Config& config);

// Dense ranks, higher values first; equal values share the smaller rank and
// missing values rank after every present one.
std::vector<int> dense_ranks(const std::vector<std::optional<double>>& values);

std::string format_fixed(double v, int decimals);

std::string report_csv(const IndicatorReport& report);
nlohmann::ordered_json report_json(const IndicatorReport& report);

// Indicators the rank command can order by.
std::vector<std::string> rankable_indicators();
std::optional<double> indicator_value(const UnitReport& unit, const IndicatorReport& report,
                                      const std::string& indicator);

struct ComparisonRow {
    std::string indicator;
    Measure value1;
    Measure value2;
    std::optional<TestResult> test;
    std::string note;
};

struct ComparisonReport {
    std::string unit1;
    std::string unit2;
    std::vector<ComparisonRow> rows;
};

// Both units must belong to the report (hence one reference set).
ComparisonReport compare_units(const IndicatorReport& report, const std::string& unit1,
                               const std::string& unit2);

std::string comparison_csv(const ComparisonReport& cmp);
nlohmann::ordered_json comparison_json(const ComparisonReport& cmp);

}  // namespace citeval
