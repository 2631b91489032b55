#pragma once
// Percentile ranks over a reference set, PR6 classification, I3 and top-k%
// excellence proportions.
//
// Quantiles use the mid-rank convention: with L members strictly below a
// paper's count and T members tied with it (itself included),
// quantile = 100 * (L + T/2) / N. The mean quantile of any set is exactly 50.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citeval/common.hpp"
#include "citeval/ingest.hpp"

namespace citeval {

// Ordered lower quantile bounds (inclusive) and a weight per class.
struct EvaluationScheme {
    std::vector<double> lower_bounds;
    std::vector<double> weights;

    // Six classes: bottom-50%, top-50%, top-25%, top-10%, top-5%, top-1%.
    static EvaluationScheme nsb();

    std::size_t size() const { return lower_bounds.size(); }
    // Throws InputError unless bounds start at 0, increase strictly, stay
    // below 100 and every weight is positive.
    void validate() const;
};

// Text format: one `lower_bound,weight` line per class; '#' comments allowed.
EvaluationScheme parse_scheme(std::istream& in);
EvaluationScheme load_scheme(const std::filesystem::path& path);

enum class Pr6Class { bottom50 = 1, top50 = 2, top25 = 3, top10 = 4, top5 = 5, top1 = 6 };

std::string_view to_string(Pr6Class c);

// Index of the highest lower bound <= quantile.
std::size_t classify(double quantile, const EvaluationScheme& scheme);

struct PercentileAssignment {
    std::string paper_id;
    double citations = 0.0;
    double quantile = 0.0;
    // 2L + T; quantile == 50 * twice_rank / N exactly in rationals.
    long twice_rank = 0;
    std::size_t class_index = 0;

    // Only meaningful under the six-class scheme.
    Pr6Class pr6_class() const { return static_cast<Pr6Class>(class_index + 1); }
};

struct PercentileDistribution {
    // Ascending paper_id.
    std::vector<PercentileAssignment> assignments;
    std::vector<long> class_counts;
    EvaluationScheme scheme;

    std::size_t size() const { return assignments.size(); }
    // Throws ComputeError for papers outside the distribution.
    const PercentileAssignment& at(std::string_view paper_id) const;
    bool contains(std::string_view paper_id) const;
    // Every member tied: all quantiles are 50 and nothing discriminates.
    bool all_tied() const;
};

// Citation counts of every reference-set member within its citation window.
std::map<std::string, double> member_citations(const Corpus& corpus, const ReferenceSet& reference,
                                               CountingMode counting);

PercentileDistribution quantile_ranks(const ReferenceSet& reference,
                                      const std::map<std::string, double>& citations,
                                      const EvaluationScheme& scheme = EvaluationScheme::nsb());

enum class I3Scheme { quantiles, pr6 };

// Quantiles: sum over distinct values x of x * n(x). Pr6: sum of class
// weight times class count.
double i3(const PercentileDistribution& dist, I3Scheme scheme);

// I3 restricted to the given members of the distribution.
double i3_of(std::span<const std::string> subset, const PercentileDistribution& dist,
             I3Scheme scheme);

// 100 * I3(subset) / I3(all).
double i3_share(std::span<const std::string> subset, const PercentileDistribution& dist,
                I3Scheme scheme);

// Fraction of the subset with quantile >= 100 - k, for k in (0, 100).
double top_k_proportion(std::span<const std::string> subset, const PercentileDistribution& dist,
                        double k);

// Number of subset papers with quantile >= 100 - k.
long top_k_count(std::span<const std::string> subset, const PercentileDistribution& dist, double k);

}  // namespace citeval
