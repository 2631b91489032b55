#pragma once
// Central-tendency journal indicators: IF, moving-average IF, total citations,
// RCR and the mean of observed/expected ratios.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citeval/common.hpp"
#include "citeval/ingest.hpp"

namespace citeval {

// Citations in year t to citable items of t-1 (c1, p1) and t-2 (c2, p2).
struct CitationWindowCounts {
    double c1 = 0.0;
    double c2 = 0.0;
    long p1 = 0;
    long p2 = 0;

    bool operator==(const CitationWindowCounts&) const = default;
};

// Window counts plus the per-item citation values behind c1 and c2, in
// ascending paper_id order.
struct WindowDetail {
    CitationWindowCounts counts;
    std::vector<double> items1;
    std::vector<double> items2;
};

// Weight of one citation given by `citer`: 1, or 1/NRef under fractional counting.
double citation_weight(const PaperRecord& citer, CountingMode counting);

// Citations received by corpus.papers()[paper] from papers published in `cite_window`.
double citations_received(const Corpus& corpus, std::size_t paper, YearRange cite_window,
                          CountingMode counting);

WindowDetail window_detail(const Corpus& corpus, std::span<const std::size_t> papers, int year,
                           const DocTypeFilter& citable, CountingMode counting);

// Throws InputError for a journal unknown to the corpus.
CitationWindowCounts window_counts(const Corpus& corpus, std::string_view journal_id, int year,
                                   const DocTypeFilter& citable, CountingMode counting);

// (c1 + c2) / (p1 + p2); ComputeError("no citable items") when p1 + p2 == 0.
double impact_factor(const CitationWindowCounts& w);

// (c1/p1 + c2/p2) / 2; ComputeError("year with zero citable items") if either p is 0.
double moving_average_if(const CitationWindowCounts& w);

struct RelativeRates {
    std::vector<double> observed;
    std::vector<double> expected;
    double mocr = 0.0;
    double mecr = 0.0;

    // Computes mocr/mecr as the means of the two lists; lists must be equal
    // length and non-empty.
    static RelativeRates from(std::vector<double> observed, std::vector<double> expected);
};

// MOCR / MECR. Deliberately carries no significance test: observed and
// expected rates are not independent samples.
double rcr(const RelativeRates& r);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

// Mean and sample standard deviation of observed[i]/expected[i].
MeanSd mean_ocr_ecr(const RelativeRates& r);

double total_citations(const Corpus& corpus, std::span<const std::string> paper_ids,
                       YearRange cite_window, CountingMode counting);

// Expected citation rate per paper: mean citations of the reference-set members
// sharing its pub_year (and doc_type when `match_doc_type`).
std::vector<double> expected_citation_rates(const Corpus& corpus, const ReferenceSet& reference,
                                            std::span<const std::string> paper_ids,
                                            CountingMode counting, bool match_doc_type);

}  // namespace citeval
