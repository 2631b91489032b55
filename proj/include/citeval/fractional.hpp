#pragma once
// Source-normalized (fractional) citation counting: each citation weighs
// 1/NRef of the citing paper.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "citeval/common.hpp"
#include "citeval/ingest.hpp"

namespace citeval {

// 1 / citing.n_refs; ComputeError for a citer with zero references.
double fractional_weight(const PaperRecord& citing);

struct FractionalTally {
    std::map<std::string, double> per_cited;
    // Sum over citers of (counted references) / NRef, accumulated in
    // (citing, cited) order.
    double distributed_total = 0.0;
    // Citers in the window declaring n_refs == 0; they contribute nothing.
    std::size_t zero_ref_citers = 0;
};

FractionalTally fractional_tally(const Corpus& corpus, YearRange cite_window,
                                 YearRange target_pub_window);

// Impact factor over fractionally counted window citations.
double quasi_if_fractional(const Corpus& corpus, std::string_view journal_id, int year,
                           const DocTypeFilter& citable);

}  // namespace citeval
