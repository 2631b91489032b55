#include "citeval/fractional.hpp"

#include "citeval/indicators.hpp"

namespace citeval {

double fractional_weight(const PaperRecord& citing) {
    if (citing.n_refs < 1) throw ComputeError("citing paper with zero references");
    return 1.0 / static_cast<double>(citing.n_refs);
}

FractionalTally fractional_tally(const Corpus& corpus, YearRange cite_window,
                                 YearRange target_pub_window) {
    FractionalTally tally;
    for (const auto& p : corpus.papers())
        if (cite_window.contains(p.pub_year) && p.n_refs == 0) ++tally.zero_ref_citers;

    // Edges are sorted by (citing, cited). The total adds counted/NRef once per
    // citer, so a citer whose references all resolve contributes exactly 1.
    const std::string* current = nullptr;
    long counted = 0;
    long n_refs = 1;
    auto flush = [&] {
        if (counted > 0) tally.distributed_total += static_cast<double>(counted) / static_cast<double>(n_refs);
        counted = 0;
    };
    for (const auto& e : corpus.graph().edges) {
        const auto& citer = corpus.paper(e.citing);
        if (!cite_window.contains(citer.pub_year) || citer.n_refs == 0) continue;
        if (!target_pub_window.contains(corpus.paper(e.cited).pub_year)) continue;
        if (current == nullptr || *current != e.citing) {
            flush();
            current = &e.citing;
            n_refs = citer.n_refs;
        }
        tally.per_cited[e.cited] += fractional_weight(citer);
        ++counted;
    }
    flush();
    return tally;
}

double quasi_if_fractional(const Corpus& corpus, std::string_view journal_id, int year,
                           const DocTypeFilter& citable) {
    return impact_factor(window_counts(corpus, journal_id, year, citable, CountingMode::fractional));
}

}  // namespace citeval
