#include "citeval/indicators.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "citeval/fractional.hpp"

namespace citeval {

double citation_weight(const PaperRecord& citer, CountingMode counting) {
    return counting == CountingMode::whole ? 1.0 : fractional_weight(citer);
}

double citations_received(const Corpus& corpus, std::size_t paper, YearRange cite_window,
                          CountingMode counting) {
    double sum = 0.0;
    for (auto c : corpus.citers_of(paper)) {
        const auto& citer = corpus.papers()[c];
        if (cite_window.contains(citer.pub_year)) sum += citation_weight(citer, counting);
    }
    return sum;
}

WindowDetail window_detail(const Corpus& corpus, std::span<const std::size_t> papers, int year,
                           const DocTypeFilter& citable, CountingMode counting) {
    WindowDetail d;
    const YearRange citing_year{year, year};
    for (auto i : papers) {
        const auto& p = corpus.papers()[i];
        if (!citable.contains(p.doc_type)) continue;
        if (p.pub_year == year - 1) {
            double c = citations_received(corpus, i, citing_year, counting);
            d.counts.c1 += c;
            ++d.counts.p1;
            d.items1.push_back(c);
        } else if (p.pub_year == year - 2) {
            double c = citations_received(corpus, i, citing_year, counting);
            d.counts.c2 += c;
            ++d.counts.p2;
            d.items2.push_back(c);
        }
    }
    return d;
}

CitationWindowCounts window_counts(const Corpus& corpus, std::string_view journal_id, int year,
                                   const DocTypeFilter& citable, CountingMode counting) {
    if (!corpus.has_journal(journal_id))
        throw InputError("unknown journal_id " + std::string(journal_id));
    return window_detail(corpus, corpus.journal_papers(journal_id), year, citable, counting)
        .counts;
}

double impact_factor(const CitationWindowCounts& w) {
    if (w.p1 + w.p2 == 0) throw ComputeError("no citable items");
    return (w.c1 + w.c2) / static_cast<double>(w.p1 + w.p2);
}

double moving_average_if(const CitationWindowCounts& w) {
    if (w.p1 == 0 || w.p2 == 0) throw ComputeError("year with zero citable items");
    // Equal denominators make the two averages the same number; take the
    // ratio of sums so the identity also holds bit for bit.
    if (w.p1 == w.p2) return impact_factor(w);
    return (w.c1 / static_cast<double>(w.p1) + w.c2 / static_cast<double>(w.p2)) / 2.0;
}

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

RelativeRates RelativeRates::from(std::vector<double> observed, std::vector<double> expected) {
    if (observed.empty()) throw ComputeError("relative rates need at least one paper");
    if (observed.size() != expected.size())
        throw ComputeError("observed and expected rates differ in length");
    RelativeRates r;
    r.mocr = mean_of(observed);
    r.mecr = mean_of(expected);
    r.observed = std::move(observed);
    r.expected = std::move(expected);
    return r;
}

double rcr(const RelativeRates& r) {
    if (!(r.mecr > 0.0)) throw ComputeError("mean expected citation rate is zero");
    return r.mocr / r.mecr;
}

MeanSd mean_ocr_ecr(const RelativeRates& r) {
    const std::size_t n = r.observed.size();
    if (n == 0 || r.expected.size() != n) throw ComputeError("malformed relative rates");
    std::vector<double> ratios(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(r.expected[i] > 0.0))
            throw ComputeError("expected rate at index " + std::to_string(i) + " is zero");
        ratios[i] = r.observed[i] / r.expected[i];
    }
    MeanSd out{mean_of(ratios), 0.0};
    if (n > 1) {
        double ss = 0.0;
        for (double x : ratios) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return out;
}

double total_citations(const Corpus& corpus, std::span<const std::string> paper_ids,
                       YearRange cite_window, CountingMode counting) {
    double sum = 0.0;
    for (const auto& id : paper_ids)
        sum += citations_received(corpus, corpus.index_of(id), cite_window, counting);
    return sum;
}

std::vector<double> expected_citation_rates(const Corpus& corpus, const ReferenceSet& reference,
                                            std::span<const std::string> paper_ids,
                                            CountingMode counting, bool match_doc_type) {
    using Key = std::pair<int, DocType>;
    auto key_of = [&](const PaperRecord& p) {
        return Key{p.pub_year, match_doc_type ? p.doc_type : DocType::other};
    };
    std::map<Key, std::pair<double, long>> groups;
    for (const auto& id : reference.member_ids) {
        auto i = corpus.index_of(id);
        auto& g = groups[key_of(corpus.papers()[i])];
        g.first += citations_received(corpus, i, reference.cite_window, counting);
        ++g.second;
    }
    std::vector<double> out;
    out.reserve(paper_ids.size());
    for (const auto& id : paper_ids) {
        auto it = groups.find(key_of(corpus.paper(id)));
        if (it == groups.end())
            throw ComputeError("no reference papers to derive an expected rate for " + id);
        out.push_back(it->second.first / static_cast<double>(it->second.second));
    }
    return out;
}

}  // namespace citeval
