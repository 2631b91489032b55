#pragma once
// Seeded synthetic corpora with skewed citation distributions. Citations are
// realized as explicit citing papers so that fractional counting applies.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "citeval/ingest.hpp"

namespace citeval {

struct LogNormal {
    double mu = 0.0;
    double sigma = 1.2;
};
struct Pareto {
    double alpha = 2.0;
    double xmin = 1.0;
};
struct Constant {
    double c = 1.0;
};
using CitationDistribution = std::variant<LogNormal, Pareto, Constant>;

std::string describe(const CitationDistribution& d);

struct JournalLayout {
    std::string journal_id;
    long count = 0;
    std::optional<CitationDistribution> distribution;
    std::optional<long> citer_nref;
    std::string category = "SYN";
};

struct SynthSpec {
    // Total target papers; must equal the layout sum when a layout is given.
    long n_papers = 1000;
    CitationDistribution distribution = LogNormal{};
    std::uint64_t seed = 1;
    // Empty layout: a single journal "J1" holding every paper.
    std::vector<JournalLayout> journal_layout;
    // Targets are published in citing_year-1 and citing_year-2, citers in citing_year.
    int citing_year = 2009;
    // Resolved references per citing paper (upper bound) and declared NRef.
    long citer_refs = 5;
    long citer_nref = 20;

    // Throws InputError for out-of-range parameters.
    void validate() const;
};

// key=value lines: seed, n_papers, distribution, mu, sigma, alpha, xmin, c,
// citing_year, citer_refs, citer_nref and repeated
// `journal=ID:COUNT[:key=value...]` entries.
SynthSpec parse_synth_spec(std::istream& in);

struct SynthCorpus {
    std::vector<PaperRecord> papers;
    std::vector<JournalRecord> journals;
};

// Raw draws from the distribution (before quantization), fully determined by seed.
std::vector<double> sample_distribution(const CitationDistribution& d, std::size_t n,
                                        std::uint64_t seed);

// Non-negative integer citation count for one draw (round half away from zero).
long quantize_count(double draw);

SynthCorpus generate_corpus(const SynthSpec& spec);

// Target papers of one journal with the given citation counts, cited by
// freshly made citers with the given NRef. Appends to `out`.
void realize_journal(SynthCorpus& out, const std::string& journal_id, const std::string& category,
                     const std::vector<long>& counts, int citing_year, long citer_refs,
                     long citer_nref);

struct DominanceScenario {
    SynthCorpus corpus;
    ReferenceSet reference;
    std::string journal_a;
    std::string journal_b;
    std::vector<std::string> papers_a;
    std::vector<std::string> papers_b;
    std::vector<long> classes_a;
    std::vector<long> classes_b;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double i3_a = 0.0;
    double i3_b = 0.0;
    double if_a = 0.0;
    double if_b = 0.0;
};

// Journal A: a large set with a long uncited tail and a highly cited head.
// Journal B: a small, uniformly moderate set. A outnumbers B in every PR6
// class and has the larger I3, yet B has the larger mean and IF. The three
// properties are checked with the engine before returning; ComputeError if not.
DominanceScenario dominance_scenario();

}  // namespace citeval
