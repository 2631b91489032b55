#pragma once
// Corpus ingestion: flat-file parsing, citation resolution, reference sets.
//
// Papers files are csv (header `paper_id,journal_id,pub_year,doc_type,n_refs,refs`,
// refs ';'-separated) or jsonl with the same field names. Journals files are csv
// with header `journal_id,name,categories`. Lines starting with '#' are comments.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "citeval/common.hpp"

namespace citeval {

struct PaperRecord {
    std::string paper_id;
    std::string journal_id;
    int pub_year = 0;
    DocType doc_type = DocType::article;
    // Declared total reference count (NRef), including references outside the corpus.
    long n_refs = 0;
    std::vector<std::string> refs;

    bool operator==(const PaperRecord&) const = default;
};

struct JournalRecord {
    std::string journal_id;
    std::string name;
    std::set<std::string> categories;

    bool operator==(const JournalRecord&) const = default;
};

struct CitationEdge {
    std::string citing;
    std::string cited;

    auto operator<=>(const CitationEdge&) const = default;
};

struct CitationGraph {
    // Sorted by (citing, cited); no duplicates.
    std::vector<CitationEdge> edges;
    std::size_t unresolved_count = 0;
    // Repeated reference strings collapsed inside a single reference list.
    std::size_t duplicate_count = 0;
};

enum class PaperFormat { csv, jsonl };

PaperFormat parse_paper_format(std::string_view name);

struct IngestDiagnostics {
    std::vector<std::string> warnings;
};

std::vector<PaperRecord> parse_papers(std::istream& in, PaperFormat format,
                                      IngestDiagnostics* diag = nullptr);
std::vector<JournalRecord> parse_journals(std::istream& in);

void write_papers(std::ostream& out, std::span<const PaperRecord> papers, PaperFormat format);
void write_journals(std::ostream& out, std::span<const JournalRecord> journals);

// File variants; a missing file raises InputError("no such input: <path>").
std::vector<PaperRecord> load_papers(const std::filesystem::path& path, PaperFormat format,
                                     IngestDiagnostics* diag = nullptr);
std::vector<JournalRecord> load_journals(const std::filesystem::path& path);

CitationGraph resolve_citations(std::span<const PaperRecord> papers);

// Immutable, indexed view over a set of papers and journals. Papers are held in
// ascending paper_id order; all derived sums iterate in that order.
class Corpus {
public:
    explicit Corpus(std::vector<PaperRecord> papers, std::vector<JournalRecord> journals = {});

    const std::vector<PaperRecord>& papers() const { return papers_; }
    const std::vector<JournalRecord>& journals() const { return journals_; }
    const CitationGraph& graph() const { return graph_; }

    const PaperRecord* find(std::string_view paper_id) const;
    // Throws InputError for unknown ids.
    const PaperRecord& paper(std::string_view paper_id) const;
    std::size_t index_of(std::string_view paper_id) const;

    const JournalRecord* find_journal(std::string_view journal_id) const;
    // True when the journal is declared or any paper carries its id.
    bool has_journal(std::string_view journal_id) const;
    // Indices of the journal's papers, ascending paper_id.
    std::span<const std::size_t> journal_papers(std::string_view journal_id) const;

    // Indices of papers citing papers()[cited], ascending citing paper_id.
    std::span<const std::size_t> citers_of(std::size_t cited) const { return citers_[cited]; }

private:
    std::vector<PaperRecord> papers_;
    std::vector<JournalRecord> journals_;
    CitationGraph graph_;
    std::unordered_map<std::string, std::size_t> paper_index_;
    std::unordered_map<std::string, std::size_t> journal_index_;
    std::unordered_map<std::string, std::vector<std::size_t>> journal_papers_;
    std::vector<std::vector<std::size_t>> citers_;
};

struct ReferenceSet {
    std::set<std::string> member_ids;
    YearRange pub_window;
    YearRange cite_window;
    std::string label;
};

struct ByCategory {
    std::string code;
};
struct ByJournals {
    std::vector<std::string> journal_ids;
};
struct ByIds {
    std::vector<std::string> paper_ids;
};
using ReferenceSelector = std::variant<ByCategory, ByJournals, ByIds>;

// "category:XA", "journals:J1;J2", "ids:P1;P2".
ReferenceSelector parse_selector(std::string_view text);
std::string describe(const ReferenceSelector& selector);

// Throws ComputeError("empty reference set") when nothing matches.
ReferenceSet build_reference_set(const Corpus& corpus, const ReferenceSelector& selector,
                                 YearRange pub_window, YearRange cite_window,
                                 std::string label = {});

}  // namespace citeval
