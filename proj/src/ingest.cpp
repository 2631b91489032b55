#include "citeval/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace citeval {

std::string_view to_string(DocType t) {
    switch (t) {
        case DocType::article: return "article";
        case DocType::review: return "review";
        case DocType::letter: return "letter";
        case DocType::other: return "other";
    }
    return "other";
}

DocType parse_doc_type(std::string_view name, bool* known) {
    if (known) *known = true;
    if (name == "article") return DocType::article;
    if (name == "review") return DocType::review;
    if (name == "letter") return DocType::letter;
    if (name == "other") return DocType::other;
    if (known) *known = false;
    return DocType::other;
}

std::string_view to_string(CountingMode m) {
    return m == CountingMode::whole ? "whole" : "fractional";
}

CountingMode parse_counting_mode(std::string_view name) {
    if (name == "whole") return CountingMode::whole;
    if (name == "fractional") return CountingMode::fractional;
    throw InputError("unknown counting mode '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

// Splits one csv record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && trim(cur).empty()) {
            cur.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? cur : std::string(trim(cur)));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) fail_at(line_no, "malformed row: unterminated quote");
    fields.push_back(was_quoted ? cur : std::string(trim(cur)));
    return fields;
}

std::string quote_csv(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    s = trim(s);
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(';', start);
        auto item = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (!item.empty()) out.emplace_back(item);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string join_list(const auto& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out.push_back(';');
        out += s;
    }
    return out;
}

bool skip_line(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#';
}

void check_paper(PaperRecord& rec, std::string_view doc_type, std::size_t line_no,
                 IngestDiagnostics* diag) {
    if (rec.paper_id.empty()) fail_at(line_no, "malformed row: empty paper_id");
    if (rec.n_refs < 0) fail_at(line_no, "negative n_refs");
    if (static_cast<std::size_t>(rec.n_refs) < rec.refs.size())
        fail_at(line_no, "malformed row: n_refs smaller than the listed refs");
    bool known = true;
    rec.doc_type = parse_doc_type(doc_type, &known);
    if (!known && diag) {
        diag->warnings.push_back("line " + std::to_string(line_no) + ": unknown doc_type '" +
                                 std::string(doc_type) + "' mapped to other");
    }
}

PaperRecord paper_from_csv(const std::vector<std::string>& f, std::size_t line_no,
                           IngestDiagnostics* diag) {
    if (f.size() != 6)
        fail_at(line_no, "malformed row: expected 6 fields, got " + std::to_string(f.size()));
    PaperRecord rec;
    rec.paper_id = f[0];
    rec.journal_id = f[1];
    if (!parse_int(f[2], rec.pub_year)) fail_at(line_no, "malformed row: bad pub_year");
    if (!parse_int(f[4], rec.n_refs)) fail_at(line_no, "malformed row: bad n_refs");
    rec.refs = split_list(f[5]);
    check_paper(rec, f[3], line_no, diag);
    return rec;
}

PaperRecord paper_from_json(std::string_view line, std::size_t line_no, IngestDiagnostics* diag) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
        fail_at(line_no, "malformed row: invalid json");
    }
    if (!j.is_object()) fail_at(line_no, "malformed row: expected an object");
    auto str = [&](const char* key) -> std::string {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string())
            fail_at(line_no, std::string("malformed row: missing string field ") + key);
        return it->get<std::string>();
    };
    auto integer = [&](const char* key) -> long {
        auto it = j.find(key);
        if (it == j.end() || !it->is_number_integer())
            fail_at(line_no, std::string("malformed row: missing integer field ") + key);
        return it->get<long>();
    };
    PaperRecord rec;
    rec.paper_id = str("paper_id");
    rec.journal_id = str("journal_id");
    rec.pub_year = static_cast<int>(integer("pub_year"));
    rec.n_refs = integer("n_refs");
    auto refs = j.find("refs");
    if (refs == j.end() || refs->is_null()) {
    } else if (refs->is_array()) {
        for (const auto& r : *refs) {
            if (!r.is_string()) fail_at(line_no, "malformed row: refs must be strings");
            rec.refs.push_back(r.get<std::string>());
        }
    } else if (refs->is_string()) {
        rec.refs = split_list(refs->get<std::string>());
    } else {
        fail_at(line_no, "malformed row: bad refs");
    }
    check_paper(rec, str("doc_type"), line_no, diag);
    return rec;
}

constexpr std::string_view kPaperHeader = "paper_id,journal_id,pub_year,doc_type,n_refs,refs";
constexpr std::string_view kJournalHeader = "journal_id,name,categories";

void expect_header(std::string_view line, std::string_view header, std::size_t line_no) {
    std::string norm;
    for (char c : trim(line))
        if (c != ' ') norm.push_back(c);
    if (norm != header) fail_at(line_no, "expected header '" + std::string(header) + "'");
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("no such input: " + path.string());
    return in;
}

}  // namespace

PaperFormat parse_paper_format(std::string_view name) {
    if (name == "csv") return PaperFormat::csv;
    if (name == "jsonl") return PaperFormat::jsonl;
    throw InputError("unknown papers format '" + std::string(name) + "'");
}

std::vector<PaperRecord> parse_papers(std::istream& in, PaperFormat format,
                                      IngestDiagnostics* diag) {
    std::vector<PaperRecord> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = format != PaperFormat::csv;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) continue;
        if (!header_seen) {
            expect_header(line, kPaperHeader, line_no);
            header_seen = true;
            continue;
        }
        PaperRecord rec = format == PaperFormat::csv
                              ? paper_from_csv(split_csv(line, line_no), line_no, diag)
                              : paper_from_json(line, line_no, diag);
        if (!seen.insert(rec.paper_id).second)
            fail_at(line_no, "duplicate paper_id " + rec.paper_id);
        out.push_back(std::move(rec));
    }
    if (!header_seen) throw InputError("line 1: missing header");
    return out;
}

std::vector<JournalRecord> parse_journals(std::istream& in) {
    std::vector<JournalRecord> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) continue;
        if (!header_seen) {
            expect_header(line, kJournalHeader, line_no);
            header_seen = true;
            continue;
        }
        auto f = split_csv(line, line_no);
        if (f.size() != 3)
            fail_at(line_no, "malformed row: expected 3 fields, got " + std::to_string(f.size()));
        if (f[0].empty()) fail_at(line_no, "malformed row: empty journal_id");
        JournalRecord rec{f[0], f[1], {}};
        for (auto& c : split_list(f[2])) rec.categories.insert(std::move(c));
        if (!seen.insert(rec.journal_id).second)
            fail_at(line_no, "duplicate journal_id " + rec.journal_id);
        out.push_back(std::move(rec));
    }
    if (!header_seen) throw InputError("line 1: missing header");
    return out;
}

void write_papers(std::ostream& out, std::span<const PaperRecord> papers, PaperFormat format) {
    if (format == PaperFormat::csv) {
        out << kPaperHeader << '\n';
        for (const auto& p : papers) {
            out << quote_csv(p.paper_id) << ',' << quote_csv(p.journal_id) << ',' << p.pub_year
                << ',' << to_string(p.doc_type) << ',' << p.n_refs << ','
                << quote_csv(join_list(p.refs)) << '\n';
        }
        return;
    }
    for (const auto& p : papers) {
        nlohmann::ordered_json j;
        j["paper_id"] = p.paper_id;
        j["journal_id"] = p.journal_id;
        j["pub_year"] = p.pub_year;
        j["doc_type"] = std::string(to_string(p.doc_type));
        j["n_refs"] = p.n_refs;
        j["refs"] = p.refs;
        out << j.dump() << '\n';
    }
}

void write_journals(std::ostream& out, std::span<const JournalRecord> journals) {
    out << kJournalHeader << '\n';
    for (const auto& j : journals) {
        out << quote_csv(j.journal_id) << ',' << quote_csv(j.name) << ','
            << quote_csv(join_list(j.categories)) << '\n';
    }
}

std::vector<PaperRecord> load_papers(const std::filesystem::path& path, PaperFormat format,
                                     IngestDiagnostics* diag) {
    auto in = open_input(path);
    try {
        return parse_papers(in, format, diag);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::vector<JournalRecord> load_journals(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return parse_journals(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

CitationGraph resolve_citations(std::span<const PaperRecord> papers) {
    std::unordered_set<std::string_view> ids;
    ids.reserve(papers.size());
    for (const auto& p : papers) ids.insert(p.paper_id);

    CitationGraph g;
    for (const auto& p : papers) {
        std::set<std::string_view> unique(p.refs.begin(), p.refs.end());
        g.duplicate_count += p.refs.size() - unique.size();
        for (auto ref : unique) {
            if (ids.contains(ref))
                g.edges.push_back({p.paper_id, std::string(ref)});
            else
                ++g.unresolved_count;
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

Corpus::Corpus(std::vector<PaperRecord> papers, std::vector<JournalRecord> journals)
    : papers_(std::move(papers)), journals_(std::move(journals)) {
    std::sort(papers_.begin(), papers_.end(),
              [](const PaperRecord& a, const PaperRecord& b) { return a.paper_id < b.paper_id; });
    for (std::size_t i = 0; i < papers_.size(); ++i) {
        if (!paper_index_.emplace(papers_[i].paper_id, i).second)
            throw InputError("duplicate paper_id " + papers_[i].paper_id);
        journal_papers_[papers_[i].journal_id].push_back(i);
    }
    for (std::size_t i = 0; i < journals_.size(); ++i) {
        if (!journal_index_.emplace(journals_[i].journal_id, i).second)
            throw InputError("duplicate journal_id " + journals_[i].journal_id);
    }
    graph_ = resolve_citations(papers_);
    citers_.resize(papers_.size());
    for (const auto& e : graph_.edges)
        citers_[paper_index_.at(e.cited)].push_back(paper_index_.at(e.citing));
}

const PaperRecord* Corpus::find(std::string_view paper_id) const {
    auto it = paper_index_.find(std::string(paper_id));
    return it == paper_index_.end() ? nullptr : &papers_[it->second];
}

const PaperRecord& Corpus::paper(std::string_view paper_id) const {
    return papers_[index_of(paper_id)];
}

std::size_t Corpus::index_of(std::string_view paper_id) const {
    auto it = paper_index_.find(std::string(paper_id));
    if (it == paper_index_.end()) throw InputError("unknown paper_id " + std::string(paper_id));
    return it->second;
}

const JournalRecord* Corpus::find_journal(std::string_view journal_id) const {
    auto it = journal_index_.find(std::string(journal_id));
    return it == journal_index_.end() ? nullptr : &journals_[it->second];
}

bool Corpus::has_journal(std::string_view journal_id) const {
    std::string key(journal_id);
    return journal_index_.contains(key) || journal_papers_.contains(key);
}

std::span<const std::size_t> Corpus::journal_papers(std::string_view journal_id) const {
    auto it = journal_papers_.find(std::string(journal_id));
    if (it == journal_papers_.end()) return {};
    return it->second;
}

ReferenceSelector parse_selector(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw InputError("bad reference selector '" + std::string(text) + "'");
    auto kind = trim(text.substr(0, colon));
    auto arg = trim(text.substr(colon + 1));
    if (kind == "category") {
        if (arg.empty()) throw InputError("category selector needs a code");
        return ByCategory{std::string(arg)};
    }
    auto list = split_list(arg);
    if (list.empty()) throw InputError("selector '" + std::string(text) + "' lists nothing");
    if (kind == "journals") return ByJournals{std::move(list)};
    if (kind == "ids") return ByIds{std::move(list)};
    throw InputError("bad reference selector kind '" + std::string(kind) + "'");
}

std::string describe(const ReferenceSelector& selector) {
    struct Visitor {
        std::string operator()(const ByCategory& s) const { return "category:" + s.code; }
        std::string operator()(const ByJournals& s) const {
            return "journals:" + join_list(s.journal_ids);
        }
        std::string operator()(const ByIds& s) const { return "ids:" + join_list(s.paper_ids); }
    };
    return std::visit(Visitor{}, selector);
}

ReferenceSet build_reference_set(const Corpus& corpus, const ReferenceSelector& selector,
                                 YearRange pub_window, YearRange cite_window, std::string label) {
    ReferenceSet rs{{}, pub_window, cite_window, label.empty() ? describe(selector) : label};
    auto take = [&](const PaperRecord& p) {
        if (pub_window.contains(p.pub_year)) rs.member_ids.insert(p.paper_id);
    };
    auto take_journal = [&](std::string_view journal_id) {
        for (auto i : corpus.journal_papers(journal_id)) take(corpus.papers()[i]);
    };

    if (auto* s = std::get_if<ByCategory>(&selector)) {
        for (const auto& j : corpus.journals())
            if (j.categories.contains(s->code)) take_journal(j.journal_id);
    } else if (auto* s = std::get_if<ByJournals>(&selector)) {
        for (const auto& id : s->journal_ids) take_journal(id);
    } else if (auto* s = std::get_if<ByIds>(&selector)) {
        for (const auto& id : s->paper_ids)
            if (const auto* p = corpus.find(id)) take(*p);
    }
    if (rs.member_ids.empty()) throw ComputeError("empty reference set");
    return rs;
}

YearRange parse_year_range(std::string_view text) {
    text = trim(text);
    YearRange r;
    auto dash = text.find('-', 1);
    bool ok = dash == std::string_view::npos
                  ? parse_int(text, r.first) && (r.last = r.first, true)
                  : parse_int(text.substr(0, dash), r.first) &&
                        parse_int(text.substr(dash + 1), r.last);
    if (!ok || r.first > r.last) throw InputError("bad year range '" + std::string(text) + "'");
    return r;
}

std::string to_string(const YearRange& r) {
    if (r.first == r.last) return std::to_string(r.first);
    return std::to_string(r.first) + "-" + std::to_string(r.last);
}

}  // namespace citeval
