#include "citeval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <random>
#include <set>
#include <sstream>

#include "citeval/indicators.hpp"
#include "citeval/percentiles.hpp"

namespace citeval {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Uniform in (0, 1) from the top 53 bits; std::mt19937_64 output is fixed by the standard.
double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
    const double u1 = open_uniform(rng);
    const double u2 = open_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double draw(const CitationDistribution& d, std::mt19937_64& rng) {
    if (auto* ln = std::get_if<LogNormal>(&d)) return std::exp(ln->mu + ln->sigma * standard_normal(rng));
    if (auto* pa = std::get_if<Pareto>(&d)) return pa->xmin * std::pow(open_uniform(rng), -1.0 / pa->alpha);
    return std::get<Constant>(d).c;
}

void validate(const CitationDistribution& d) {
    if (auto* ln = std::get_if<LogNormal>(&d)) {
        if (!(ln->sigma > 0.0)) throw InputError("lognormal sigma must be > 0");
        if (!std::isfinite(ln->mu)) throw InputError("lognormal mu must be finite");
    } else if (auto* pa = std::get_if<Pareto>(&d)) {
        if (!(pa->alpha > 1.0)) throw InputError("pareto alpha must be > 1");
        if (!(pa->xmin >= 1.0)) throw InputError("pareto xmin must be >= 1");
    } else if (!(std::get<Constant>(d).c >= 0.0)) {
        throw InputError("constant citation count must be >= 0");
    }
}

std::string padded(const std::string& prefix, long n, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*ld", width, n);
    return prefix + buf;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double to_double(std::string_view key, std::string_view v) {
    std::string s(v);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw InputError("synth spec: bad number for " + std::string(key) + ": '" + s + "'");
    return out;
}

long to_long(std::string_view key, std::string_view v) {
    double d = to_double(key, v);
    if (d != std::floor(d)) throw InputError("synth spec: " + std::string(key) + " must be an integer");
    return static_cast<long>(d);
}

// Applies distribution keys (distribution, mu, sigma, alpha, xmin, c) to `d`.
bool apply_distribution_key(CitationDistribution& d, std::string_view key, std::string_view value) {
    if (key == "distribution") {
        if (value == "lognormal") d = LogNormal{};
        else if (value == "pareto") d = Pareto{};
        else if (value == "constant") d = Constant{};
        else throw InputError("synth spec: unknown distribution '" + std::string(value) + "'");
        return true;
    }
    auto needs = [&](bool ok) {
        if (!ok)
            throw InputError("synth spec: " + std::string(key) + " does not apply to " +
                             describe(d));
    };
    if (key == "mu" || key == "sigma") {
        auto* ln = std::get_if<LogNormal>(&d);
        needs(ln != nullptr);
        (key == "mu" ? ln->mu : ln->sigma) = to_double(key, value);
        return true;
    }
    if (key == "alpha" || key == "xmin") {
        auto* pa = std::get_if<Pareto>(&d);
        needs(pa != nullptr);
        (key == "alpha" ? pa->alpha : pa->xmin) = to_double(key, value);
        return true;
    }
    if (key == "c") {
        auto* c = std::get_if<Constant>(&d);
        needs(c != nullptr);
        c->c = to_double(key, value);
        return true;
    }
    return false;
}

JournalLayout parse_layout(std::string_view text, const CitationDistribution& base) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(':', start);
        parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? text.npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (parts.size() < 2 || parts[0].empty())
        throw InputError("synth spec: journal entries look like ID:COUNT[:key=value...]");
    JournalLayout j;
    j.journal_id = std::string(parts[0]);
    j.count = to_long("journal count", parts[1]);
    for (std::size_t i = 2; i < parts.size(); ++i) {
        auto eq = parts[i].find('=');
        if (eq == std::string_view::npos)
            throw InputError("synth spec: bad journal option '" + std::string(parts[i]) + "'");
        auto key = trim(parts[i].substr(0, eq));
        auto value = trim(parts[i].substr(eq + 1));
        if (key == "citer_nref") {
            j.citer_nref = to_long(key, value);
        } else if (key == "category") {
            j.category = std::string(value);
        } else {
            if (!j.distribution) j.distribution = base;
            if (!apply_distribution_key(*j.distribution, key, value))
                throw InputError("synth spec: unknown journal option '" + std::string(key) + "'");
        }
    }
    return j;
}

}  // namespace

std::string describe(const CitationDistribution& d) {
    std::ostringstream os;
    os.precision(17);
    if (auto* ln = std::get_if<LogNormal>(&d)) os << "lognormal(mu=" << ln->mu << ",sigma=" << ln->sigma << ")";
    else if (auto* pa = std::get_if<Pareto>(&d)) os << "pareto(alpha=" << pa->alpha << ",xmin=" << pa->xmin << ")";
    else os << "constant(c=" << std::get<Constant>(d).c << ")";
    return os.str();
}

void SynthSpec::validate() const {
    citeval::validate(distribution);
    if (n_papers < 1) throw InputError("n_papers must be >= 1");
    if (citer_refs < 1) throw InputError("citer_refs must be >= 1");
    if (citer_nref < citer_refs) throw InputError("citer_nref must be >= citer_refs");
    long sum = 0;
    std::set<std::string> ids;
    for (const auto& j : journal_layout) {
        if (j.count < 1) throw InputError("journal " + j.journal_id + " needs at least one paper");
        if (!ids.insert(j.journal_id).second)
            throw InputError("journal " + j.journal_id + " listed twice");
        if (j.distribution) citeval::validate(*j.distribution);
        if (j.citer_nref && *j.citer_nref < citer_refs)
            throw InputError("journal " + j.journal_id + ": citer_nref must be >= citer_refs");
        sum += j.count;
    }
    if (!journal_layout.empty() && sum != n_papers)
        throw InputError("n_papers does not match the journal layout total");
}

SynthSpec parse_synth_spec(std::istream& in) {
    SynthSpec spec;
    std::vector<std::string> journal_lines;
    bool n_given = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw InputError("synth spec line " + std::to_string(line_no) + ": expected key=value");
        auto key = trim(t.substr(0, eq));
        auto value = trim(t.substr(eq + 1));
        if (key == "seed") {
            std::istringstream is{std::string(value)};
            if (!(is >> spec.seed) || !is.eof()) throw InputError("synth spec: bad seed");
        } else if (key == "n_papers") {
            spec.n_papers = to_long(key, value);
            n_given = true;
        } else if (key == "citing_year") {
            spec.citing_year = static_cast<int>(to_long(key, value));
        } else if (key == "citer_refs") {
            spec.citer_refs = to_long(key, value);
        } else if (key == "citer_nref") {
            spec.citer_nref = to_long(key, value);
        } else if (key == "journal") {
            journal_lines.emplace_back(value);
        } else if (!apply_distribution_key(spec.distribution, key, value)) {
            throw InputError("synth spec line " + std::to_string(line_no) + ": unknown key '" +
                             std::string(key) + "'");
        }
    }
    long sum = 0;
    for (const auto& j : journal_lines) {
        spec.journal_layout.push_back(parse_layout(j, spec.distribution));
        sum += spec.journal_layout.back().count;
    }
    if (!n_given && !spec.journal_layout.empty()) spec.n_papers = sum;
    spec.validate();
    return spec;
}

std::vector<double> sample_distribution(const CitationDistribution& d, std::size_t n,
                                        std::uint64_t seed) {
    validate(d);
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = draw(d, rng);
    return out;
}

long quantize_count(double value) {
    if (!(value > 0.0)) return 0;
    return std::lround(value);
}

void realize_journal(SynthCorpus& out, const std::string& journal_id, const std::string& category,
                     const std::vector<long>& counts, int citing_year, long citer_refs,
                     long citer_nref) {
    out.journals.push_back({journal_id, "Synthetic journal " + journal_id, {category}});

    std::vector<std::string> slots;
    long max_count = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        PaperRecord p;
        p.paper_id = padded(journal_id + "-", static_cast<long>(i + 1), 6);
        p.journal_id = journal_id;
        p.pub_year = citing_year - 1 - static_cast<int>(i % 2);
        p.doc_type = DocType::article;
        for (long c = 0; c < counts[i]; ++c) slots.push_back(p.paper_id);
        max_count = std::max(max_count, counts[i]);
        out.papers.push_back(std::move(p));
    }
    if (slots.empty()) return;

    // Slot s goes to citer s mod K. K >= max count keeps a paper's slots on
    // distinct citers; K >= slots / citer_refs bounds each list.
    const long total = static_cast<long>(slots.size());
    const long n_citers = std::max(max_count, (total + citer_refs - 1) / citer_refs);
    std::vector<PaperRecord> citers(static_cast<std::size_t>(n_citers));
    for (long c = 0; c < n_citers; ++c) {
        auto& p = citers[static_cast<std::size_t>(c)];
        p.paper_id = padded("C-" + journal_id + "-", c + 1, 7);
        p.journal_id = "CITERS";
        p.pub_year = citing_year;
        p.doc_type = DocType::article;
    }
    for (long s = 0; s < total; ++s)
        citers[static_cast<std::size_t>(s % n_citers)].refs.push_back(slots[static_cast<std::size_t>(s)]);
    for (auto& p : citers) {
        p.n_refs = std::max(citer_nref, static_cast<long>(p.refs.size()));
        out.papers.push_back(std::move(p));
    }
}

SynthCorpus generate_corpus(const SynthSpec& spec) {
    spec.validate();
    std::vector<JournalLayout> layout = spec.journal_layout;
    if (layout.empty()) layout.push_back({"J1", spec.n_papers, std::nullopt, std::nullopt, "SYN"});

    SynthCorpus out;
    for (std::size_t j = 0; j < layout.size(); ++j) {
        const auto& l = layout[j];
        const auto& dist = l.distribution ? *l.distribution : spec.distribution;
        auto draws = sample_distribution(dist, static_cast<std::size_t>(l.count),
                                         spec.seed + kGolden * (j + 1));
        std::vector<long> counts(draws.size());
        for (std::size_t i = 0; i < draws.size(); ++i) counts[i] = quantize_count(draws[i]);
        realize_journal(out, l.journal_id, l.category, counts, spec.citing_year, spec.citer_refs,
                        l.citer_nref.value_or(spec.citer_nref));
    }
    bool has_citers = false;
    for (const auto& p : out.papers) has_citers = has_citers || p.journal_id == "CITERS";
    if (has_citers) out.journals.push_back({"CITERS", "Synthetic citing papers", {"CIT"}});
    return out;
}

namespace {

std::vector<long> repeat(std::initializer_list<std::pair<long, long>> runs) {
    std::vector<long> out;
    for (auto [count, value] : runs) out.insert(out.end(), static_cast<std::size_t>(count), value);
    return out;
}

double mean_of(const std::vector<long>& v) {
    double s = 0.0;
    for (long x : v) s += static_cast<double>(x);
    return s / static_cast<double>(v.size());
}

}  // namespace

DominanceScenario dominance_scenario() {
    constexpr int year = 2009;
    // (papers, citations) runs.
    const auto counts_a = repeat({{60, 0}, {80, 1}, {50, 2}, {5, 9}, {45, 12}, {15, 30}, {3, 50}, {1, 100}});
    const auto counts_b = repeat({{40, 12}});
    const auto counts_c = repeat({{500, 0}, {250, 1}, {150, 2}, {60, 3}, {30, 5}, {10, 8}});

    DominanceScenario s;
    s.journal_a = "JA";
    s.journal_b = "JB";
    realize_journal(s.corpus, "JA", "LIS", counts_a, year, 5, 20);
    realize_journal(s.corpus, "JB", "LIS", counts_b, year, 5, 20);
    realize_journal(s.corpus, "JC", "LIS", counts_c, year, 5, 20);
    s.corpus.journals.push_back({"CITERS", "Synthetic citing papers", {"CIT"}});

    Corpus corpus(s.corpus.papers, s.corpus.journals);
    s.reference = build_reference_set(corpus, ByCategory{"LIS"}, {year - 2, year - 1},
                                      {year, year}, "dominance LIS set");
    auto dist = quantile_ranks(s.reference, member_citations(corpus, s.reference, CountingMode::whole));

    for (auto i : corpus.journal_papers("JA")) s.papers_a.push_back(corpus.papers()[i].paper_id);
    for (auto i : corpus.journal_papers("JB")) s.papers_b.push_back(corpus.papers()[i].paper_id);

    s.classes_a.assign(dist.scheme.size(), 0);
    s.classes_b.assign(dist.scheme.size(), 0);
    for (const auto& id : s.papers_a) ++s.classes_a[dist.at(id).class_index];
    for (const auto& id : s.papers_b) ++s.classes_b[dist.at(id).class_index];
    s.mean_a = mean_of(counts_a);
    s.mean_b = mean_of(counts_b);
    s.i3_a = i3_of(s.papers_a, dist, I3Scheme::quantiles);
    s.i3_b = i3_of(s.papers_b, dist, I3Scheme::quantiles);
    const auto all = all_doc_types();
    s.if_a = impact_factor(window_counts(corpus, "JA", year, all, CountingMode::whole));
    s.if_b = impact_factor(window_counts(corpus, "JB", year, all, CountingMode::whole));

    for (std::size_t c = 0; c < s.classes_a.size(); ++c)
        if (s.classes_a[c] <= s.classes_b[c])
            throw ComputeError("dominance scenario: class dominance fails in class " +
                               std::to_string(c + 1));
    if (!(s.mean_a < s.mean_b)) throw ComputeError("dominance scenario: mean ordering fails");
    if (!(s.i3_a > s.i3_b && s.if_a < s.if_b))
        throw ComputeError("dominance scenario: IF and I3 orderings do not reverse");
    return s;
}

}  // namespace citeval
