#include "citeval/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include "citeval/fractional.hpp"

namespace citeval {

namespace {

struct UnitSpec {
    std::string name;
    bool is_journal = false;
    std::vector<std::string> members;
    std::vector<std::size_t> window_papers;
};

struct SharedInputs {
    const Corpus& corpus;
    const Config& config;
    const ReferenceSet& reference;
    const PercentileDistribution& dist;
    std::map<std::string, double> whole;
    std::map<std::string, double> fractional;
    std::map<std::string, double> expected;
    std::string expected_error;
    std::vector<double> top_k;
    double i3_total = 0.0;
    double pr6_total = 0.0;
};

MeanMeasure sample_mean(const std::vector<double>& values) {
    MeanMeasure m;
    if (values.empty()) {
        m.value.note = "no papers";
        m.sem.note = "no papers";
        return m;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    m.value.value = sum / static_cast<double>(values.size());
    if (values.size() < 2) m.sem.note = "fewer than two papers";
    else m.sem.value = sem(values);
    return m;
}

std::vector<double> concat(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

void fill_if(MeanMeasure& out, const WindowDetail& d) {
    if (d.counts.p1 + d.counts.p2 == 0) {
        out.value.note = "no citable items";
        out.sem.note = "no citable items";
        return;
    }
    out.value.value = impact_factor(d.counts);
    auto items = concat(d.items1, d.items2);
    if (items.size() < 2) out.sem.note = "fewer than two citable items";
    else out.sem.value = sem(items);
}

UnitReport compute_unit(const UnitSpec& spec, const SharedInputs& in) {
    const auto& cfg = in.config;
    UnitReport u;
    u.unit = spec.name;
    u.is_journal = spec.is_journal;
    u.members = spec.members;
    u.n_pubs = static_cast<long>(spec.members.size());

    std::vector<double> ranked;
    for (const auto& id : spec.members) {
        u.total_cit += in.whole.at(id);
        u.total_cit_frac += in.fractional.at(id);
        ranked.push_back(cfg.counting == CountingMode::whole ? in.whole.at(id) : in.fractional.at(id));
    }
    u.mean_citations = sample_mean(ranked);

    auto whole = window_detail(in.corpus, spec.window_papers, cfg.year, cfg.citable, CountingMode::whole);
    auto frac = window_detail(in.corpus, spec.window_papers, cfg.year, cfg.citable, CountingMode::fractional);
    u.window = whole.counts;
    fill_if(u.if_classic, whole);
    fill_if(u.quasi_if, frac);
    try {
        u.if_moving.value.value = moving_average_if(whole.counts);
        if (whole.items1.size() >= 2 && whole.items2.size() >= 2) {
            const double s1 = sem(whole.items1), s2 = sem(whole.items2);
            u.if_moving.sem.value = 0.5 * std::sqrt(s1 * s1 + s2 * s2);
        } else {
            u.if_moving.sem.note = "fewer than two citable items in a year";
        }
    } catch (const ComputeError& e) {
        if (cfg.fallback_if && u.if_classic.value.value) {
            u.if_moving = u.if_classic;
            u.if_moving_fallback = true;
            u.if_moving.value.note = std::string("classic IF substituted: ") + e.what();
        } else {
            u.if_moving.value.note = e.what();
            u.if_moving.sem.note = e.what();
        }
    }

    if (!in.expected_error.empty()) {
        u.rcr.note = in.expected_error;
        u.mean_ocr_ecr.value.note = in.expected_error;
        u.mean_ocr_ecr.sem.note = in.expected_error;
    } else if (!spec.members.empty()) {
        std::vector<double> expected;
        for (const auto& id : spec.members) expected.push_back(in.expected.at(id));
        auto rates = RelativeRates::from(ranked, std::move(expected));
        try {
            u.rcr.value = rcr(rates);
        } catch (const ComputeError& e) {
            u.rcr.note = e.what();
        }
        try {
            auto ms = mean_ocr_ecr(rates);
            u.mean_ocr_ecr.value.value = ms.mean;
            if (rates.observed.size() < 2)
                u.mean_ocr_ecr.sem.note = "fewer than two papers";
            else
                u.mean_ocr_ecr.sem.value = ms.sd / std::sqrt(static_cast<double>(rates.observed.size()));
        } catch (const ComputeError& e) {
            u.mean_ocr_ecr.value.note = e.what();
            u.mean_ocr_ecr.sem.note = e.what();
        }
    }

    u.i3_q = i3_of(spec.members, in.dist, I3Scheme::quantiles);
    u.i3_pr6 = i3_of(spec.members, in.dist, I3Scheme::pr6);
    u.pct_i3 = 100.0 * u.i3_q / in.i3_total;
    u.pct_pr6 = 100.0 * u.i3_pr6 / in.pr6_total;
    u.class_counts.assign(in.dist.scheme.size(), 0);
    for (const auto& id : spec.members) ++u.class_counts[in.dist.at(id).class_index];
    for (double k : in.top_k) {
        long hits = top_k_count(spec.members, in.dist, k);
        u.top_k_counts.push_back(hits);
        u.top_k.push_back(u.n_pubs == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(u.n_pubs));
    }

    const long total_n = static_cast<long>(in.dist.size());
    try {
        u.expect_i3 = expectation_test(u.i3_q, u.n_pubs, in.i3_total, total_n);
        u.expect_pr6 = expectation_test(u.i3_pr6, u.n_pubs, in.pr6_total, total_n);
    } catch (const ComputeError& e) {
        u.expect_i3.reset();
        u.expect_pr6.reset();
        u.expect_note = e.what();
    }
    return u;
}

std::vector<UnitSpec> collect_units(const Corpus& corpus, const Config& cfg,
                                    const ReferenceSet& reference) {
    std::vector<UnitSpec> units;
    if (cfg.journal_units) {
        std::map<std::string, std::vector<std::string>> by_journal;
        for (const auto& id : reference.member_ids)
            by_journal[corpus.paper(id).journal_id].push_back(id);
        for (auto& [journal, members] : by_journal) {
            auto idx = corpus.journal_papers(journal);
            units.push_back({journal, true, std::move(members), {idx.begin(), idx.end()}});
        }
    }
    for (const auto& [name, ids] : cfg.paper_sets) {
        UnitSpec u{name, false, {}, {}};
        std::set<std::string> unique(ids.begin(), ids.end());
        for (const auto& id : unique) {
            if (!corpus.find(id)) throw InputError("unit " + name + ": unknown paper " + id);
            if (!reference.member_ids.contains(id))
                throw ComputeError("unit " + name + " lies outside the reference set (paper " + id + ")");
            u.members.push_back(id);
            u.window_papers.push_back(corpus.index_of(id));
        }
        std::sort(u.window_papers.begin(), u.window_papers.end());
        for (const auto& existing : units)
            if (existing.name == name) throw InputError("unit name " + name + " is used twice");
        units.push_back(std::move(u));
    }
    return units;
}

std::string fixed_or_na(const std::optional<double>& v, int decimals) {
    return v ? format_fixed(*v, decimals) : "n/a";
}

nlohmann::ordered_json measure_json(const Measure& m) {
    if (m.value) return *m.value;
    return nullptr;
}

nlohmann::ordered_json mean_json(const MeanMeasure& m) {
    nlohmann::ordered_json j;
    j["value"] = measure_json(m.value);
    j["sem"] = measure_json(m.sem);
    if (!m.value.note.empty()) j["note"] = m.value.note;
    if (!m.sem.note.empty()) j["sem_note"] = m.sem.note;
    return j;
}

nlohmann::ordered_json test_json(const TestResult& t) {
    nlohmann::ordered_json j;
    j["z"] = t.statistic;
    j["p_value"] = t.p_value;
    j["sig01"] = t.significant_01;
    j["sig05"] = t.significant_05;
    return j;
}

nlohmann::ordered_json expectation_json(const std::optional<ExpectationResult>& e,
                                        const std::string& note) {
    if (!e) {
        nlohmann::ordered_json j;
        j["note"] = note;
        return j;
    }
    auto j = test_json(e->test);
    j["above_expectation"] = e->above_expectation;
    j["rounded_successes"] = e->observed_successes;
    j["rounded_trials"] = e->observed_trials;
    return j;
}

std::string k_label(double k) {
    std::ostringstream os;
    os << k;
    return "top" + os.str();
}

}  // namespace

ReferenceSet reference_for(const Corpus& corpus, const Config& config) {
    if (config.reference)
        return build_reference_set(corpus, *config.reference, config.pub_window, config.cite_window);
    ByIds all;
    for (const auto& p : corpus.papers()) all.paper_ids.push_back(p.paper_id);
    return build_reference_set(corpus, all, config.pub_window, config.cite_window, "all papers");
}

IndicatorReport compute_report(const Corpus& corpus, const Config& config) {
    const auto reference = reference_for(corpus, config);
    const auto ranked = member_citations(corpus, reference, config.counting);
    const auto dist = quantile_ranks(reference, ranked, config.scheme);

    std::vector<double> top_k = config.top_k;
    top_k.push_back(10.0);
    top_k.push_back(25.0);
    std::sort(top_k.begin(), top_k.end());
    top_k.erase(std::unique(top_k.begin(), top_k.end()), top_k.end());

    SharedInputs in{corpus, config, reference, dist, {}, {}, {}, {}, top_k,
                    i3(dist, I3Scheme::quantiles), i3(dist, I3Scheme::pr6)};
    in.whole = config.counting == CountingMode::whole
                   ? ranked
                   : member_citations(corpus, reference, CountingMode::whole);
    in.fractional = config.counting == CountingMode::fractional
                        ? ranked
                        : member_citations(corpus, reference, CountingMode::fractional);
    try {
        std::vector<std::string> ids(reference.member_ids.begin(), reference.member_ids.end());
        auto ecr = expected_citation_rates(corpus, reference, ids, config.counting,
                                           config.ecr_match_doc_type);
        for (std::size_t i = 0; i < ids.size(); ++i) in.expected.emplace(ids[i], ecr[i]);
    } catch (const ComputeError& e) {
        in.expected_error = e.what();
    }

    const auto specs = collect_units(corpus, config, reference);
    IndicatorReport report;
    report.reference_label = reference.label;
    report.reference_size = static_cast<long>(dist.size());
    report.non_discriminating = dist.all_tied();
    report.counting = config.counting;
    report.year = config.year;
    report.pub_window = config.pub_window;
    report.cite_window = config.cite_window;
    report.top_k = top_k;
    report.scheme = config.scheme;
    report.i3_total = in.i3_total;
    report.pr6_total = in.pr6_total;
    report.units.resize(specs.size());

    // Each worker fills its own slots; the merge point is the fixed unit order.
    std::vector<std::exception_ptr> errors(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
            try {
                report.units[i] = compute_unit(specs[i], in);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(specs.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<std::optional<double>> ifs, i3s;
    for (const auto& u : report.units) {
        ifs.push_back(u.if_classic.value.value);
        i3s.push_back(u.i3_q);
    }
    auto rank_if = dense_ranks(ifs);
    auto rank_i3 = dense_ranks(i3s);
    for (std::size_t i = 0; i < report.units.size(); ++i) {
        report.units[i].rank_if = rank_if[i];
        report.units[i].rank_i3 = rank_i3[i];
    }
    return report;
}

std::vector<int> dense_ranks(const std::vector<std::optional<double>>& values) {
    std::vector<double> distinct;
    for (const auto& v : values)
        if (v) distinct.push_back(*v);
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<int> ranks;
    for (const auto& v : values) {
        if (!v) {
            ranks.push_back(static_cast<int>(distinct.size()) + 1);
            continue;
        }
        auto it = std::lower_bound(distinct.begin(), distinct.end(), *v, std::greater<>());
        ranks.push_back(static_cast<int>(it - distinct.begin()) + 1);
    }
    return ranks;
}

std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "n/a";
    // Avoid printing "-0.000".
    if (std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

namespace {

std::optional<double> top_value(const UnitReport& u, const IndicatorReport& r, double k) {
    for (std::size_t i = 0; i < r.top_k.size(); ++i)
        if (r.top_k[i] == k) return u.top_k[i];
    return std::nullopt;
}

}  // namespace

std::string report_csv(const IndicatorReport& report) {
    std::ostringstream os;
    os << kReportColumns << '\n';
    for (const auto& u : report.units) {
        const auto& e = u.expect_i3;
        os << u.unit << ',' << u.n_pubs << ',' << format_fixed(u.total_cit, 3) << ','
           << format_fixed(u.total_cit_frac, 3) << ',' << fixed_or_na(u.if_classic.value.value, 3)
           << ',' << fixed_or_na(u.if_moving.value.value, 3) << ','
           << fixed_or_na(u.quasi_if.value.value, 3) << ',' << format_fixed(u.i3_q, 3) << ','
           << format_fixed(u.i3_pr6, 3) << ',' << format_fixed(u.pct_i3, 2) << ','
           << format_fixed(u.pct_pr6, 2) << ',' << fixed_or_na(top_value(u, report, 10.0), 2)
           << ',' << fixed_or_na(top_value(u, report, 25.0), 2) << ','
           << (e ? format_fixed(e->test.statistic, 3) : "n/a") << ','
           << (e ? (e->test.significant_01 ? "1" : "0") : "n/a") << ','
           << (e ? (e->test.significant_05 ? "1" : "0") : "n/a") << ',' << u.rank_if << ','
           << u.rank_i3 << '\n';
    }
    return os.str();
}

nlohmann::ordered_json report_json(const IndicatorReport& report) {
    nlohmann::ordered_json j;
    auto& ref = j["reference_set"];
    ref["label"] = report.reference_label;
    ref["size"] = report.reference_size;
    ref["pub_window"] = to_string(report.pub_window);
    ref["cite_window"] = to_string(report.cite_window);
    ref["non_discriminating"] = report.non_discriminating;
    ref["i3_total"] = report.i3_total;
    ref["pr6_total"] = report.pr6_total;
    j["counting"] = std::string(to_string(report.counting));
    j["year"] = report.year;
    j["scheme"] = {{"lower_bounds", report.scheme.lower_bounds}, {"weights", report.scheme.weights}};
    j["columns"] = kReportColumns;
    j["units"] = nlohmann::ordered_json::array();
    for (const auto& u : report.units) {
        nlohmann::ordered_json x;
        x["unit"] = u.unit;
        x["kind"] = u.is_journal ? "journal" : "paper_set";
        x["n_pubs"] = u.n_pubs;
        x["total_cit"] = u.total_cit;
        x["total_cit_frac"] = u.total_cit_frac;
        x["mean_citations"] = mean_json(u.mean_citations);
        x["window"] = {{"c1", u.window.c1}, {"c2", u.window.c2}, {"p1", u.window.p1}, {"p2", u.window.p2}};
        x["if"] = mean_json(u.if_classic);
        x["if_moving"] = mean_json(u.if_moving);
        x["if_moving"]["fallback"] = u.if_moving_fallback;
        x["quasi_if"] = mean_json(u.quasi_if);
        x["rcr"] = {{"value", measure_json(u.rcr)},
                    {"sem", nullptr},
                    {"note", u.rcr.note.empty() ? "not testable: dependent distributions"
                                                : u.rcr.note}};
        x["mean_ocr_ecr"] = mean_json(u.mean_ocr_ecr);
        x["i3_q"] = u.i3_q;
        x["i3_pr6"] = u.i3_pr6;
        x["pct_i3"] = u.pct_i3;
        x["pct_pr6"] = u.pct_pr6;
        x["class_counts"] = u.class_counts;
        nlohmann::ordered_json tops;
        for (std::size_t i = 0; i < report.top_k.size(); ++i)
            tops[k_label(report.top_k[i])] = {{"proportion", u.top_k[i]}, {"count", u.top_k_counts[i]}};
        x["top_k"] = tops;
        x["expectation_i3"] = expectation_json(u.expect_i3, u.expect_note);
        x["expectation_pr6"] = expectation_json(u.expect_pr6, u.expect_note);
        x["rank_if"] = u.rank_if;
        x["rank_i3"] = u.rank_i3;
        j["units"].push_back(std::move(x));
    }
    return j;
}

std::vector<std::string> rankable_indicators() {
    return {"total_cit", "total_cit_frac", "if",    "if_moving", "quasi_if", "rcr",
            "i3_q",      "i3_pr6",         "pct_i3", "pct_pr6",  "top10",    "top25"};
}

std::optional<double> indicator_value(const UnitReport& u, const IndicatorReport& r,
                                      const std::string& indicator) {
    if (indicator == "total_cit") return u.total_cit;
    if (indicator == "total_cit_frac") return u.total_cit_frac;
    if (indicator == "if") return u.if_classic.value.value;
    if (indicator == "if_moving") return u.if_moving.value.value;
    if (indicator == "quasi_if") return u.quasi_if.value.value;
    if (indicator == "rcr") return u.rcr.value;
    if (indicator == "i3_q") return u.i3_q;
    if (indicator == "i3_pr6") return u.i3_pr6;
    if (indicator == "pct_i3") return u.pct_i3;
    if (indicator == "pct_pr6") return u.pct_pr6;
    if (indicator == "top10") return top_value(u, r, 10.0);
    if (indicator == "top25") return top_value(u, r, 25.0);
    throw InputError("unknown indicator '" + indicator + "'");
}

namespace {

const UnitReport& find_unit(const IndicatorReport& report, const std::string& name) {
    for (const auto& u : report.units)
        if (u.unit == name) return u;
    throw InputError("unit " + name + " is not part of the reference set '" +
                     report.reference_label + "'");
}

Measure of(std::optional<double> v) { return {v, {}}; }

// Positive z when the first unit's mean is larger.
ComparisonRow mean_row(const std::string& name, const MeanMeasure& a, const MeanMeasure& b) {
    ComparisonRow row{name, a.value, b.value, std::nullopt, {}};
    if (!a.value.value || !b.value.value) {
        row.note = "value undefined for a unit";
    } else if (!a.sem.value || !b.sem.value) {
        row.note = "no standard error: " + (a.sem.value ? b.sem.note : a.sem.note);
    } else {
        try {
            row.test = mean_diff_from_summary(*b.value.value, *b.sem.value, *a.value.value,
                                              *a.sem.value);
        } catch (const ComputeError& e) {
            row.note = e.what();
        }
    }
    return row;
}

}  // namespace

ComparisonReport compare_units(const IndicatorReport& report, const std::string& unit1,
                               const std::string& unit2) {
    const auto& a = find_unit(report, unit1);
    const auto& b = find_unit(report, unit2);
    ComparisonReport cmp{unit1, unit2, {}};
    auto plain = [&](std::string name, std::optional<double> x, std::optional<double> y,
                     std::string note = {}) {
        cmp.rows.push_back({std::move(name), of(x), of(y), std::nullopt, std::move(note)});
    };

    plain("n_pubs", static_cast<double>(a.n_pubs), static_cast<double>(b.n_pubs));
    plain("total_cit", a.total_cit, b.total_cit);
    plain("total_cit_frac", a.total_cit_frac, b.total_cit_frac);
    cmp.rows.push_back(mean_row("mean_citations", a.mean_citations, b.mean_citations));
    cmp.rows.push_back(mean_row("if", a.if_classic, b.if_classic));
    cmp.rows.push_back(mean_row("if_moving", a.if_moving, b.if_moving));
    cmp.rows.push_back(mean_row("quasi_if", a.quasi_if, b.quasi_if));
    cmp.rows.push_back({"rcr", a.rcr, b.rcr, std::nullopt, "not testable: dependent distributions"});
    cmp.rows.push_back(mean_row("mean_ocr_ecr", a.mean_ocr_ecr, b.mean_ocr_ecr));
    plain("i3_q", a.i3_q, b.i3_q, "tested against expectation below");
    plain("i3_pr6", a.i3_pr6, b.i3_pr6, "tested against expectation below");
    plain("pct_i3", a.pct_i3, b.pct_i3);
    plain("pct_pr6", a.pct_pr6, b.pct_pr6);

    for (std::size_t i = 0; i < report.top_k.size(); ++i) {
        ComparisonRow row{k_label(report.top_k[i]), of(a.top_k[i]), of(b.top_k[i]), std::nullopt, {}};
        try {
            row.test = two_proportion_z(a.top_k_counts[i], a.n_pubs, b.top_k_counts[i], b.n_pubs);
        } catch (const ComputeError& e) {
            row.note = e.what();
        }
        cmp.rows.push_back(std::move(row));
    }

    // Each unit's observed share against its expected share of papers.
    const double n = static_cast<double>(report.reference_size);
    for (const auto* u : {&a, &b}) {
        const double expected_share = 100.0 * static_cast<double>(u->n_pubs) / n;
        for (auto [label, share, result] :
             {std::tuple{"pct_i3", u->pct_i3, &u->expect_i3},
              std::tuple{"pct_pr6", u->pct_pr6, &u->expect_pr6}}) {
            ComparisonRow row{std::string(label) + " vs expectation (" + u->unit + ")", of(share),
                              of(expected_share), std::nullopt, {}};
            if (*result) {
                row.test = (*result)->test;
                row.note = (*result)->above_expectation ? "above expectation" : "below expectation";
                if ((*result)->test.statistic == 0.0) row.note = "at expectation";
            } else {
                row.note = u->expect_note;
            }
            cmp.rows.push_back(std::move(row));
        }
    }
    return cmp;
}

std::string comparison_csv(const ComparisonReport& cmp) {
    std::ostringstream os;
    os << "indicator," << cmp.unit1 << ',' << cmp.unit2 << ",z,p_value,sig01,sig05,note\n";
    for (const auto& r : cmp.rows) {
        os << r.indicator << ',' << fixed_or_na(r.value1.value, 3) << ','
           << fixed_or_na(r.value2.value, 3) << ',';
        if (r.test) {
            os << format_fixed(r.test->statistic, 3) << ',' << format_fixed(r.test->p_value, 4) << ','
               << (r.test->significant_01 ? 1 : 0) << ',' << (r.test->significant_05 ? 1 : 0);
        } else {
            os << "n/a,n/a,n/a,n/a";
        }
        std::string note = r.note;
        std::replace(note.begin(), note.end(), ',', ';');
        os << ',' << note << '\n';
    }
    return os.str();
}

nlohmann::ordered_json comparison_json(const ComparisonReport& cmp) {
    nlohmann::ordered_json j;
    j["unit1"] = cmp.unit1;
    j["unit2"] = cmp.unit2;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : cmp.rows) {
        nlohmann::ordered_json x;
        x["indicator"] = r.indicator;
        x["value1"] = measure_json(r.value1);
        x["value2"] = measure_json(r.value2);
        x["test"] = r.test ? test_json(*r.test) : nlohmann::ordered_json(nullptr);
        x["note"] = r.note;
        j["rows"].push_back(std::move(x));
    }
    return j;
}

}  // namespace citeval
