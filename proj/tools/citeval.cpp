// citeval: citation-indicator reports from paper/journal corpora.
//
// Exit codes: 0 success, 1 computation error, 2 usage or input error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "citeval/config.hpp"
#include "citeval/ingest.hpp"
#include "citeval/report.hpp"
#include "citeval/synth.hpp"

namespace fs = std::filesystem;
using namespace citeval;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string format = "csv";
    std::vector<std::string> overrides;
    std::string papers;
    std::string journals;
    std::string counting;
    unsigned threads = 0;
    bool fallback_if = false;
};

// Writes every file to a temporary sibling first so that a failure leaves no partial output.
void write_all(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir.string());
    std::vector<fs::path> staged;
    for (const auto& [name, content] : files) {
        fs::path tmp = dir / ("." + name + ".tmp");
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) {
            for (const auto& s : staged) fs::remove(s, ec);
            throw InputError("cannot write " + tmp.string());
        }
        staged.push_back(tmp);
    }
    for (std::size_t i = 0; i < files.size(); ++i) fs::rename(staged[i], dir / files[i].first);
}

Config build_config(const Options& o) {
    Config cfg;
    if (!o.config_path.empty()) cfg = load_config(o.config_path);
    for (const auto& kv : o.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.papers.empty()) cfg.papers = o.papers;
    if (!o.journals.empty()) cfg.journals = o.journals;
    if (!o.counting.empty()) cfg.counting = parse_counting_mode(o.counting);
    if (o.threads > 0) cfg.threads = o.threads;
    if (o.fallback_if) cfg.fallback_if = true;
    return cfg;
}

Corpus load_corpus(const Config& cfg, IngestDiagnostics* diag) {
    auto papers = load_papers(cfg.papers, cfg.papers_format, diag);
    std::vector<JournalRecord> journals;
    if (!cfg.journals.empty()) journals = load_journals(cfg.journals);
    return Corpus(std::move(papers), std::move(journals));
}

IndicatorReport run_report(const Options& o) {
    auto cfg = build_config(o);
    finalize_config(cfg);
    IngestDiagnostics diag;
    auto corpus = load_corpus(cfg, &diag);
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
    return compute_report(corpus, cfg);
}

int cmd_ingest_check(const Options& o) {
    auto cfg = build_config(o);
    if (cfg.papers.empty()) throw InputError("no papers file given (--papers or config)");
    IngestDiagnostics diag;
    auto corpus = load_corpus(cfg, &diag);
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
    const auto& g = corpus.graph();
    std::cout << "papers: " << corpus.papers().size() << '\n'
              << "journals: " << corpus.journals().size() << '\n'
              << "edges: " << g.edges.size() << '\n'
              << "unresolved_refs: " << g.unresolved_count << '\n'
              << "duplicate_refs: " << g.duplicate_count << '\n'
              << "warnings: " << diag.warnings.size() << '\n';
    return 0;
}

int cmd_compute(const Options& o) {
    auto report = run_report(o);
    const fs::path dir = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
    write_all(dir, {{"report.csv", report_csv(report)},
                    {"report.json", report_json(report).dump(2) + "\n"}});
    std::cout << (o.format == "json" ? report_json(report).dump(2) + "\n" : report_csv(report));
    return 0;
}

int cmd_rank(const Options& o, const std::string& by) {
    auto report = run_report(o);
    std::vector<std::optional<double>> values;
    for (const auto& u : report.units) values.push_back(indicator_value(u, report, by));
    auto ranks = dense_ranks(values);
    std::vector<std::size_t> order(report.units.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["indicator"] = by;
        j["ranking"] = nlohmann::ordered_json::array();
        for (auto i : order) {
            nlohmann::ordered_json row;
            row["rank"] = ranks[i];
            row["unit"] = report.units[i].unit;
            row["value"] = values[i] ? nlohmann::ordered_json(*values[i]) : nlohmann::ordered_json(nullptr);
            j["ranking"].push_back(row);
        }
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "rank,unit," << by << '\n';
        for (auto i : order)
            std::cout << ranks[i] << ',' << report.units[i].unit << ','
                      << (values[i] ? format_fixed(*values[i], 3) : "n/a") << '\n';
    }
    return 0;
}

int cmd_compare(const Options& o, const std::string& unit1, const std::string& unit2) {
    auto report = run_report(o);
    auto cmp = compare_units(report, unit1, unit2);
    auto csv = comparison_csv(cmp);
    auto json = comparison_json(cmp).dump(2) + "\n";
    if (!o.out_dir.empty()) write_all(o.out_dir, {{"comparison.csv", csv}, {"comparison.json", json}});
    std::cout << (o.format == "json" ? json : csv);
    return 0;
}

std::string compute_config(const std::string& papers_name, const std::string& papers_format,
                           int year, const std::string& reference) {
    std::ostringstream os;
    os << "# generated by citeval synth\n"
       << "papers=" << papers_name << "\n"
       << "papers_format=" << papers_format << "\n"
       << "journals=journals.csv\n"
       << "year=" << year << "\n"
       << "reference=" << reference << "\n";
    return os.str();
}

int cmd_synth(const Options& o, const std::string& spec_path, bool dominance,
              const std::string& corpus_format) {
    if (o.out_dir.empty()) throw InputError("synth needs --out-dir");
    const auto format = parse_paper_format(corpus_format);
    const std::string papers_name = format == PaperFormat::csv ? "papers.csv" : "papers.jsonl";

    SynthCorpus corpus;
    nlohmann::ordered_json manifest;
    std::string reference;
    int year = 0;
    if (dominance) {
        auto s = dominance_scenario();
        corpus = std::move(s.corpus);
        manifest["scenario"] = "dominance";
        manifest["journal_a"] = s.journal_a;
        manifest["journal_b"] = s.journal_b;
        year = s.reference.cite_window.last;
        reference = "category:LIS";
    } else {
        if (spec_path.empty()) throw InputError("synth needs --spec or --dominance");
        std::ifstream in(spec_path);
        if (!in) throw InputError("no such input: " + spec_path);
        auto spec = parse_synth_spec(in);
        corpus = generate_corpus(spec);
        manifest["seed"] = spec.seed;
        manifest["n_papers"] = spec.n_papers;
        manifest["distribution"] = describe(spec.distribution);
        manifest["citing_year"] = spec.citing_year;
        manifest["citer_refs"] = spec.citer_refs;
        manifest["citer_nref"] = spec.citer_nref;
        auto& layout = manifest["journals"] = nlohmann::ordered_json::array();
        for (const auto& j : spec.journal_layout) {
            nlohmann::ordered_json x;
            x["journal_id"] = j.journal_id;
            x["count"] = j.count;
            x["distribution"] = describe(j.distribution.value_or(spec.distribution));
            x["citer_nref"] = j.citer_nref.value_or(spec.citer_nref);
            x["category"] = j.category;
            layout.push_back(x);
        }
        year = spec.citing_year;
        reference = "all";
    }
    manifest["papers_file"] = papers_name;
    manifest["papers_written"] = corpus.papers.size();

    std::ostringstream papers, journals;
    write_papers(papers, corpus.papers, format);
    write_journals(journals, corpus.journals);
    write_all(o.out_dir, {{papers_name, papers.str()},
                          {"journals.csv", journals.str()},
                          {"manifest.json", manifest.dump(2) + "\n"},
                          {"compute.cfg", compute_config(papers_name, corpus_format, year, reference)}});
    std::cout << "wrote " << corpus.papers.size() << " papers to " << o.out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"citeval: journal and document-set citation indicators"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--config", o.config_path, "key=value run configuration");
    app.add_option("--out-dir", o.out_dir, "directory for report or corpus files");
    app.add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--set", o.overrides, "override a config key (key=value); repeatable");
    app.add_option("--papers", o.papers, "papers file");
    app.add_option("--journals", o.journals, "journals file");
    app.add_option("--counting", o.counting, "whole or fractional")
        ->check(CLI::IsMember({"whole", "fractional"}));
    app.add_option("--threads", o.threads, "worker threads for per-unit computation");
    app.add_flag("--fallback-if", o.fallback_if,
                 "substitute the classic IF when the moving average is undefined");

    auto* ingest = app.add_subcommand("ingest-check", "parse and validate corpus files");
    auto* compute = app.add_subcommand(
        "compute",
        std::string("write report.csv and report.json; csv columns: ") + kReportColumns);
    auto* rank = app.add_subcommand("rank", "rank units by one indicator");
    std::string by = "i3_q";
    rank->add_option("--by", by, "indicator")->check(CLI::IsMember(rankable_indicators()));
    auto* compare = app.add_subcommand("compare", "compare two units with significance tests");
    std::string unit1, unit2;
    compare->add_option("unit1", unit1)->required();
    compare->add_option("unit2", unit2)->required();
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string spec_path, corpus_format = "csv";
    bool dominance = false;
    synth->add_option("--spec", spec_path, "synthetic corpus spec (key=value)");
    synth->add_flag("--dominance", dominance, "emit the built-in dominance scenario");
    synth->add_option("--corpus-format", corpus_format)->check(CLI::IsMember({"csv", "jsonl"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ingest) return cmd_ingest_check(o);
        if (*compute) return cmd_compute(o);
        if (*rank) return cmd_rank(o, by);
        if (*compare) return cmd_compare(o, unit1, unit2);
        if (*synth) return cmd_synth(o, spec_path, dominance, corpus_format);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ComputeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
