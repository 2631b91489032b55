#pragma once
// key=value run configuration shared by the compute, rank and compare commands.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "citeval/common.hpp"
#include "citeval/ingest.hpp"
#include "citeval/percentiles.hpp"

namespace citeval {

struct Config {
    std::filesystem::path papers;
    std::filesystem::path journals;
    PaperFormat papers_format = PaperFormat::csv;

    CountingMode counting = CountingMode::whole;
    DocTypeFilter citable = {DocType::article, DocType::review};
    EvaluationScheme scheme = EvaluationScheme::nsb();
    std::optional<std::filesystem::path> scheme_file;

    // IF year t; pub/cite windows default to [t-2, t-1] and [t, t].
    int year = 0;
    YearRange pub_window;
    YearRange cite_window;

    // Unset means every journal in the corpus.
    std::optional<ReferenceSelector> reference;
    std::vector<double> top_k = {10.0, 25.0};

    // Journals of the reference set are always units; these add named paper sets.
    std::map<std::string, std::vector<std::string>> paper_sets;
    bool journal_units = true;

    bool fallback_if = false;
    bool ecr_match_doc_type = false;
    unsigned threads = 1;
};

// Relative paths resolve against `base_dir`. Recognised keys: papers, journals,
// papers_format, counting, citable, scheme, year, pub_window, cite_window,
// reference, top_k, units, unit.<name>, fallback_if, ecr_match_doc_type, threads.
Config parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

// Applies a single key=value assignment (also used for command-line overrides).
void set_config_value(Config& config, const std::string& key, const std::string& value,
                      const std::filesystem::path& base_dir = {});

// Fills derived defaults and checks required keys; InputError on failure.
void finalize_config(Config& config);

}  // namespace citeval
