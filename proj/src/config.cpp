#include "citeval/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace citeval {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return std::string(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InputError("config: " + key + " expects true/false");
}

long parse_long(const std::string& key, const std::string& v) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw InputError("config: " + key + " expects an integer");
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

void set_config_value(Config& c, const std::string& raw_key, const std::string& raw_value,
                      const std::filesystem::path& base_dir) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "papers") {
        c.papers = resolve(base_dir, value);
    } else if (key == "journals") {
        c.journals = resolve(base_dir, value);
    } else if (key == "papers_format") {
        c.papers_format = parse_paper_format(value);
    } else if (key == "counting") {
        c.counting = parse_counting_mode(value);
    } else if (key == "citable") {
        c.citable.clear();
        for (const auto& name : split(value, ',')) {
            bool known = true;
            c.citable.insert(parse_doc_type(name, &known));
            if (!known) throw InputError("config: unknown doc_type '" + name + "' in citable");
        }
        if (c.citable.empty()) throw InputError("config: citable lists no document types");
    } else if (key == "scheme") {
        c.scheme_file = resolve(base_dir, value);
        c.scheme = load_scheme(*c.scheme_file);
    } else if (key == "year") {
        c.year = static_cast<int>(parse_long(key, value));
    } else if (key == "pub_window") {
        c.pub_window = parse_year_range(value);
    } else if (key == "cite_window") {
        c.cite_window = parse_year_range(value);
    } else if (key == "reference") {
        if (value == "all") c.reference.reset();
        else c.reference = parse_selector(value);
    } else if (key == "top_k") {
        c.top_k.clear();
        for (const auto& k : split(value, ',')) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), v);
            if (ec != std::errc{} || ptr != k.data() + k.size() || !(v > 0.0 && v < 100.0))
                throw InputError("config: top_k values must lie in (0, 100)");
            c.top_k.push_back(v);
        }
    } else if (key == "units") {
        if (value == "journals") c.journal_units = true;
        else if (value == "sets") c.journal_units = false;
        else throw InputError("config: units expects journals or sets");
    } else if (key.starts_with("unit.")) {
        auto name = key.substr(5);
        auto ids = split(value, ';');
        if (name.empty() || ids.empty()) throw InputError("config: " + key + " needs paper ids");
        c.paper_sets[name] = std::move(ids);
    } else if (key == "fallback_if") {
        c.fallback_if = parse_bool(key, value);
    } else if (key == "ecr_match_doc_type") {
        c.ecr_match_doc_type = parse_bool(key, value);
    } else if (key == "threads") {
        long n = parse_long(key, value);
        if (n < 1) throw InputError("config: threads must be >= 1");
        c.threads = static_cast<unsigned>(n);
    } else {
        throw InputError("config: unknown key '" + key + "'");
    }
}

Config parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    Config c;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(line_no) + ": expected key=value");
        set_config_value(c, t.substr(0, eq), t.substr(eq + 1), base_dir);
    }
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("no such input: " + path.string());
    return parse_config(in, path.parent_path());
}

void finalize_config(Config& c) {
    if (c.papers.empty()) throw InputError("config: papers is required");
    if (c.year == 0) {
        if (c.cite_window.first == 0) throw InputError("config: year or cite_window is required");
        c.year = c.cite_window.last;
    }
    if (c.pub_window.first == 0) c.pub_window = {c.year - 2, c.year - 1};
    if (c.cite_window.first == 0) c.cite_window = {c.year, c.year};
    if (!c.journal_units && c.paper_sets.empty())
        throw InputError("config: units=sets needs at least one unit.<name> entry");
}

}  // namespace citeval
