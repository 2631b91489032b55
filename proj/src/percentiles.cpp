#include "citeval/percentiles.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "citeval/indicators.hpp"

namespace citeval {

EvaluationScheme EvaluationScheme::nsb() {
    return {{0.0, 50.0, 75.0, 90.0, 95.0, 99.0}, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}};
}

void EvaluationScheme::validate() const {
    if (lower_bounds.empty()) throw InputError("evaluation scheme has no classes");
    if (weights.size() != lower_bounds.size())
        throw InputError("evaluation scheme needs one weight per class");
    if (lower_bounds.front() != 0.0) throw InputError("first class bound must be 0");
    for (std::size_t i = 0; i < lower_bounds.size(); ++i) {
        if (lower_bounds[i] >= 100.0) throw InputError("class bounds must stay below 100");
        if (i > 0 && !(lower_bounds[i] > lower_bounds[i - 1]))
            throw InputError("class bounds must increase strictly");
        if (!(weights[i] > 0.0)) throw InputError("class weights must be positive");
    }
}

EvaluationScheme parse_scheme(std::istream& in) {
    EvaluationScheme s;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        double bound = 0.0, weight = 0.0;
        char comma = 0;
        std::string rest;
        if (!(row >> bound >> comma >> weight) || comma != ',' || (row >> rest))
            throw InputError("scheme line " + std::to_string(line_no) +
                             ": expected `lower_bound,weight`");
        s.lower_bounds.push_back(bound);
        s.weights.push_back(weight);
    }
    s.validate();
    return s;
}

EvaluationScheme load_scheme(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("no such input: " + path.string());
    return parse_scheme(in);
}

std::string_view to_string(Pr6Class c) {
    switch (c) {
        case Pr6Class::bottom50: return "bottom50";
        case Pr6Class::top50: return "top50";
        case Pr6Class::top25: return "top25";
        case Pr6Class::top10: return "top10";
        case Pr6Class::top5: return "top5";
        case Pr6Class::top1: return "top1";
    }
    return "?";
}

std::size_t classify(double quantile, const EvaluationScheme& scheme) {
    auto it = std::upper_bound(scheme.lower_bounds.begin(), scheme.lower_bounds.end(), quantile);
    if (it == scheme.lower_bounds.begin()) return 0;
    return static_cast<std::size_t>(it - scheme.lower_bounds.begin()) - 1;
}

const PercentileAssignment& PercentileDistribution::at(std::string_view paper_id) const {
    auto it = std::lower_bound(
        assignments.begin(), assignments.end(), paper_id,
        [](const PercentileAssignment& a, std::string_view id) { return a.paper_id < id; });
    if (it == assignments.end() || it->paper_id != paper_id)
        throw ComputeError("paper " + std::string(paper_id) + " is outside the reference set");
    return *it;
}

bool PercentileDistribution::contains(std::string_view paper_id) const {
    auto it = std::lower_bound(
        assignments.begin(), assignments.end(), paper_id,
        [](const PercentileAssignment& a, std::string_view id) { return a.paper_id < id; });
    return it != assignments.end() && it->paper_id == paper_id;
}

bool PercentileDistribution::all_tied() const {
    if (assignments.empty()) return true;
    const long n = static_cast<long>(assignments.size());
    return std::all_of(assignments.begin(), assignments.end(),
                       [n](const auto& a) { return a.twice_rank == n; });
}

std::map<std::string, double> member_citations(const Corpus& corpus, const ReferenceSet& reference,
                                               CountingMode counting) {
    std::map<std::string, double> out;
    for (const auto& id : reference.member_ids)
        out.emplace(id, citations_received(corpus, corpus.index_of(id), reference.cite_window,
                                           counting));
    return out;
}

PercentileDistribution quantile_ranks(const ReferenceSet& reference,
                                      const std::map<std::string, double>& citations,
                                      const EvaluationScheme& scheme) {
    scheme.validate();
    if (reference.member_ids.empty()) throw ComputeError("empty reference set");

    PercentileDistribution dist;
    dist.scheme = scheme;
    dist.class_counts.assign(scheme.size(), 0);

    std::vector<double> sorted;
    sorted.reserve(reference.member_ids.size());
    for (const auto& id : reference.member_ids) {
        auto it = citations.find(id);
        if (it == citations.end()) throw ComputeError("no citation count for paper " + id);
        sorted.push_back(it->second);
    }
    std::sort(sorted.begin(), sorted.end());

    const long n = static_cast<long>(sorted.size());
    dist.assignments.reserve(sorted.size());
    // member_ids is a std::set, so assignments come out in ascending paper_id.
    for (const auto& id : reference.member_ids) {
        const double c = citations.at(id);
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), c);
        auto hi = std::upper_bound(lo, sorted.end(), c);
        PercentileAssignment a;
        a.paper_id = id;
        a.citations = c;
        a.twice_rank = 2 * static_cast<long>(lo - sorted.begin()) + static_cast<long>(hi - lo);
        a.quantile = 50.0 * static_cast<double>(a.twice_rank) / static_cast<double>(n);
        a.class_index = classify(a.quantile, scheme);
        ++dist.class_counts[a.class_index];
        dist.assignments.push_back(std::move(a));
    }
    return dist;
}

namespace {

// Groups papers by percentile value and sums value * multiplicity.
template <typename Range>
double grouped_i3(const Range& assignments, const PercentileDistribution& dist, I3Scheme scheme) {
    if (scheme == I3Scheme::pr6) {
        std::vector<long> counts(dist.scheme.size(), 0);
        for (const PercentileAssignment* a : assignments) ++counts[a->class_index];
        double sum = 0.0;
        for (std::size_t c = 0; c < counts.size(); ++c)
            sum += dist.scheme.weights[c] * static_cast<double>(counts[c]);
        return sum;
    }
    std::map<long, long> multiplicity;
    for (const PercentileAssignment* a : assignments) ++multiplicity[a->twice_rank];
    const double n = static_cast<double>(dist.size());
    double sum = 0.0;
    for (auto [twice_rank, count] : multiplicity)
        sum += (50.0 * static_cast<double>(twice_rank) / n) * static_cast<double>(count);
    return sum;
}

std::vector<const PercentileAssignment*> select(std::span<const std::string> subset,
                                                const PercentileDistribution& dist) {
    std::vector<const PercentileAssignment*> out;
    out.reserve(subset.size());
    for (const auto& id : subset) out.push_back(&dist.at(id));
    return out;
}

}  // namespace

double i3(const PercentileDistribution& dist, I3Scheme scheme) {
    std::vector<const PercentileAssignment*> all;
    all.reserve(dist.size());
    for (const auto& a : dist.assignments) all.push_back(&a);
    return grouped_i3(all, dist, scheme);
}

double i3_of(std::span<const std::string> subset, const PercentileDistribution& dist,
             I3Scheme scheme) {
    return grouped_i3(select(subset, dist), dist, scheme);
}

double i3_share(std::span<const std::string> subset, const PercentileDistribution& dist,
                I3Scheme scheme) {
    return 100.0 * i3_of(subset, dist, scheme) / i3(dist, scheme);
}

long top_k_count(std::span<const std::string> subset, const PercentileDistribution& dist, double k) {
    if (!(k > 0.0 && k < 100.0)) throw ComputeError("top-k percentage must lie in (0, 100)");
    const double n = static_cast<double>(dist.size());
    long hits = 0;
    // quantile >= 100 - k  <=>  50 * (2L + T) >= (100 - k) * N, compared without division.
    for (const auto* a : select(subset, dist))
        if (50.0 * static_cast<double>(a->twice_rank) >= (100.0 - k) * n) ++hits;
    return hits;
}

double top_k_proportion(std::span<const std::string> subset, const PercentileDistribution& dist,
                        double k) {
    if (subset.empty()) throw ComputeError("empty unit of assessment");
    return static_cast<double>(top_k_count(subset, dist, k)) / static_cast<double>(subset.size());
}

}  // namespace citeval
