#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "citeval/percentiles.hpp"
#include "percentile_oracle.hpp"

using namespace citeval;
using namespace citeval::testing;

namespace {

ReferenceSet set_of(const std::map<std::string, double>& counts) {
    ReferenceSet rs;
    for (const auto& [id, c] : counts) rs.member_ids.insert(id);
    rs.pub_window = {2007, 2008};
    rs.cite_window = {2009, 2009};
    return rs;
}

PercentileDistribution ranks_of(const std::vector<double>& values,
                                const EvaluationScheme& scheme = EvaluationScheme::nsb()) {
    auto counts = as_counts(values);
    return quantile_ranks(set_of(counts), counts, scheme);
}

std::vector<double> distinct_hundred() {
    std::vector<double> v(100);
    for (int i = 0; i < 100; ++i) v[i] = i;
    return v;
}

std::vector<std::string> ids_of(const PercentileDistribution& d, std::size_t from, std::size_t to) {
    std::vector<std::string> out;
    for (std::size_t i = from; i < to; ++i) out.push_back(d.assignments[i].paper_id);
    return out;
}

std::vector<double> random_counts(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> v(n);
    const unsigned range = 1 + static_cast<unsigned>(rng() % 40);  // small ranges force ties
    for (auto& x : v) x = static_cast<double>(rng() % range);
    return v;
}

}  // namespace

TEST_CASE("quantile_ranks mid-rank examples") {
    auto d = ranks_of({0, 1, 2, 3});
    std::vector<double> q;
    for (const auto& a : d.assignments) q.push_back(a.quantile);
    CHECK(q == std::vector<double>{12.5, 37.5, 62.5, 87.5});

    auto tied = ranks_of({5, 5});
    CHECK(tied.assignments[0].quantile == 50.0);
    CHECK(tied.assignments[1].quantile == 50.0);
    CHECK(tied.all_tied());

    auto h = ranks_of(distinct_hundred());
    for (int i = 0; i < 100; ++i) CHECK(h.assignments[i].quantile == i + 0.5);
    CHECK(h.assignments[99].pr6_class() == Pr6Class::top1);
    CHECK_FALSE(h.all_tied());
}

TEST_CASE("quantile_ranks requires a count for every member") {
    auto counts = as_counts({1, 2, 3});
    auto rs = set_of(counts);
    counts.erase(counts.begin());
    CHECK_THROWS_WITH_AS(quantile_ranks(rs, counts), "no citation count for paper P000000", ComputeError);
}

TEST_CASE("i3 over the hundred-paper set") {
    auto h = ranks_of(distinct_hundred());
    CHECK(i3(h, I3Scheme::quantiles) == 5000.0);
    CHECK(h.class_counts == std::vector<long>{50, 25, 15, 5, 4, 1});
    CHECK(i3(h, I3Scheme::pr6) == 191.0);
    CHECK(i3(ranks_of({7}), I3Scheme::quantiles) == 50.0);
}

TEST_CASE("i3_share") {
    auto h = ranks_of(distinct_hundred());
    CHECK(i3_share(ids_of(h, 0, 100), h, I3Scheme::quantiles) == 100.0);
    CHECK(i3_share(ids_of(h, 90, 100), h, I3Scheme::quantiles) == doctest::Approx(19.0).epsilon(1e-14));

    auto halves = ranks_of({3, 3, 3, 3});
    CHECK(i3_share(ids_of(halves, 0, 2), halves, I3Scheme::quantiles) == 50.0);
    CHECK(i3_share(ids_of(halves, 2, 4), halves, I3Scheme::pr6) == 50.0);

    std::vector<std::string> outside{"nope"};
    CHECK_THROWS_AS(i3_share(outside, h, I3Scheme::quantiles), ComputeError);
}

TEST_CASE("top_k_proportion") {
    auto h = ranks_of(distinct_hundred());
    CHECK(top_k_proportion(ids_of(h, 0, 100), h, 10) == 0.10);
    CHECK(top_k_proportion(ids_of(h, 90, 100), h, 10) == 1.0);
    auto tied = ranks_of(std::vector<double>(37, 4.0));
    CHECK(top_k_proportion(ids_of(tied, 0, 37), tied, 10) == 0.0);
    CHECK_THROWS_WITH_AS(top_k_proportion({}, h, 10), "empty unit of assessment", ComputeError);
    CHECK_THROWS_AS(top_k_proportion(ids_of(h, 0, 1), h, 0), ComputeError);
    CHECK_THROWS_AS(top_k_proportion(ids_of(h, 0, 1), h, 100), ComputeError);
}

TEST_CASE("top_k of the whole set is k/100 for distinct counts") {
    for (int n : {20, 100, 200, 400}) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[i] = 3.0 * i + 1;
        auto d = ranks_of(v);
        auto all = ids_of(d, 0, d.size());
        for (double k : {1.0, 5.0, 10.0, 25.0, 50.0}) {
            if (static_cast<long>(n * k) % 100 != 0) continue;
            CHECK(top_k_proportion(all, d, k) == k / 100.0);
        }
    }
}

TEST_CASE("classify") {
    const auto nsb = EvaluationScheme::nsb();
    CHECK(classify(99.5, nsb) == 5);
    CHECK(classify(50.0, nsb) == 1);
    CHECK(classify(49.999, nsb) == 0);
    CHECK(classify(0.5, nsb) == 0);
    CHECK(classify(90.0, nsb) == 3);
    CHECK(to_string(static_cast<Pr6Class>(classify(99.5, nsb) + 1)) == "top1");
}

TEST_CASE("evaluation schemes load and validate") {
    std::istringstream rae("# four classes\n0,1\n50,2\n80,3\n95,4\n");
    auto s = parse_scheme(rae);
    CHECK(s.size() == 4);
    CHECK(s.weights.back() == 4.0);
    std::istringstream bad_start("10,1\n50,2\n");
    CHECK_THROWS_AS(parse_scheme(bad_start), InputError);
    std::istringstream not_increasing("0,1\n50,2\n50,3\n");
    CHECK_THROWS_AS(parse_scheme(not_increasing), InputError);
    std::istringstream garbage("0;1\n");
    CHECK_THROWS_AS(parse_scheme(garbage), InputError);

    auto d = ranks_of(distinct_hundred(), s);
    CHECK(d.class_counts == std::vector<long>{50, 30, 15, 5});
    CHECK(i3(d, I3Scheme::pr6) == 50 * 1 + 30 * 2 + 15 * 3 + 5 * 4);
}

TEST_CASE("quantiles match the brute-force oracle and the mid-rank identity") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto v = random_counts(rng, 1 + rng() % 200);
        auto d = ranks_of(v);
        auto oracle = brute_quantiles(v);
        long twice_rank_sum = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(d.assignments[i].quantile == doctest::Approx(oracle[i]).epsilon(1e-12));
            twice_rank_sum += d.assignments[i].twice_rank;
        }
        const long n = static_cast<long>(v.size());
        CHECK(twice_rank_sum == n * n);
        CHECK(i3(d, I3Scheme::quantiles) == doctest::Approx(direct_i3(oracle)).epsilon(1e-12));
        long census = 0;
        for (long c : d.class_counts) census += c;
        CHECK(census == n);
    }
}

TEST_CASE("raising one paper's count keeps the others' order and never lowers its own quantile") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = random_counts(rng, 2 + rng() % 60);
        auto before = ranks_of(v);
        const std::size_t j = rng() % v.size();
        v[j] += 1 + static_cast<double>(rng() % 5);
        auto after = ranks_of(v);
        CHECK(after.assignments[j].quantile >= before.assignments[j].quantile);
        for (std::size_t a = 0; a < v.size(); ++a)
            for (std::size_t b = 0; b < v.size(); ++b) {
                if (a == j || b == j) continue;
                if (before.assignments[a].quantile < before.assignments[b].quantile)
                    CHECK(after.assignments[a].quantile <= after.assignments[b].quantile);
            }
    }
}

TEST_CASE("scaling all counts changes nothing") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        auto v = random_counts(rng, 1 + rng() % 80);
        auto scaled = v;
        const double k = 0.5 + static_cast<double>(rng() % 20);
        for (auto& x : scaled) x *= k;
        auto a = ranks_of(v), b = ranks_of(scaled);
        auto half = ids_of(a, 0, (a.size() + 1) / 2);
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(a.assignments[i].quantile == b.assignments[i].quantile);
            CHECK(a.assignments[i].class_index == b.assignments[i].class_index);
        }
        CHECK(i3(a, I3Scheme::quantiles) == i3(b, I3Scheme::quantiles));
        CHECK(i3_share(half, a, I3Scheme::pr6) == i3_share(half, b, I3Scheme::pr6));
        CHECK(top_k_proportion(half, a, 10) == top_k_proportion(half, b, 10));
    }
}

TEST_CASE("shares over a partition sum to 100") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = random_counts(rng, 3 + rng() % 150);
        auto d = ranks_of(v);
        std::vector<std::vector<std::string>> parts(1 + rng() % 6);
        for (const auto& a : d.assignments) parts[rng() % parts.size()].push_back(a.paper_id);
        for (auto scheme : {I3Scheme::quantiles, I3Scheme::pr6}) {
            double total = 0.0;
            for (const auto& p : parts) total += i3_share(p, d, scheme);
            CHECK(std::abs(total - 100.0) < 1e-9);
        }
    }
}
