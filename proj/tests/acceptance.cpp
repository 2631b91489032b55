// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "citeval/fractional.hpp"
#include "citeval/indicators.hpp"
#include "citeval/percentiles.hpp"
#include "citeval/stats.hpp"
#include "citeval/synth.hpp"
#include "cli_helpers.hpp"
#include "normal_reference.hpp"
#include "percentile_oracle.hpp"
#include "random_corpus.hpp"

using namespace citeval;
using namespace citeval::testing;
namespace fs = std::filesystem;

namespace {

// Collects the first few failure reasons for a criterion.
struct Check {
    bool ok = true;
    std::vector<std::string> why;

    void expect(bool cond, const std::string& msg) {
        if (cond) return;
        ok = false;
        if (why.size() < 5) why.push_back(msg);
    }
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ReferenceSet set_of(const std::map<std::string, double>& counts) {
    ReferenceSet r;
    for (const auto& [id, c] : counts) r.member_ids.insert(id);
    r.pub_window = {2007, 2008};
    r.cite_window = {2009, 2009};
    return r;
}

// Values with heavy ties: small ranges most of the time, occasionally wide.
std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
    const unsigned range = (rng() % 4 == 0) ? 1000u : 1u + static_cast<unsigned>(rng() % 12);
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(rng() % range);
    return v;
}

void criterion_1(Check& c) {
    auto r = mean_diff_from_summary(0.870, 0.061, 2.555, 0.321);
    c.expect(r.statistic >= 5.10 && r.statistic <= 5.22, "z = " + num(r.statistic));
    c.expect(r.p_value < 0.01 && r.significant_01, "p = " + num(r.p_value));
}

void criterion_2(Check& c) {
    std::mt19937_64 rng(1001);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 500;
        auto counts = as_counts(random_values(rng, n));
        auto dist = quantile_ranks(set_of(counts), counts);
        long twice = 0;
        double sum_q = 0.0;
        for (const auto& a : dist.assignments) {
            twice += a.twice_rank;
            sum_q += a.quantile;
        }
        const long N = static_cast<long>(n);
        c.expect(twice == N * N, "trial " + std::to_string(trial) + ": sum(2L+T) != N^2");
        c.expect(std::abs(sum_q / static_cast<double>(n) - 50.0) < 1e-9,
                 "trial " + std::to_string(trial) + ": mean quantile " + num(sum_q / n));
        c.expect(std::abs(i3(dist, I3Scheme::quantiles) - 50.0 * static_cast<double>(n)) < 1e-9,
                 "trial " + std::to_string(trial) + ": I3 != 50N");
    }
}

void criterion_3(Check& c) {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 400;
        auto values = random_values(rng, n);
        auto dist = quantile_ranks(set_of(as_counts(values)), as_counts(values));
        const double grouped = i3(dist, I3Scheme::quantiles);
        const double direct = direct_i3(brute_quantiles(values));
        c.expect(std::abs(grouped - direct) < 1e-9,
                 "trial " + std::to_string(trial) + ": grouped " + num(grouped) + " direct " + num(direct));
    }
}

void criterion_4(Check& c) {
    std::vector<double> values(100);
    std::iota(values.begin(), values.end(), 0.0);
    std::mt19937_64 rng(4);
    std::shuffle(values.begin(), values.end(), rng);
    auto counts = as_counts(values);
    auto dist = quantile_ranks(set_of(counts), counts);

    std::vector<std::string> all, top;
    for (const auto& [id, v] : counts) {
        all.push_back(id);
        if (v >= 90) top.push_back(id);
    }
    c.expect(top_k_proportion(all, dist, 10) == 0.10, "whole-set top10 = " + num(top_k_proportion(all, dist, 10)));
    c.expect(top.size() == 10 && top_k_proportion(top, dist, 10) == 1.0, "top subset does not score 1.0");
    c.expect(dist.class_counts == std::vector<long>{50, 25, 15, 5, 4, 1}, "PR6 census differs");
    c.expect(i3(dist, I3Scheme::pr6) == 191.0, "PR6 score = " + num(i3(dist, I3Scheme::pr6)));
}

void criterion_5(Check& c) {
    const YearRange cite{2009, 2010}, target{2007, 2008};
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        auto papers = random_papers(rng);
        // Oracle straight from the records: resolved in-window refs / NRef per citer.
        std::map<std::string, int> years;
        for (const auto& p : papers) years[p.paper_id] = p.pub_year;
        double expected = 0.0;
        for (const auto& p : papers) {
            if (!cite.contains(p.pub_year) || p.n_refs == 0) continue;
            std::set<std::string> refs(p.refs.begin(), p.refs.end());
            long k = 0;
            for (const auto& r : refs) {
                auto it = years.find(r);
                if (it != years.end() && target.contains(it->second)) ++k;
            }
            expected += static_cast<double>(k) / static_cast<double>(p.n_refs);
        }
        auto t = fractional_tally(Corpus(papers), cite, target);
        c.expect(std::abs(t.distributed_total - expected) < 1e-9,
                 "trial " + std::to_string(trial) + ": " + num(t.distributed_total) + " vs " + num(expected));
    }
    // Every reference resolves into the target window: the total is the citer count.
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<PaperRecord> papers;
        const int targets = 10 + static_cast<int>(rng() % 50);
        for (int i = 0; i < targets; ++i)
            papers.push_back({"T" + std::to_string(i), "J", 2007 + i % 2, DocType::article, 0, {}});
        const int citers = 1 + static_cast<int>(rng() % 200);
        for (int i = 0; i < citers; ++i) {
            PaperRecord p{"C" + std::to_string(i), "K", 2009, DocType::article, 0, {}};
            std::set<int> picks;
            const int k = 1 + static_cast<int>(rng() % std::min(targets, 40));
            while (static_cast<int>(picks.size()) < k) picks.insert(static_cast<int>(rng() % targets));
            for (int t : picks) p.refs.push_back("T" + std::to_string(t));
            p.n_refs = k;
            papers.push_back(std::move(p));
        }
        auto t = fractional_tally(Corpus(papers), cite, target);
        c.expect(t.distributed_total == static_cast<double>(citers),
                 "trial " + std::to_string(trial) + ": " + num(t.distributed_total) + " != " + std::to_string(citers));
    }
}

void criterion_6(Check& c) {
    auto r = RelativeRates::from({4, 0}, {1, 4});
    c.expect(std::abs(rcr(r) - 0.8) < 1e-12, "rcr = " + num(rcr(r)));
    c.expect(std::abs(mean_ocr_ecr(r).mean - 2.0) < 1e-12, "M(OCR/ECR) = " + num(mean_ocr_ecr(r).mean));

    std::mt19937_64 rng(66);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 50;
        const double e = 0.25 + static_cast<double>(rng() % 400) / 8.0;
        std::vector<double> obs(n), exp(n, e);
        for (auto& o : obs) o = static_cast<double>(rng() % 100);
        auto rr = RelativeRates::from(obs, exp);
        const double a = rcr(rr), b = mean_ocr_ecr(rr).mean;
        c.expect(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)),
                 "constant expectation trial " + std::to_string(trial) + ": " + num(a) + " vs " + num(b));
    }
}

void criterion_7(Check& c) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        const long p = 1 + static_cast<long>(rng() % 500);
        CitationWindowCounts w{static_cast<double>(rng() % 5000), static_cast<double>(rng() % 5000), p, p};
        // Fractional counts too: arbitrary non-integer citation totals.
        if (trial % 2) {
            w.c1 /= 7.0;
            w.c2 /= 3.0;
        }
        c.expect(moving_average_if(w) == impact_factor(w),
                 "trial " + std::to_string(trial) + ": " + num(moving_average_if(w)) + " vs " + num(impact_factor(w)));
    }
    CitationWindowCounts d{30, 9, 4, 16};
    c.expect(impact_factor(d) == 1.95, "classic = " + num(impact_factor(d)));
    c.expect(moving_average_if(d) == 4.03125, "moving = " + num(moving_average_if(d)));
}

void criterion_8(Check& c) {
    DominanceScenario s;
    try {
        s = dominance_scenario();
    } catch (const std::exception& e) {
        c.expect(false, e.what());
        return;
    }
    c.expect(s.classes_a.size() == 6 && s.classes_b.size() == 6, "not six classes");
    for (std::size_t k = 0; k < s.classes_a.size(); ++k)
        c.expect(s.classes_a[k] > s.classes_b[k], "class " + std::to_string(k + 1) + " not dominated");
    c.expect(s.mean_a < s.mean_b, "mean ordering");
    c.expect(s.i3_a > s.i3_b && s.if_a < s.if_b, "IF and I3 orderings do not reverse");
}

void criterion_9(Check& c) {
    auto t = two_proportion_z(20, 100, 10, 100);
    c.expect(std::abs(t.statistic - 1.9803) <= 0.0005, "z = " + num(t.statistic));
    for (const auto& [z, p] : kTwoSidedP) {
        c.expect(std::abs(normal_two_sided_p(z) - p) < 1e-10, "p(" + num(z) + ") = " + num(normal_two_sided_p(z)));
        c.expect(std::abs(normal_two_sided_p(-z) - p) < 1e-10, "p(-" + num(z) + ")");
    }

    std::mt19937_64 rng(99);
    const std::vector<std::function<double(double)>> transforms = {
        [](double x) { return std::exp(x / 10.0); },
        [](double x) { return x * x * x; },
        [](double x) { return std::sqrt(x + 1.0); },
        [](double x) { return std::log1p(x); },
        [](double x) { return 3.0 * x - 7.0; },
    };
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 3 + rng() % 60;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng() % 40);
            y[i] = static_cast<double>(rng() % 40);
        }
        if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) x[0] += 1;
        if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) y[0] += 1;
        const auto& f = transforms[trial % transforms.size()];
        std::vector<double> fx(n);
        std::transform(x.begin(), x.end(), fx.begin(), f);
        const double a = spearman_rho(x, y), b = spearman_rho(fx, y);
        c.expect(std::abs(a - b) < 1e-12, "transform trial " + std::to_string(trial) + ": " + num(a) + " vs " + num(b));
    }
}

void criterion_10(Check& c) {
    const auto start = std::chrono::steady_clock::now();
    auto dir = fresh_dir("acceptance");
    {
        std::ofstream spec(dir / "spec.cfg");
        spec << "seed=2024\ndistribution=lognormal\nmu=0.5\nsigma=1.2\n";
        for (int j = 1; j <= 5; ++j) spec << "journal=J" << j << ":2000\n";
    }
    const std::string spec = (dir / "spec.cfg").string();
    for (const char* run : {"a", "b"}) {
        auto r = run_cli("synth --spec " + spec + " --out-dir " + (dir / run).string(), dir);
        c.expect(r.exit_code == 0, std::string("synth ") + run + ": " + r.err);
    }
    struct Run {
        std::string corpus;
        int threads;
    };
    std::vector<fs::path> outs;
    for (const Run& r : {Run{"a", 1}, Run{"b", 1}, Run{"a", 8}, Run{"b", 8}}) {
        auto out = dir / ("report_" + r.corpus + "_" + std::to_string(r.threads));
        auto res = run_cli("--config " + (dir / r.corpus / "compute.cfg").string() + " --threads " +
                               std::to_string(r.threads) + " compute --out-dir " + out.string(),
                           dir);
        c.expect(res.exit_code == 0, "compute failed: " + res.err);
        outs.push_back(out);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    c.expect(slurp(dir / "a" / "papers.csv") == slurp(dir / "b" / "papers.csv"), "synth corpora differ");
    const auto csv = slurp(outs[0] / "report.csv"), json = slurp(outs[0] / "report.json");
    c.expect(!csv.empty() && !json.empty(), "empty report");
    for (std::size_t i = 1; i < outs.size(); ++i) {
        c.expect(slurp(outs[i] / "report.csv") == csv, outs[i].filename().string() + "/report.csv differs");
        c.expect(slurp(outs[i] / "report.json") == json, outs[i].filename().string() + "/report.json differs");
    }
    c.expect(seconds < 10.0, "took " + num(seconds) + " s");
    fs::remove_all(dir);
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, void (*)(Check&)>> criteria = {
        {"1  mean-difference significance (z in [5.10, 5.22], p < 0.01)", criterion_1},
        {"2  mid-rank identities (mean quantile 50, I3 = 50N)", criterion_2},
        {"3  grouped I3 equals direct per-paper sum", criterion_3},
        {"4  top-k exactness and six-class census", criterion_4},
        {"5  fractional conservation", criterion_5},
        {"6  RCR vs M(OCR/ECR) order of operations", criterion_6},
        {"7  moving-average IF identity and divergence", criterion_7},
        {"8  dominance scenario", criterion_8},
        {"9  statistics accuracy", criterion_9},
        {"10 end-to-end determinism and runtime", criterion_10},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  %s  (%.0f ms)\n", c.ok ? "PASS" : "FAIL", name, ms);
        for (const auto& w : c.why) std::printf("      %s\n", w.c_str());
        if (!c.ok) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
