#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <json.hpp>

#include "cli_helpers.hpp"

using namespace citeval::testing;
namespace fs = std::filesystem;

namespace {

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

const char* kSpec =
    "seed=7\ndistribution=lognormal\nmu=0\nsigma=1.2\n"
    "journal=J1:300\njournal=J2:200:distribution=pareto:alpha=2.2:citer_nref=40\n";

nlohmann::json row(const nlohmann::json& report, const std::string& unit) {
    for (const auto& u : report["units"])
        if (u["unit"] == unit) return u;
    return {};
}

}  // namespace

TEST_CASE("missing input exits 2") {
    auto dir = fresh_dir("missing");
    auto r = run_cli("compute --papers " + (dir / "nope.csv").string() + " --set year=2009 --out-dir " +
                         (dir / "out").string(),
                     dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("no such input") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out" / "report.csv"));

    auto cfg = run_cli("--config " + (dir / "none.cfg").string() + " compute", dir);
    CHECK(cfg.exit_code == 2);
}

TEST_CASE("usage errors exit 2") {
    auto dir = fresh_dir("usage");
    CHECK(run_cli("", dir).exit_code == 2);
    CHECK(run_cli("frobnicate", dir).exit_code == 2);
    CHECK(run_cli("rank --by bogus", dir).exit_code == 2);
}

TEST_CASE("help documents the report columns") {
    auto dir = fresh_dir("help");
    auto r = run_cli("compute --help", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("unit,n_pubs,total_cit,total_cit_frac,if,if_moving,quasi_if,i3_q,i3_pr6,pct_i3,"
                     "pct_pr6,top10,top25,z_expect,sig01,sig05,rank_if,rank_i3") != std::string::npos);
}

TEST_CASE("synth is deterministic and its output re-ingests") {
    auto dir = fresh_dir("synth");
    write(dir / "spec.cfg", kSpec);
    REQUIRE(run_cli("synth --spec " + (dir / "spec.cfg").string() + " --out-dir " + (dir / "a").string(), dir).exit_code == 0);
    REQUIRE(run_cli("synth --spec " + (dir / "spec.cfg").string() + " --out-dir " + (dir / "b").string(), dir).exit_code == 0);
    for (const char* f : {"papers.csv", "journals.csv", "manifest.json", "compute.cfg"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["seed"] == 7);

    auto check = run_cli("ingest-check --papers " + (dir / "a" / "papers.csv").string() + " --journals " +
                             (dir / "a" / "journals.csv").string(),
                         dir);
    CHECK(check.exit_code == 0);
    CHECK(check.out.find("papers: ") != std::string::npos);
    CHECK(check.out.find("unresolved_refs: 0") != std::string::npos);

    REQUIRE(run_cli("synth --spec " + (dir / "spec.cfg").string() + " --corpus-format jsonl --out-dir " +
                        (dir / "j").string(), dir).exit_code == 0);
    CHECK(run_cli("--config " + (dir / "j" / "compute.cfg").string() + " ingest-check", dir).exit_code == 0);
    auto csv_report = run_cli("--config " + (dir / "a" / "compute.cfg").string() + " compute --out-dir " + (dir / "ra").string(), dir);
    auto jsonl_report = run_cli("--config " + (dir / "j" / "compute.cfg").string() + " compute --out-dir " + (dir / "rj").string(), dir);
    CHECK(csv_report.exit_code == 0);
    CHECK(slurp(dir / "ra" / "report.csv") == slurp(dir / "rj" / "report.csv"));
}

TEST_CASE("invalid synth spec exits 2") {
    auto dir = fresh_dir("badspec");
    write(dir / "spec.cfg", "sigma=0\n");
    auto r = run_cli("synth --spec " + (dir / "spec.cfg").string() + " --out-dir " + (dir / "o").string(), dir);
    CHECK(r.exit_code == 2);
    CHECK_FALSE(fs::exists(dir / "o" / "papers.csv"));
}

TEST_CASE("dominance corpus: IF and I3 ranks reverse, A above expectation") {
    auto dir = fresh_dir("dominance");
    REQUIRE(run_cli("synth --dominance --out-dir " + (dir / "c").string(), dir).exit_code == 0);
    const std::string cfg = "--config " + (dir / "c" / "compute.cfg").string();
    auto r = run_cli(cfg + " compute --out-dir " + (dir / "r").string(), dir);
    REQUIRE(r.exit_code == 0);
    auto report = nlohmann::json::parse(slurp(dir / "r" / "report.json"));
    auto a = row(report, "JA"), b = row(report, "JB");
    CHECK(a["rank_if"].get<int>() > b["rank_if"].get<int>());
    CHECK(a["rank_i3"].get<int>() < b["rank_i3"].get<int>());

    auto cmp = run_cli(cfg + " --format json compare JA JB", dir);
    REQUIRE(cmp.exit_code == 0);
    auto j = nlohmann::json::parse(cmp.out);
    bool seen = false;
    for (const auto& x : j["rows"]) {
        if (x["indicator"] == "pct_i3 vs expectation (JA)") {
            seen = true;
            CHECK(x["test"]["z"].get<double>() > 0.0);
        }
        if (x["indicator"] == "rcr") CHECK(x["note"] == "not testable: dependent distributions");
    }
    CHECK(seen);

    auto rank = run_cli(cfg + " rank --by if", dir);
    CHECK(rank.exit_code == 0);
    CHECK(rank.out.starts_with("rank,unit,if\n1,JB,"));
}

TEST_CASE("compare surfaces the whole-set expectation error as a note") {
    auto dir = fresh_dir("wholeset");
    REQUIRE(run_cli("synth --dominance --out-dir " + (dir / "c").string(), dir).exit_code == 0);
    auto r = run_cli("--config " + (dir / "c" / "compute.cfg").string() +
                         " --set reference=journals:JA --set unit.same=" + "JA-000001" + " compare JA same",
                     dir);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("pct_i3 vs expectation (JA),100.000,100.000,n/a,n/a,n/a,n/a,unit equals the whole set") !=
          std::string::npos);
}

TEST_CASE("compute failures leave no output and exit 1") {
    auto dir = fresh_dir("fail");
    REQUIRE(run_cli("synth --dominance --out-dir " + (dir / "c").string(), dir).exit_code == 0);
    auto r = run_cli("--config " + (dir / "c" / "compute.cfg").string() +
                         " --set reference=category:NONE compute --out-dir " + (dir / "r").string(),
                     dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("empty reference set") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "r" / "report.csv"));
    CHECK_FALSE(fs::exists(dir / "r" / "report.json"));
}

TEST_CASE("units in different reference sets are rejected") {
    auto dir = fresh_dir("crossref");
    REQUIRE(run_cli("synth --dominance --out-dir " + (dir / "c").string(), dir).exit_code == 0);
    auto r = run_cli("--config " + (dir / "c" / "compute.cfg").string() +
                         " --set reference=journals:JA --set unit.other=JB-000001 compare JA other",
                     dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("outside the reference set") != std::string::npos);
}
