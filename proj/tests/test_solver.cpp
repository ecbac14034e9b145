#include <cmath>
#include <random>

#include "doctest.h"
#include "fairalloc/oracle.hpp"
#include "fairalloc/solver.hpp"
#include "test_support.hpp"

using namespace fairalloc;
using fairalloc::testing::corpus_instance;

namespace {

// Exhaustive maximum bipartite matching over fat interest arcs.
int exhaustive_matching(const Instance& inst, const ResourceClasses& classes, PlayerId p, std::vector<bool>& used) {
  if (p == inst.num_players()) return 0;
  int best = exhaustive_matching(inst, classes, p + 1, used);
  for (ResourceId r : inst.interest(p)) {
    if (!classes.is_fat[r] || used[r]) continue;
    used[r] = true;
    best = std::max(best, 1 + exhaustive_matching(inst, classes, p + 1, used));
    used[r] = false;
  }
  return best;
}

int ceil_log2(Value x) {
  int k = 0;
  while ((Value{1} << k) < x) ++k;
  return k;
}

}  // namespace

TEST_CASE("max_fat_matching examples") {
  Params p = Params::defaults(Rational(13));
  auto one = max_fat_matching(Instance({5}, {{0}}), p);
  CHECK(one.fat_resource(0) == 0);
  auto shared = max_fat_matching(Instance({5}, {{0}, {0}}), p);
  CHECK(shared.fat_count() == 1);
  CHECK(shared.size() == 1);
}

TEST_CASE("max_fat_matching is maximum") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 300; ++round) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int m = 1 + static_cast<int>(rng() % 8);
    auto inst = generate_random(n, m, 20, 0.35, rng());
    Params p = Params::defaults(Rational(1 + static_cast<Value>(rng() % 200)));
    auto classes = classify_resources(inst, p);
    auto matching = max_fat_matching(inst, p);
    std::vector<bool> used(m, false);
    CHECK(matching.fat_count() == exhaustive_matching(inst, classes, 0, used));
    CHECK(fat_matching_is_maximum(build_graph(inst, matching, classes), matching));
  }
}

TEST_CASE("solve_for_tau examples") {
  Instance two({5, 5, 5}, {{0, 1, 2}, {0, 1, 2}});
  SUBCASE("tau zero") {
    auto r = solve_for_tau(two, 0, Params::defaults());
    REQUIRE(r.success());
    const auto& a = std::get<Allocation>(r.outcome);
    CHECK(a.bundles.size() == 2);
    CHECK(verify_allocation(two, a, Rational(0)));
  }
  SUBCASE("private fat resources") {
    Instance priv({6, 6, 6}, {{0}, {1}, {2}});
    auto r = solve_for_tau(priv, 6, Params::defaults());
    REQUIRE(r.success());
    CHECK(std::get<Allocation>(r.outcome) == Allocation{{{0}, {1}, {2}}});
  }
  SUBCASE("free fat resource for an unmatched root") {
    Instance inst({10}, {{0}});
    auto r = solve_for_tau(inst, 27, Params::defaults());
    REQUIRE(r.success());
    CHECK(std::get<Allocation>(r.outcome) == Allocation{{{0}}});
  }
  SUBCASE("tau at the optimum") {
    auto r = solve_for_tau(two, 5, Params::defaults());
    REQUIRE(r.success());
    CHECK(verify_allocation(two, std::get<Allocation>(r.outcome), Rational(5, 13)));
  }
}

TEST_CASE("probes at the optimum never abort") {
  for (int index = 0; index < 100; ++index) {
    auto inst = corpus_instance(index);
    const Value opt = oracle::brute_force_opt(inst);
    auto r = solve_for_tau(inst, opt, Params::defaults());
    REQUIRE(r.success());
    CHECK(verify_allocation(inst, std::get<Allocation>(r.outcome), Rational(opt, 13)));
  }
}

TEST_CASE("solve examples") {
  SUBCASE("single resource") {
    Instance inst({7}, {{0}});
    auto rep = solve(inst, Params::defaults());
    CHECK(rep.tau_star == 7);
    CHECK(rep.guaranteed == Rational(7, 13));
    CHECK(allocation_min_value(inst, rep.allocation) == 7);
  }
  SUBCASE("two players, three fives") {
    Instance inst({5, 5, 5}, {{0, 1, 2}, {0, 1, 2}});
    auto rep = solve(inst, Params::defaults());
    CHECK(rep.tau_star >= 5);
    CHECK(allocation_min_value(inst, rep.allocation) >= 1);
    CHECK(verify_allocation(inst, rep.allocation, rep.guaranteed));
  }
  SUBCASE("a hint narrows the bracket") {
    Instance inst({7}, {{0}});
    auto rep = solve(inst, Params::defaults(), Value{7});
    CHECK(rep.tau_star == 7);
    CHECK(rep.probes.front().tau == 7);
  }
}

TEST_CASE("solve campaign") {
  for (int index = 0; index < 60; ++index) {
    auto inst = corpus_instance(index);
    const Value opt = oracle::brute_force_opt(inst);
    auto rep = solve(inst, Params::defaults());
    CHECK(rep.tau_star >= opt);
    CHECK(at_least(allocation_min_value(inst, rep.allocation), Rational(opt, 13)));
    CHECK(verify_allocation(inst, rep.allocation, rep.guaranteed));
    CHECK(static_cast<int>(rep.probes.size()) <= ceil_log2(inst.total_value() + 2));

    SolveOptions par;
    par.jobs = 3;
    auto rep3 = solve(inst, Params::defaults(), std::nullopt, par);
    CHECK(rep3.tau_star >= opt);
    CHECK(verify_allocation(inst, rep3.allocation, rep3.guaranteed));
  }
}

TEST_CASE("an infeasible target aborts") {
  // both players need resource 0; whoever misses it is left with at most 1
  Instance inst({20, 1}, {{0, 1}, {0}});
  CHECK(oracle::brute_force_opt(inst) == 1);
  CHECK_FALSE(solve_for_tau(inst, 16, Params::defaults()).success());
  auto rep = solve(inst, Params::defaults());
  bool aborted = false;
  for (const auto& p : rep.probes) aborted = aborted || !p.success;
  CHECK(aborted);
  CHECK(rep.tau_star >= 1);
  CHECK(rep.tau_star <= 13);
  CHECK(verify_allocation(inst, rep.allocation, rep.guaranteed));
}

TEST_CASE("trace lines") {
  std::vector<ResourceId> all(30);
  for (int r = 0; r < 30; ++r) all[r] = r;
  Instance inst(std::vector<Value>(30, 1), {all});
  auto collect = [&](int jobs) {
    std::vector<std::string> lines;
    SolveOptions opts;
    opts.jobs = jobs;
    opts.trace = [&](const TraceEvent& e) { lines.push_back(to_json_line(e)); };
    solve(inst, Params::defaults(), std::nullopt, opts);
    return lines;
  };
  auto first = collect(1);
  REQUIRE_FALSE(first.empty());
  CHECK(first == collect(1));
  const auto& line = first.front();
  const char* keys[] = {"\"probe_tau\"", "\"iter\"",    "\"root\"", "\"phase\"", "\"ell\"",      "\"matched\"",
                        "\"P\"",         "\"A\"",       "\"I\"",    "\"d\"",     "\"signature\""};
  std::size_t pos = 0;
  for (const char* key : keys) {
    const auto at = line.find(key);
    REQUIRE(at != std::string::npos);
    CHECK(at >= pos);
    pos = at;
  }
  CHECK(line.find("\"inf\"") != std::string::npos);

  TraceEvent e;
  e.probe_tau = 3;
  e.signature = {kSignatureEmpty, 2, kSignatureSentinel};
  CHECK(to_json_line(e) ==
        R"({"probe_tau":3,"iter":0,"root":-1,"phase":"build","ell":0,"matched":0,"P":[],"A":[],"I":[],"d":[],"signature":["-inf",2,"inf"]})");
}
