#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "doctest.h"
#include "fairalloc/localsearch.hpp"
#include "fairalloc/solver.hpp"
#include "test_support.hpp"

using namespace fairalloc;

namespace {

// Resources 0..k-1 of value 2, thin at tau = 27 (13 * 2 < 27); an alpha-edge
// needs 7 of them, a beta-edge 2.
constexpr Value kTau = 27;

std::vector<ResourceId> range(int from, int to) {
  std::vector<ResourceId> out;
  for (int r = from; r < to; ++r) out.push_back(r);
  return out;
}

ThinEdge thin(PlayerId p, std::vector<ResourceId> rs, const Instance& inst, Rational cls) {
  ThinEdge e;
  e.player = p;
  for (ResourceId r : rs) e.value += inst.value(r);
  e.resources = std::move(rs);
  e.delta_class = cls;
  return e;
}

// Root 0 wants the fat resource 0, which player 1 holds; player 1 also wants
// the thin resources 1..7.
struct StealFixture {
  Instance inst{{10, 2, 2, 2, 2, 2, 2, 2}, {{0}, range(0, 8)}};
  Params params = Params::defaults(Rational(kTau));
  PartialMatching m{2, 8};
  StealFixture() { m.assign_fat(1, 0); }
};

// Root 0 wants 0..6; players 1..3 each hold a pair from it and own seven
// private resources.
struct LayeredFixture {
  Instance inst;
  Params params = Params::defaults(Rational(kTau));
  PartialMatching m;
  explicit LayeredFixture(bool private_resources = true) {
    std::vector<std::vector<ResourceId>> interest{range(0, 7)};
    int next = 7;
    for (int p = 1; p <= 3; ++p) {
      auto rs = range(2 * (p - 1), 2 * p);
      if (private_resources) {
        for (int k = 0; k < 7; ++k) rs.push_back(next++);
      }
      std::sort(rs.begin(), rs.end());
      interest.push_back(rs);
    }
    inst = Instance(std::vector<Value>(next, 2), interest);
    m = PartialMatching(4, next);
    for (int p = 1; p <= 3; ++p) m.assign_thin(thin(p, range(2 * (p - 1), 2 * p), inst, params.beta));
  }
};

}  // namespace

TEST_CASE("init_state") {
  StealFixture f;
  auto s = init_state(f.inst, f.m, 0, f.params);
  CHECK(s.last() == 0);
  CHECK(s.layer_players() == std::vector<std::vector<PlayerId>>{{0}});
  CHECK(s.immediate.empty());
  CHECK(s.initial_fat_count == 1);
  auto report = check_invariants(s);
  CHECK(report.ok());
  CHECK(report.checks > 0);
  CHECK_THROWS_AS(init_state(f.inst, f.m, 1, f.params), std::invalid_argument);
}

TEST_CASE("find_candidate") {
  SUBCASE("the root itself through a zero-length path") {
    Instance inst(std::vector<Value>(7, 2), {range(0, 7)});
    auto s = init_state(inst, PartialMatching(1, 7), 0, Params::defaults(Rational(kTau)));
    auto c = find_candidate(s);
    REQUIRE(c);
    CHECK(c->player == 0);
    CHECK(c->resources.size() == 7);
  }
  SUBCASE("unreachable players are never candidates") {
    Instance inst(std::vector<Value>(7, 2), {{}, range(0, 7)});
    auto s = init_state(inst, PartialMatching(2, 7), 0, Params::defaults(Rational(kTau)));
    CHECK_FALSE(find_candidate(s));
  }
  SUBCASE("resources held by blockers are not available") {
    LayeredFixture f(false);
    auto s = init_state(f.inst, f.m, 0, f.params);
    build_phase(s);
    REQUIRE(s.last() == 1);
    CHECK(s.layers[1].blockers == std::vector<PlayerId>{1, 2, 3});
    CHECK_FALSE(find_candidate(s));
  }
}

TEST_CASE("build_phase") {
  SUBCASE("free candidate goes to I") {
    StealFixture f;
    auto s = init_state(f.inst, f.m, 0, f.params);
    build_phase(s);
    CHECK(s.last() == 1);
    CHECK(s.layers[1].addable.empty());
    CHECK(s.layers[1].d == 1);
    REQUIRE(s.immediate.size() == 1);
    CHECK(s.immediate[0].player == 1);
    CHECK(s.immediate[0].resources == range(1, 8));
  }
  SUBCASE("blocked candidate opens a layer") {
    LayeredFixture f;
    auto s = init_state(f.inst, f.m, 0, f.params);
    build_phase(s);
    REQUIRE(s.layers[1].addable.size() == 1);
    CHECK(s.layers[1].addable[0].player == 0);
    CHECK(s.layers[1].d == 1);
    CHECK(s.immediate.empty());
    CHECK(check_invariants(s).ok());
  }
  SUBCASE("no candidates at all") {
    Instance inst({1}, {{}});
    auto s = init_state(inst, PartialMatching(1, 1), 0, Params::defaults(Rational(kTau)));
    build_phase(s);
    CHECK(s.last() == 1);
    CHECK(s.layers[1].addable.empty());
    CHECK(s.layers[1].blockers.empty());
    CHECK(s.layers[1].d == 0);
  }
}

TEST_CASE("alternate_along") {
  SUBCASE("one flip") {
    StealFixture f;
    auto g = build_graph(f.inst, f.m, classify_resources(f.inst, f.params));
    auto m = f.m;
    alternate_along(m, g, {0, 2, 1}, thin(1, range(1, 8), f.inst, f.params.alpha), f.params, f.inst);
    CHECK(m.fat_resource(0) == 0);
    REQUIRE(m.thin_matched(1));
    CHECK(m.thin_edge(1)->resources == std::vector<ResourceId>{1, 2});
    CHECK(m.thin_edge(1)->delta_class == f.params.beta);
    CHECK(m.fat_count() == 1);
    CHECK(m.size() == 2);
  }
  SUBCASE("zero-length path swaps the blocking edge") {
    Instance inst(std::vector<Value>(9, 2), {range(0, 9)});
    Params p = Params::defaults(Rational(kTau));
    PartialMatching m(1, 9);
    m.assign_thin(thin(0, {0, 1}, inst, p.beta));
    auto g = build_graph(inst, m, classify_resources(inst, p));
    alternate_along(m, g, {0}, thin(0, range(2, 9), inst, p.alpha), p, inst);
    CHECK(m.thin_edge(0)->resources == std::vector<ResourceId>{2, 3});
    CHECK(m.owner(0) == -1);
  }
  SUBCASE("a vanished free subset is an invariant violation") {
    StealFixture f;
    auto m = f.m;
    auto g = build_graph(f.inst, m, classify_resources(f.inst, f.params));
    m.assign_thin(thin(0, {1, 2, 3, 4, 5, 6}, f.inst, f.params.beta));
    CHECK_THROWS_AS(alternate_along(m, g, {1}, thin(1, {1, 2, 3, 4, 5, 6, 7}, f.inst, f.params.alpha), f.params,
                                    f.inst),
                    InvariantViolation);
  }
}

TEST_CASE("collapse_phase") {
  SUBCASE("nothing collapsible") {
    LayeredFixture f;
    auto s = init_state(f.inst, f.m, 0, f.params);
    build_phase(s);
    const auto before = s.matching;
    CHECK(collapse_phase(s) == 0);
    CHECK(s.matching == before);
    CHECK(s.last() == 1);
  }
  SUBCASE("layer 0 matches the root") {
    StealFixture f;
    auto s = init_state(f.inst, f.m, 0, f.params);
    build_phase(s);
    CHECK(collapse_phase(s) == 1);
    CHECK(s.matching.fat_resource(0) == 0);
    CHECK(s.matching.thin_matched(1));
    CHECK(s.matching.size() == 2);
  }
  SUBCASE("collapse of layer 1 frees the root's edge") {
    LayeredFixture f;
    auto s = init_state(f.inst, f.m, 0, f.params);
    build_phase(s);
    collapse_phase(s);
    build_phase(s);
    REQUIRE(s.immediate.size() == 3);
    CHECK(collapse_phase(s) == 2);
    CHECK(s.matching.matched(0));
    CHECK(s.matching.size() == 4);
    for (PlayerId p = 1; p <= 3; ++p) {
      REQUIRE(s.matching.thin_matched(p));
      CHECK(s.matching.thin_edge(p)->resources.front() >= 7);
    }
  }
}

TEST_CASE("extend_matching") {
  InvariantMonitor monitor;
  ExtendOptions opts;
  opts.check_invariants = true;
  opts.monitor = &monitor;
  SUBCASE("free fat resource") {
    // an unassigned fat resource the root wants means the fat matching is not maximum
    Instance inst({10}, {{0}});
    CHECK_THROWS_AS(extend_matching(inst, PartialMatching(1, 1), 0, Params::defaults(Rational(kTau)), opts),
                    std::invalid_argument);
  }
  SUBCASE("free thin value and no blockers") {
    Instance inst(std::vector<Value>(7, 2), {range(0, 7)});
    SearchStats stats;
    opts.stats = &stats;
    auto r = extend_matching(inst, PartialMatching(1, 7), 0, Params::defaults(Rational(kTau)), opts);
    REQUIRE(std::holds_alternative<PartialMatching>(r));
    const auto& m = std::get<PartialMatching>(r);
    CHECK(m.thin_edge(0)->resources == std::vector<ResourceId>{0, 1});
    CHECK(stats.iterations == 1);
    CHECK(stats.collapses == 1);
  }
  SUBCASE("two layers") {
    LayeredFixture f;
    auto r = extend_matching(f.inst, f.m, 0, f.params, opts);
    REQUIRE(std::holds_alternative<PartialMatching>(r));
    CHECK(std::get<PartialMatching>(r).size() == 4);
    CHECK(monitor.boundaries == 2);
    CHECK(monitor.signature_steps == 1);
  }
  SUBCASE("abort") {
    LayeredFixture f(false);
    std::vector<Phase> phases;
    opts.on_event = [&](const SearchState&, Phase p) { phases.push_back(p); };
    auto r = extend_matching(f.inst, f.m, 0, f.params, opts);
    REQUIRE(std::holds_alternative<Abort>(r));
    const auto& a = std::get<Abort>(r);
    CHECK(a.tau == Rational(kTau));
    CHECK(a.layer == 2);
    CHECK(a.d == 1);
    CHECK(a.tree_players == 4);
    CHECK(phases == std::vector<Phase>{Phase::build, Phase::collapse, Phase::build, Phase::abort});
  }
  CHECK(monitor.failures.empty());
}

TEST_CASE("extend_matching requires a maximum fat matching") {
  Instance inst({10, 10}, {{0}, {1}});
  CHECK_THROWS_AS(extend_matching(inst, PartialMatching(2, 2), 0, Params::defaults(Rational(kTau))),
                  std::invalid_argument);
  PartialMatching m(2, 2);
  m.assign_fat(1, 1);
  CHECK_FALSE(fat_matching_is_maximum(build_graph(inst, m, classify_resources(inst, Params::defaults(Rational(kTau)))), m));
}

TEST_CASE("signature coordinates") {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::pow;
  // largest k with (150/149)^k <= 150
  std::int64_t k = 0;
  while (pow(cpp_int(150), static_cast<unsigned>(k + 1)) <= 150 * pow(cpp_int(149), static_cast<unsigned>(k + 1))) ++k;
  CHECK(k == 749);
  CHECK(signature_coordinate(1, 0, Rational(1, 150), Rational(1, 150)) == k);
  // exact powers of two sit on the floor boundary
  CHECK(signature_coordinate(1, 0, Rational(1, 2), Rational(1, 2)) == 1);
  CHECK(signature_coordinate(4, 2, Rational(1, 2), Rational(1, 2)) == 5);
  CHECK(signature_coordinate(3, 1, Rational(1, 2), Rational(1, 4)) == 5);
  CHECK(signature_coordinate(1, 1, Rational(1, 2), Rational(1, 4)) == 4);
  CHECK(signature_coordinate(0, 3, Rational(1, 150), Rational(1, 150)) == kSignatureEmpty);

  StealFixture f;
  auto s = init_state(f.inst, f.m, 0, f.params);
  CHECK(signature(s) == std::vector<std::int64_t>{k, kSignatureSentinel});
}

TEST_CASE("negative control: a corrupted matching breaks the flow invariant") {
  StealFixture f;
  auto s = init_state(f.inst, f.m, 0, f.params);
  build_phase(s);
  // mid-step the new layer is still empty, so only growth may complain
  const auto clean = check_invariants(s);
  for (const auto& failure : clean.failures) CHECK(failure.name == "growth");
  s.matching.unassign(1);
  s.rebuild_graph();
  auto report = check_invariants(s);
  CHECK_FALSE(report.ok());
  bool flagged = false;
  for (const auto& failure : report.failures) flagged = flagged || failure.name == "flow_equals_immediate";
  CHECK(flagged);
  CHECK(report.summary().find("flow_equals_immediate") != std::string::npos);
}

TEST_CASE("invariants hold across random runs") {
  InvariantMonitor monitor;
  ExtendOptions opts;
  opts.check_invariants = true;
  opts.fatal_invariants = false;
  opts.monitor = &monitor;
  SolveOptions solve_opts;
  solve_opts.extend = opts;
  std::mt19937_64 rng(3);
  for (int round = 0; round < 60; ++round) {
    const int n = 1 + static_cast<int>(rng() % 4);
    auto inst = generate_random(n, 16, 3, 0.6, rng());
    for (Value tau = 20; tau <= 60; tau += 4) {
      solve_for_tau(inst, tau, Params::defaults(Rational(tau)), solve_opts);
    }
  }
  CHECK(monitor.boundaries > 200);
  CHECK(monitor.failures.empty());
  for (const auto& failure : monitor.failures) MESSAGE(failure.name << " layer " << failure.layer << " " << failure.detail);
}
