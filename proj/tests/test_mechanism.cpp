#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "c3/fuzz.hpp"
#include "c3/mechanism.hpp"
#include "c3/rng.hpp"

using namespace c3;

namespace {

double total(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// strictly descending scores in (0,1]; regenerates any accidental tie
std::vector<double> strict_descending(SplitMix64& rng, std::size_t n) {
  std::vector<double> s;
  while (true) {
    s.clear();
    for (std::size_t i = 0; i < n; ++i) s.push_back(rng.uniform());
    std::sort(s.begin(), s.end(), std::greater<>());
    bool ok = s.back() > 0.0;
    for (std::size_t i = 0; i + 1 < n && ok; ++i)
      if (s[i] == s[i + 1]) ok = false;
    if (ok) return s;
  }
}

}  // namespace

TEST_SUITE("mechanism") {

TEST_CASE("piecewise constant functions") {
  PiecewiseConstantFn f;
  f.breakpoints = {0.0, 0.5, 1.0};
  f.values = {2.0, 1.0};
  CHECK_NOTHROW(f.validate());

  CHECK(f.value_at(0.0) == 2.0);
  CHECK(f.value_at(0.5) == 1.0);   // right-continuous at the breakpoint
  CHECK(f.value_at(1.0) == 1.0);   // closed at the right endpoint
  CHECK(f.integral(0.0, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(f.integral(0.25, 0.75) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(f.integral(0.3, 0.3) == 0.0);  // zero-width spans are exactly zero
  CHECK(f.integral(0.5, 0.5) == 0.0);

  CHECK(PiecewiseConstantFn::constant(2.0).integral(0.0, 1.0) == 2.0);

  SUBCASE("validation") {
    PiecewiseConstantFn bad = f;
    bad.breakpoints = {0.0, 0.5, 0.9};  // does not span [0,1]
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = f;
    bad.values = {2.0, -1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = f;
    bad.breakpoints = {0.0, 0.5, 0.5, 1.0};
    bad.values = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(f.integral(0.7, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(f.value_at(1.5), std::invalid_argument);
  }
}

TEST_CASE("constant backward rule rewards") {
  auto spec = MechanismSpec::brcm({1.0, 1.0, 0.0});
  auto rew = rewards(spec, make_score_profile({0.8, 0.5, 0.3}));
  // rank 2 integrates f_3 = 0 over [0, 0.3]; rank 1 adds f_2 over [0.3, 0.5];
  // rank 0 adds f_1 over [0.5, 0.8]
  CHECK(rew[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rew[1] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(rew[2] == 0.0);

  SUBCASE("construction constraints") {
    CHECK_THROWS_AS(MechanismSpec::brcm({0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MechanismSpec::brcm({1.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(MechanismSpec::brcm({}), std::invalid_argument);
    // the unchecked constructor admits infeasible rules for checker tests
    CHECK_NOTHROW(MechanismSpec::brcm_unchecked({0.5, 1.0}));
  }

  SUBCASE("f length must match the profile") {
    CHECK_THROWS_AS(rewards(spec, make_score_profile({0.8, 0.5})),
                    std::invalid_argument);
  }
}

TEST_CASE("piecewise backward rule rewards") {
  PiecewiseConstantFn f1;
  f1.breakpoints = {0.0, 0.5, 1.0};
  f1.values = {2.0, 1.0};
  auto spec = MechanismSpec::brm({f1, PiecewiseConstantFn::constant(1.0)});

  auto rew = rewards(spec, make_score_profile({0.75, 0.25}));
  // rank 1: int_0^0.25 f_2 = 0.25
  // rank 0: 0.25 + int_0.25^0.5 2 + int_0.5^0.75 1 = 1.0
  CHECK(rew[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(rew[0] == doctest::Approx(1.0).epsilon(1e-14));

  SUBCASE("pointwise ordering is checked on the union grid") {
    PiecewiseConstantFn low;   // 1 on [0,0.5), 3 on [0.5,1]
    low.breakpoints = {0.0, 0.5, 1.0};
    low.values = {1.0, 3.0};
    // low exceeds f1 on [0.5,1] even though its integral is comparable
    CHECK_THROWS_AS(MechanismSpec::brm({f1, low}), std::invalid_argument);
    CHECK_NOTHROW(MechanismSpec::brm_unchecked({f1, low}));
  }

  SUBCASE("f_1 must be positive everywhere") {
    PiecewiseConstantFn zero_tail;
    zero_tail.breakpoints = {0.0, 0.5, 1.0};
    zero_tail.values = {1.0, 0.0};
    CHECK_THROWS_AS(MechanismSpec::brm({zero_tail}), std::invalid_argument);
  }
}

TEST_CASE("tied creators receive bitwise-equal backward rewards") {
  SplitMix64 rng(61);
  for (int it = 0; it < 50; ++it) {
    std::size_t n = 3 + rng.uniform_index(4);
    auto spec = fuzz::random_backward_spec(rng, n);
    auto s = fuzz::random_descending_scores(rng, n);
    // force at least one tie
    std::size_t p = rng.uniform_index(n - 1);
    s[p + 1] = s[p];
    auto rew = rewards(spec, make_score_profile(s));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (s[i] == s[j]) CHECK(rew[i] == rew[j]);
  }
}

TEST_CASE("shapley mediator") {
  auto spec = shapley_mediator(3);
  CHECK(spec.brcm_f == std::vector<double>{1.0, 0.5, 1.0 / 3.0});

  auto rew = rewards(spec, make_score_profile({0.9, 0.6, 0.2}));
  CHECK(rew[2] == doctest::Approx(0.2 / 3.0).epsilon(1e-14));
  CHECK(rew[1] == doctest::Approx(0.2 / 3.0 + 0.4 / 2.0).epsilon(1e-14));
  CHECK(rew[0] == doctest::Approx(0.2 / 3.0 + 0.4 / 2.0 + 0.3).epsilon(1e-14));

  SUBCASE("total payout equals the top score") {
    SplitMix64 rng(7);
    for (int it = 0; it < 200; ++it) {
      std::size_t n = 1 + rng.uniform_index(6);
      auto s = fuzz::random_descending_scores(rng, n);
      auto r = rewards(shapley_mediator(n), make_score_profile(s));
      CHECK(total(r) == doctest::Approx(s[0]).epsilon(1e-12));
    }
  }
}

TEST_CASE("exposure mechanism") {
  SUBCASE("softmax shares over the top K") {
    auto spec = MechanismSpec::m3_exposure(2, 0.05);
    auto rew = rewards(spec, make_score_profile({0.5, 0.0, 0.3}));
    double e2 = std::exp((0.3 - 0.5) / 0.05);
    double denom = 1.0 + e2;
    CHECK(rew[0] == doctest::Approx(1.0 / denom).epsilon(1e-12));
    CHECK(rew[2] == doctest::Approx(e2 / denom).epsilon(1e-12));
    CHECK(rew[1] == 0.0);  // outside the top K
  }

  SUBCASE("unit budget is exact when a singleton group leads") {
    SplitMix64 rng(11);
    for (int it = 0; it < 200; ++it) {
      std::size_t n = 2 + rng.uniform_index(7);
      std::size_t k = 1 + rng.uniform_index(n);
      auto s = strict_descending(rng, n);
      auto rew = rewards(MechanismSpec::m3_exposure(k, 0.05),
                         make_score_profile(s));
      CHECK(total(rew) == 1.0);
    }
  }

  SUBCASE("fully tied profiles split evenly, within a few ulp of the budget") {
    auto rew = rewards(MechanismSpec::m3_exposure(2, 0.05),
                       make_score_profile({0.4, 0.4, 0.4}));
    CHECK(rew[0] == rew[1]);
    CHECK(rew[1] == rew[2]);
    CHECK(total(rew) == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("tied zeros behind a clear leader") {
    auto rew = rewards(MechanismSpec::m3_exposure(2, 0.05),
                       make_score_profile({0.9, 0.0, 0.0}));
    CHECK(rew[1] == rew[2]);
    CHECK(total(rew) == 1.0);
    CHECK(rew[0] > rew[1]);
  }

  SUBCASE("top_k bounds") {
    CHECK_THROWS_AS(MechanismSpec::m3_exposure(0, 0.05),
                    std::invalid_argument);
    CHECK_THROWS_AS(rewards(MechanismSpec::m3_exposure(4, 0.05),
                            make_score_profile({0.5, 0.4})),
                    std::invalid_argument);
    CHECK_THROWS_AS(MechanismSpec::m3_exposure(2, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("engagement mechanism scales exposure by realized engagement") {
  double beta = 0.05;
  auto sp = make_score_profile({0.5, 0.0});
  auto exposure = rewards(MechanismSpec::m3_exposure(2, beta), sp);
  auto engagement = rewards(MechanismSpec::m3_engagement(2, beta), sp);
  double denom = 1.0 + std::exp((0.0 - 0.5) / beta);
  double pi = 0.5 + beta * std::log(denom);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(engagement[i] ==
          doctest::Approx(exposure[i] * pi).epsilon(1e-15));
  // the scale grows with the runner-up score
  auto closer = rewards(MechanismSpec::m3_engagement(2, beta),
                        make_score_profile({0.5, 0.45}));
  CHECK(total(closer) > total(engagement));
}

TEST_CASE("zero mechanism pays the score") {
  auto sp = make_score_profile({0.3, 0.9, 0.0});
  auto rew = rewards(MechanismSpec::m3_zero(), sp);
  CHECK(rew == sp.scores);
}

TEST_CASE("reward input validation") {
  CHECK_THROWS_AS(rewards(MechanismSpec::m3_zero(),
                          make_score_profile({1.5, 0.2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(rewards(MechanismSpec::m3_zero(),
                          make_score_profile({-0.1})),
                  std::invalid_argument);
}

TEST_CASE("merit audit passes backward rules and scopes correctly") {
  SUBCASE("shapley and random backward rules pass") {
    CHECK(check_merit_based(shapley_mediator(4), 200, 17).pass());
    SplitMix64 rng(23);
    for (int it = 0; it < 20; ++it) {
      auto spec = fuzz::random_backward_spec(rng, 2 + rng.uniform_index(4));
      auto rep = check_merit_based(spec, 100, 29 + it);
      CHECK(rep.pass());
    }
  }

  SUBCASE("winner-collapse rule is merit-based but not monotone") {
    auto wc = MechanismSpec::brcm({1.0, 0.0});
    CHECK(check_merit_based(wc, 200, 31).pass());

    auto mono = check_monotone(wc, 0, 37);  // canary probes alone suffice
    REQUIRE_FALSE(mono.pass);
    REQUIRE(mono.counterexample.has_value());
    // a rival matching the leader's perfect score destroys the whole payout
    CHECK(mono.counterexample->scores_before == std::vector<double>{1.0, 0.0});
    CHECK(mono.counterexample->scores_after == std::vector<double>{1.0, 1.0});
    CHECK(mono.counterexample->value_before == 1.0);
    CHECK(mono.counterexample->value_after == 0.0);
  }

  SUBCASE("softmax mechanisms are monotone but not normal") {
    CHECK(check_monotone(MechanismSpec::m3_zero(), 300, 41).pass);
    CHECK(check_monotone(MechanismSpec::m3_exposure(3, 0.05), 300, 43).pass);
    CHECK(check_monotone(MechanismSpec::m3_engagement(3, 0.05), 300, 47).pass);
    // a zero-score creator inside the top K still earns a softmax share
    auto rep = check_merit_based(MechanismSpec::m3_exposure(3, 0.05), 50, 53);
    CHECK_FALSE(rep.normality.pass);
  }

  SUBCASE("fairness violations are caught") {
    // a negative head value makes the leader earn less than the runner-up
    auto bad = MechanismSpec::brcm_unchecked({-1.0, 0.5});
    auto rep = check_merit_based(bad, 100, 59);
    CHECK_FALSE(rep.fairness.pass);
  }
}

}  // TEST_SUITE("mechanism")
