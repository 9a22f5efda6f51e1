#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "circlestab/circle.hpp"
#include "circlestab/equivalence.hpp"
#include "circlestab/errors.hpp"
#include "circlestab/stability.hpp"
#include "testutil.hpp"

using namespace circlestab;

namespace {

CircleField sine_field() { return make_field({make_fourier_sin(1)}, "sine"); }
CircleField cosine_field() { return make_field({make_fourier_cos(1)}, "cosine"); }

}  // namespace

TEST_CASE("sine vs cosine: the witness is the quarter-turn rotation") {
  const auto h = build_homeomorphism(sine_field(), cosine_field());
  CHECK(h.orientation == Orientation::Preserving);
  REQUIRE(h.xs.size() == 2);
  // Zeros {0, 1/2} pair with {3/4, 1/4 + 1}: the map is x -> x - 1/4.
  for (int i = 0; i < 101; ++i) {
    const double x = i / 101.0;
    CHECK(cyclic_distance(h.eval(x), wrap_unit(x - 0.25)) < 1e-9);
  }
  CHECK(te_check(sine_field(), cosine_field(), h, 4096));
  CHECK(te_check(sine_field(), cosine_field(), h, 16384));

  const auto [same, witness] = are_equivalent(sine_field(), cosine_field());
  CHECK(same);
  REQUIRE(witness.has_value());
  CHECK(witness->xs == h.xs);
  CHECK(witness->ys == h.ys);
}

TEST_CASE("a field is carried onto itself by the identity") {
  const auto h = build_homeomorphism(sine_field(), sine_field());
  CHECK(h.orientation == Orientation::Preserving);
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    CHECK(cyclic_distance(h.eval(x), x) < 1e-12);
  }
  CHECK(te_check(sine_field(), sine_field(), h, 4096));
}

TEST_CASE("zero-free fields of one sign: identity witness") {
  const auto f = make_field({make_constant(2.0)}, "two");
  const auto g = make_field({make_constant(1.0), make_fourier_sin(1, 0.5)}, "wavy");
  const auto h = build_homeomorphism(f, g);
  CHECK(h.orientation == Orientation::Preserving);
  CHECK(h.eval(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(te_check(f, g, h, 4096));
  const auto [same, witness] = are_equivalent(f, g);
  CHECK(same);
  CHECK(witness.has_value());
}

TEST_CASE("zero-free fields of opposite sign: reflection witness") {
  const auto f = make_field({make_constant(1.0)}, "plus");
  const auto g = make_field({make_constant(-1.0)}, "minus");
  const auto h = build_homeomorphism(f, g);
  CHECK(h.orientation == Orientation::Reversing);
  CHECK(h.eval(0.0) == doctest::Approx(0.0));
  CHECK(h.eval(0.3) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(te_check(f, g, h, 4096));

  // The reflection is its own inverse.
  const auto hi = h.inverse();
  CHECK(hi.orientation == Orientation::Reversing);
  CHECK(hi.eval(0.3) == doctest::Approx(0.7).epsilon(1e-12));

  // Composing it with itself restores orientation and the identity.
  const auto hh = compose(h, h);
  CHECK(hh.orientation == Orientation::Preserving);
  CHECK(cyclic_distance(hh.eval(0.3), 0.3) < 1e-12);
}

TEST_CASE("sign transfer fails for the identity between a field and its negation") {
  const auto f = sine_field();
  const auto g = make_field({make_fourier_sin(1, -1.0)}, "negated");
  PLHomeomorphism identity;
  identity.xs = {0.0};
  identity.ys = {0.0};
  CHECK_FALSE(te_check(f, g, identity, 4096));

  // They are still equivalent: the half-turn rotation swaps the zero roles.
  const auto [same, witness] = are_equivalent(f, g);
  CHECK(same);
  REQUIRE(witness.has_value());
  CHECK(cyclic_distance(witness->eval(0.0), 0.5) < 1e-9);
  CHECK(te_check(f, g, *witness, 4096));
}

TEST_CASE("class mismatch: different zero counts are not equivalent") {
  const auto f = sine_field();
  const auto g = make_field({make_fourier_sin(2)}, "double");
  const auto [same, witness] = are_equivalent(f, g);
  CHECK_FALSE(same);
  CHECK_FALSE(witness.has_value());
  CHECK_THROWS_AS(build_homeomorphism(f, g), not_equivalent_error);
}

TEST_CASE("non-stable input refuses a decision") {
  const auto degenerate = make_field({make_constant(0.5), make_fourier_cos(2, -0.5)}, "touch");
  CHECK_THROWS_AS(are_equivalent(sine_field(), degenerate), undecided_error);
  CHECK_THROWS_AS(build_homeomorphism(degenerate, sine_field()), undecided_error);
  CHECK_THROWS_AS(equivalence_class(degenerate), precondition_error);
}

TEST_CASE("equivalence classes: nonvanishing and hyperbolic pair counts") {
  const auto c = equivalence_class(make_field({make_constant(-2.0)}, "down"));
  CHECK(c.kind == EquivalenceClass::Kind::Nonvanishing);
  CHECK(c.pair_count == 0);
  CHECK(c.fixed_point_count == 0);
  CHECK(equivalence_class_name(c) == "nonvanishing");

  const auto h1 = equivalence_class(sine_field());
  CHECK(h1.kind == EquivalenceClass::Kind::Hyperbolic);
  CHECK(h1.pair_count == 1);
  CHECK(h1.fixed_point_count == 2);

  const auto h2 = equivalence_class(make_field({make_fourier_sin(2)}, "double"));
  CHECK(h2.pair_count == 2);
  CHECK(h2.fixed_point_count == 4);
  CHECK(equivalence_class_name(h2) == "hyperbolic m=2");

  CHECK(h1 == equivalence_class(cosine_field()));
  CHECK_FALSE(h1 == h2);
  CHECK_FALSE(h1 == c);
}

TEST_CASE("degenerate homeomorphisms are rejected") {
  PLHomeomorphism empty;
  CHECK_THROWS_AS(empty.validate(), precondition_error);

  PLHomeomorphism bad_x;
  bad_x.xs = {0.5, 0.25};
  bad_x.ys = {0.1, 0.2};
  CHECK_THROWS_AS(bad_x.validate(), precondition_error);

  PLHomeomorphism bad_y;
  bad_y.xs = {0.0, 0.5};
  bad_y.ys = {0.3, 0.2};
  CHECK_THROWS_AS(te_check(sine_field(), sine_field(), bad_y, 64), precondition_error);

  PLHomeomorphism full_turn;
  full_turn.xs = {0.0, 0.5};
  full_turn.ys = {0.0, 1.0};
  CHECK_THROWS_AS(full_turn.validate(), precondition_error);

  PLHomeomorphism ok;
  ok.xs = {0.0, 0.5};
  ok.ys = {0.25, 0.75};
  CHECK_THROWS_AS(te_check(sine_field(), sine_field(), ok, 1), precondition_error);
}

TEST_CASE("inverse undoes the witness on both sides") {
  const auto h = build_homeomorphism(sine_field(), cosine_field());
  const auto hi = h.inverse();
  CHECK(te_check(cosine_field(), sine_field(), hi, 4096));
  for (int i = 0; i < 97; ++i) {
    const double x = i / 97.0;
    CHECK(cyclic_distance(h.eval(hi.eval(x)), x) < 1e-12);
    CHECK(cyclic_distance(hi.eval(h.eval(x)), x) < 1e-12);
  }
}

TEST_CASE("composition chains witnesses across three fields") {
  const auto f1 = sine_field();
  const auto f2 = cosine_field();
  const auto f3 = make_field({make_fourier_sin(1, 2.0)}, "loud");
  const auto h12 = build_homeomorphism(f1, f2);
  const auto h23 = build_homeomorphism(f2, f3);
  const auto h13 = compose(h23, h12);
  CHECK(h13.orientation == Orientation::Preserving);
  CHECK(te_check(f1, f3, h13, 4096));
  for (int i = 0; i < 53; ++i) {
    const double x = i / 53.0;
    CHECK(cyclic_distance(h13.eval(x), h23.eval(h12.eval(x))) < 1e-12);
  }
}

TEST_CASE("witness nodes stay within the hyperbolicity window under a small shift") {
  const auto f = sine_field();
  const auto margin = stability_margin(f);
  const auto g = make_field({make_fourier_sin(1), make_constant(0.1)}, "shifted");
  REQUIRE(0.1 < margin.robustness_radius);
  const auto h = build_homeomorphism(f, g);
  REQUIRE(h.xs.size() == 2);
  REQUIRE(margin.delta.has_value());
  for (std::size_t k = 0; k < h.xs.size(); ++k)
    CHECK(cyclic_distance(h.xs[k], wrap_unit(h.ys[k])) <= *margin.delta);
}

TEST_CASE("building the same witness twice is deterministic") {
  const auto a = build_homeomorphism(sine_field(), cosine_field());
  const auto b = build_homeomorphism(sine_field(), cosine_field());
  CHECK(a.xs == b.xs);
  CHECK(a.ys == b.ys);
  CHECK(a.orientation == b.orientation);
}

TEST_CASE("equivalence is reflexive, symmetric, and transitive on random stable fields") {
  testutil::Rng rng(2024);
  std::vector<CircleField> pool;
  int attempts = 0;
  while (pool.size() < 12 && attempts < 200) {
    ++attempts;
    auto field = testutil::random_fourier_field(rng, 3, 1.0);
    try {
      if (stability_verdict(field).verdict == StabilityVerdict::StructurallyStable)
        pool.push_back(field);
    } catch (const error&) {
      // resolution failures just skip the candidate
    }
  }
  REQUIRE(pool.size() == 12);

  std::map<int, std::vector<int>> by_count;
  for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
    const auto cls = equivalence_class(pool[i]);
    by_count[cls.fixed_point_count].push_back(i);

    const auto [same, witness] = are_equivalent(pool[i], pool[i]);
    CHECK(same);
    REQUIRE(witness.has_value());
  }

  for (const auto& [count, members] : by_count) {
    for (std::size_t j = 0; j + 1 < members.size(); ++j) {
      const auto& a = pool[members[j]];
      const auto& b = pool[members[j + 1]];
      const auto [same_ab, h_ab] = are_equivalent(a, b);
      CHECK(same_ab);
      REQUIRE(h_ab.has_value());
      CHECK(te_check(a, b, *h_ab, 4096));

      // symmetry: the reverse decision agrees and the inverse transfers back
      const auto [same_ba, h_ba] = are_equivalent(b, a);
      CHECK(same_ba);
      REQUIRE(h_ba.has_value());
      CHECK(te_check(b, a, h_ab->inverse(), 4096));

      // transitivity: chain to the next member when one exists
      if (j + 2 < members.size()) {
        const auto& c = pool[members[j + 2]];
        const auto [same_bc, h_bc] = are_equivalent(b, c);
        CHECK(same_bc);
        REQUIRE(h_bc.has_value());
        CHECK(te_check(a, c, compose(*h_bc, *h_ab), 4096));
      }
    }
  }
}
