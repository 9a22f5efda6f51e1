#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>

#include "circlestab/errors.hpp"
#include "circlestab/field_io.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace circlestab;

TEST_CASE("atom lines parse with defaults") {
  const Atom sin1 = parse_atom_line("fourier_sin k=1 amp=1.0");
  CHECK(sin1.kind == AtomKind::FourierSin);
  CHECK(sin1.k == 1);
  CHECK(sin1.amplitude == 1.0);

  const Atom bump = parse_atom_line("bump_psi a=0.4 b=0.6 amp=-0.2");
  CHECK(bump.kind == AtomKind::BumpPsi);
  CHECK(bump.a == 0.4);
  CHECK(bump.b == 0.6);
  CHECK(bump.amplitude == -0.2);

  const Atom defaulted = parse_atom_line("odd_theta center=0.5 delta=0.2");
  CHECK(defaulted.amplitude == 1.0);

  const Atom c = parse_atom_line("constant amp=0.75");
  CHECK(c.value(0.3) == 0.75);
}

TEST_CASE("field text parses with comments and blanks") {
  const std::string text =
      "# demo field\n"
      "\n"
      "constant amp=0.5\n"
      "fourier_cos k=2 amp=-0.5   # second harmonic\n";
  const CircleField field = parse_field_text(text, "demo");
  REQUIRE(field.atoms.size() == 2);
  CHECK(field.label == "demo");
  CHECK(field.eval(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(field.eval(0.25) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_field_text("constant amp=0.5\nwavelet a=1\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 1);
  }
  try {
    parse_atom_line("bump_psi a=0.4 q=0.6", 7);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 7);
    CHECK(e.column == 16);
  }
  CHECK_THROWS_AS(parse_atom_line("bump_psi a=0.4"), parse_error);          // missing b
  CHECK_THROWS_AS(parse_atom_line("bump_psi a=0.6 b=0.4"), parse_error);    // a >= b
  CHECK_THROWS_AS(parse_atom_line("fourier_sin amp=1"), parse_error);       // missing k
  CHECK_THROWS_AS(parse_atom_line("fourier_sin k=one"), parse_error);       // bad int
  CHECK_THROWS_AS(parse_atom_line("constant amp=abc"), parse_error);        // bad number
  CHECK_THROWS_AS(parse_atom_line("constant amp=1 amp=2"), parse_error);    // duplicate
  CHECK_THROWS_AS(parse_atom_line("constant k=2"), parse_error);            // wrong param
  CHECK_THROWS_AS(parse_atom_line("odd_theta center=.5 b=1"), parse_error); // wrong param
}

TEST_CASE("serialization round-trips at 12 significant digits") {
  testutil::Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Atom> atoms;
    atoms.push_back(make_constant(testutil::uniform(rng, -2.0, 2.0)));
    atoms.push_back(make_fourier_sin(testutil::uniform_int(rng, 1, 9),
                                     testutil::uniform(rng, -2.0, 2.0)));
    const double a = testutil::uniform(rng, 0.0, 0.5);
    atoms.push_back(make_bump_psi(a, a + testutil::uniform(rng, 0.05, 0.4),
                                  testutil::uniform(rng, -1.0, 1.0)));
    atoms.push_back(make_plateau_phi(0.4, 0.6, testutil::uniform(rng, 0.01, 0.1)));
    atoms.push_back(make_odd_theta_hat(0.2, 0.5, 0.05, testutil::uniform(rng, -1.0, 1.0)));
    atoms.push_back(make_accum_osc(testutil::uniform(rng, 0.2, 0.8),
                                   testutil::uniform(rng, 0.05, 0.2)));
    const CircleField field = make_field(std::move(atoms), "roundtrip");

    const std::string once = serialize_field(field);
    const CircleField reparsed = parse_field_text(once, "roundtrip");
    const std::string twice = serialize_field(reparsed);
    CHECK(once == twice);
    REQUIRE(reparsed.atoms.size() == field.atoms.size());
    // 12 significant digits keep every parameter to ~1e-12 relative error
    for (size_t i = 0; i < field.atoms.size(); ++i) {
      CHECK(std::abs(reparsed.atoms[i].amplitude - field.atoms[i].amplitude) <=
            1e-11 * std::max(1.0, std::abs(field.atoms[i].amplitude)));
      CHECK(reparsed.atoms[i].kind == field.atoms[i].kind);
    }
  }
}

TEST_CASE("field files load from disk with the stem as label") {
  const std::string path = "io_demo_field.txt";
  {
    std::ofstream out(path);
    out << "# written by the test\nfourier_sin k=1 amp=1\n";
  }
  const CircleField field = load_field_file(path);
  CHECK(field.label == "io_demo_field");
  REQUIRE(field.atoms.size() == 1);
  CHECK(field.atoms[0].kind == AtomKind::FourierSin);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_field_file("definitely_missing_file.txt"), error);
}
