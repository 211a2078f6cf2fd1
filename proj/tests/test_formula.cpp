#include <doctest.h>

#include "gen.hpp"

using namespace deflat;

TEST_CASE("parse atoms and quantifiers") {
  Formula f = parse("x < y", Signature::QOrder);
  CHECK(f.op() == Op::Less);
  CHECK(f.lhs() == "x");
  CHECK(f.rhs() == "y");

  Formula g = parse("E z. (x = z + 1 & z = y + 1)", Signature::ZSucc);
  REQUIRE(g.op() == Op::Exists);
  CHECK(g.var() == "z");
  REQUIRE(g.body().op() == Op::And);
  CHECK(g.body().left().offset() == 1);
  CHECK(g.body().right().lhs() == "z");

  CHECK(parse("x = y + -5", Signature::ZSucc).offset() == -5);
  CHECK(parse("x = y", Signature::ZSucc).offset() == 0);
  CHECK(parse("true", Signature::QOrder).op() == Op::True);
  CHECK(parse("A z. z = x", Signature::ZSucc).op() == Op::Forall);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("x < y + 1", Signature::QOrder), ParseError);
  CHECK_THROWS_AS(parse("x = y + 1", Signature::QOrder), ParseError);
  CHECK_THROWS_AS(parse("x < y", Signature::ZSucc), ParseError);
  CHECK_THROWS_AS(parse("x <", Signature::QOrder), ParseError);
  CHECK_THROWS_AS(parse("(x < y", Signature::QOrder), ParseError);
  CHECK_THROWS_AS(parse("x < y)", Signature::QOrder), ParseError);
  CHECK_THROWS_AS(parse("E . x < y", Signature::QOrder), ParseError);
  try {
    parse("x < y & #", Signature::QOrder);
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.position() == 8);
  }
}

TEST_CASE("render") {
  CHECK(render(parse("x<y", Signature::QOrder)) == "x < y");
  CHECK(render(Formula::truth()) == "true");
  CHECK(render(Formula::exists("z", Formula::eq("z", "x", 2))) == "E z. (z = x + 2)");
  CHECK(render(parse("x=y+-3", Signature::ZSucc)) == "x = y + -3");
}

TEST_CASE("free variables") {
  CHECK(free_vars(parse("x < y", Signature::QOrder)) == VarOrder{"x", "y"});
  CHECK(free_vars(parse("E z. (z = x + 1)", Signature::ZSucc)) == VarOrder{"x"});
  CHECK(free_vars(parse("true", Signature::QOrder)).empty());
  CHECK(free_vars(parse("y < x | E x. x < z", Signature::QOrder)) == VarOrder{"y", "x", "z"});
}

TEST_CASE("nnf examples") {
  auto q = [](const char* s) { return parse(s, Signature::QOrder); };
  auto z = [](const char* s) { return parse(s, Signature::ZSucc); };
  CHECK(nnf(q("!(x < y & y < z)")) == q("!(x<y) | !(y<z)"));
  CHECK(nnf(z("!(E z. z = x + 1)")) == z("A z. !(z = x + 1)"));
  CHECK(nnf(q("x < y")) == q("x < y"));
  CHECK(nnf(q("x < y -> y < x")) == q("!(x<y) | y<x"));
}

TEST_CASE("offsets and quantifier counts") {
  Formula f = parse("E u. (x = u + 3 & A v. v = y + -7)", Signature::ZSucc);
  CHECK(max_abs_offset(f) == 7);
  CHECK(quantifier_count(f) == 2);
  CHECK(quantifier_depth(f) == 2);
  CHECK(quantifier_depth(parse("(E u. u = x) | (E v. v = x)", Signature::ZSucc)) == 1);
}

TEST_CASE("variable orders") {
  CHECK(parse_var_order(" x, y ,z") == VarOrder{"x", "y", "z"});
  CHECK_THROWS_AS(parse_var_order("x,x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_var_order("x,1y"), std::invalid_argument);
}

TEST_CASE("render/parse round trip (property)") {
  for (auto sig : {Signature::QOrder, Signature::ZSucc}) {
    gen::FormulaGen g(sig, 17);
    for (int i = 0; i < 400; ++i) {
      Formula f = g.formula(1 + i % 3);
      INFO(render(f));
      CHECK(parse(render(f), sig) == f);
    }
  }
}

TEST_CASE("dnf round trip keeps semantics (property)") {
  gen::FormulaGen g(Signature::QOrder, 5);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    Formula f = g.quantifier_free(3);
    Formula back = from_dnf(to_dnf(f));
    VarOrder vars{"x", "y", "z"};
    for (int k = 0; k < 10; ++k) {
      auto pt = gen::random_rationals(rng, 3);
      INFO(render(f));
      CHECK(eval_dlo(f, vars, pt) == eval_dlo(back, vars, pt));
    }
  }
}

TEST_CASE("nnf preserves semantics (property)") {
  std::mt19937_64 rng(3);
  {
    gen::FormulaGen g(Signature::QOrder, 11);
    for (int i = 0; i < 200; ++i) {
      Formula f = g.formula(3);
      VarOrder vars{"x", "y", "z"};
      for (int k = 0; k < 5; ++k) {
        auto pt = gen::random_rationals(rng, 3);
        INFO(render(f));
        CHECK(eval_dlo(f, vars, pt) == eval_dlo(nnf(f), vars, pt));
      }
    }
  }
  {
    gen::FormulaGen g(Signature::ZSucc, 12);
    for (int i = 0; i < 200; ++i) {
      Formula f = g.formula(3);
      VarOrder vars{"x", "y", "z"};
      for (int k = 0; k < 5; ++k) {
        auto p = gen::random_pattern(rng, 3, 6);
        INFO(render(f));
        CHECK(eval_succ(f, vars, p) == eval_succ(nnf(f), vars, p));
      }
    }
  }
}

TEST_CASE("signature check") {
  CHECK_NOTHROW(check_signature(Formula::less("x", "y"), Signature::QOrder));
  CHECK_THROWS_AS(check_signature(Formula::less("x", "y"), Signature::ZSucc), std::invalid_argument);
  CHECK_THROWS_AS(check_signature(Formula::eq("x", "y", 1), Signature::QOrder), std::invalid_argument);
}
