#include <doctest.h>

#include <deflat/deflat.h>

#include <json.hpp>
#include <string>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  deflat_string_free(s);
  return out;
}

deflat_class* classify(deflat_structure s, const char* text) {
  deflat_formula* f = nullptr;
  REQUIRE(deflat_formula_parse(s, text, &f) == DEFLAT_OK);
  deflat_class* c = nullptr;
  REQUIRE(deflat_classify(f, nullptr, 0, &c) == DEFLAT_OK);
  deflat_formula_free(f);
  return c;
}

}  // namespace

TEST_CASE("C API: parse, render, free variables, elimination") {
  deflat_formula* f = nullptr;
  REQUIRE(deflat_formula_parse(DEFLAT_Z, "E z. (z = x + 1 & y = z + 1)", &f) == DEFLAT_OK);
  CHECK(deflat_formula_structure(f) == DEFLAT_Z);
  char* s = nullptr;
  REQUIRE(deflat_formula_render(f, &s) == DEFLAT_OK);
  CHECK(take(s) == "E z. (z = x + 1 & y = z + 1)");
  REQUIRE(deflat_formula_free_vars(f, &s) == DEFLAT_OK);
  CHECK(take(s) == "x,y");
  deflat_formula* e = nullptr;
  REQUIRE(deflat_eliminate(f, &e) == DEFLAT_OK);
  REQUIRE(deflat_formula_render(e, &s) == DEFLAT_OK);
  CHECK(take(s) == "y = x + 2");
  std::int64_t w = 0;
  REQUIRE(deflat_width(f, &w) == DEFLAT_OK);
  CHECK(w == 3);
  deflat_formula* n = nullptr;
  REQUIRE(deflat_formula_nnf(f, &n) == DEFLAT_OK);
  deflat_formula_free(n);
  deflat_formula_free(e);
  deflat_formula_free(f);
}

TEST_CASE("C API: errors") {
  deflat_formula* f = nullptr;
  CHECK(deflat_formula_parse(DEFLAT_Q, "x < y + 1", &f) == DEFLAT_ERR_PARSE);
  CHECK(f == nullptr);
  CHECK(std::string(deflat_last_error()).find("offset") != std::string::npos);
  CHECK(deflat_last_error_position() != static_cast<size_t>(-1));
  CHECK(deflat_formula_parse(DEFLAT_Q, nullptr, &f) == DEFLAT_ERR_ARGUMENT);
  deflat_class* c = nullptr;
  CHECK(deflat_class_parse(DEFLAT_Z, "D 3", &c) == DEFLAT_ERR_ARGUMENT);
  CHECK(deflat_class_parse(DEFLAT_Z, "A 0", &c) == DEFLAT_ERR_ARGUMENT);
  REQUIRE(deflat_formula_parse(DEFLAT_Q, "x < y", &f) == DEFLAT_OK);
  std::int64_t w;
  CHECK(deflat_width(f, &w) == DEFLAT_ERR_ARGUMENT);
  deflat_class* q = classify(DEFLAT_Q, "x < y");
  deflat_class* z = classify(DEFLAT_Z, "x = y + 1");
  int holds;
  CHECK(deflat_entails(q, z, &holds, nullptr, nullptr) == DEFLAT_ERR_ARGUMENT);
  int r;
  int bad[] = {1, 1};
  CHECK(deflat_realizes("B", bad, 2, &r) == DEFLAT_ERR_ARGUMENT);
  CHECK(deflat_realizes("X", bad, 2, &r) == DEFLAT_ERR_ARGUMENT);
  deflat_class_free(q);
  deflat_class_free(z);
  deflat_formula_free(f);
  // Successful calls clear the error.
  int id[] = {1, 2};
  CHECK(deflat_realizes("B", id, 2, &r) == DEFLAT_OK);
  CHECK(std::string(deflat_last_error()).empty());
}

TEST_CASE("C API: classification and details") {
  deflat_class* c = classify(DEFLAT_Z, "x = y + 3");
  CHECK(std::string(deflat_class_letter(c)) == "A");
  CHECK(deflat_class_divisor(c) == 3);
  CHECK(std::string(deflat_class_sub(c)).empty());
  char* s = nullptr;
  REQUIRE(deflat_class_canonical(c, &s) == DEFLAT_OK);
  CHECK(take(s) == "x1 = x2 + 3");
  REQUIRE(deflat_class_details(c, &s) == DEFLAT_OK);
  auto j = nlohmann::json::parse(take(s));
  CHECK(j["width"] == 4);
  CHECK(j["true_patterns"] == 1);
  deflat_class_free(c);

  c = classify(DEFLAT_Q, "x = y");
  CHECK(std::string(deflat_class_letter(c)) == "trivial");
  CHECK(std::string(deflat_class_sub(c)) == "equality");
  CHECK(deflat_class_divisor(c) == 0);
  deflat_class_free(c);

  deflat_formula* f = nullptr;
  REQUIRE(deflat_formula_parse(DEFLAT_Q, "x < y", &f) == DEFLAT_OK);
  REQUIRE(deflat_classify(f, "y,x", 0, &c) == DEFLAT_OK);
  CHECK(std::string(deflat_class_letter(c)) == "order");
  deflat_class_free(c);
  CHECK(deflat_classify(f, "x", 0, &c) == DEFLAT_ERR_ARGUMENT);
  deflat_formula_free(f);
}

TEST_CASE("C API: class specs, entailment, join") {
  for (const char* spec : {"A 3", "A3", "A(3)", "a 3"}) {
    deflat_class* c = nullptr;
    REQUIRE(deflat_class_parse(DEFLAT_Z, spec, &c) == DEFLAT_OK);
    CHECK(deflat_class_divisor(c) == 3);
    deflat_class_free(c);
  }
  deflat_class *b = nullptr, *cy = nullptr, *o = nullptr;
  REQUIRE(deflat_class_parse(DEFLAT_Q, "between", &b) == DEFLAT_OK);
  REQUIRE(deflat_class_parse(DEFLAT_Q, "cyclic", &cy) == DEFLAT_OK);
  REQUIRE(deflat_class_parse(DEFLAT_Q, "order", &o) == DEFLAT_OK);
  int holds = -1;
  char *rule = nullptr, *reason = nullptr;
  REQUIRE(deflat_entails(b, o, &holds, &rule, &reason) == DEFLAT_OK);
  CHECK(holds == 0);
  CHECK(take(rule) == "q-preservation");
  CHECK_FALSE(take(reason).empty());
  const deflat_class* both[] = {b, cy};
  deflat_class* j = nullptr;
  REQUIRE(deflat_join(both, 2, &j) == DEFLAT_OK);
  CHECK(std::string(deflat_class_letter(j)) == "order");
  CHECK(deflat_join(both, 0, &j) == DEFLAT_ERR_ARGUMENT);
  deflat_class_free(j);
  deflat_class_free(b);
  deflat_class_free(cy);
  deflat_class_free(o);
}

TEST_CASE("C API: realizes, equivalence, probes") {
  int r = -1;
  int s312[] = {3, 1, 2}, s321[] = {3, 2, 1}, s1243[] = {1, 2, 4, 3};
  REQUIRE(deflat_realizes("B", s312, 3, &r) == DEFLAT_OK);
  CHECK(r == 0);
  REQUIRE(deflat_realizes("B", s321, 3, &r) == DEFLAT_OK);
  CHECK(r == 1);
  REQUIRE(deflat_realizes("C", s312, 3, &r) == DEFLAT_OK);
  CHECK(r == 1);
  REQUIRE(deflat_realizes("S", s1243, 4, &r) == DEFLAT_OK);
  CHECK(r == 0);

  deflat_formula *f = nullptr, *g = nullptr;
  REQUIRE(deflat_formula_parse(DEFLAT_Z, "E z.(z=x+1 & y=z+1)", &f) == DEFLAT_OK);
  REQUIRE(deflat_formula_parse(DEFLAT_Z, "y=x+2", &g) == DEFLAT_OK);
  REQUIRE(deflat_equiv_check(f, g, &r) == DEFLAT_OK);
  CHECK(r == 1);
  int violated = -1;
  char* report = nullptr;
  REQUIRE(deflat_probe(g, "second", 2, 1, 200, &violated, &report) == DEFLAT_OK);
  CHECK(violated == 1);
  CHECK_FALSE(take(report).empty());
  REQUIRE(deflat_probe(g, "first", 2, 1, 200, &violated, nullptr) == DEFLAT_OK);
  CHECK(violated == 0);
  CHECK(deflat_probe(g, "B", 1, 1, 10, &violated, nullptr) == DEFLAT_ERR_ARGUMENT);
  deflat_formula* h = nullptr;
  REQUIRE(deflat_formula_parse(DEFLAT_Q, "x<y", &h) == DEFLAT_OK);
  CHECK(deflat_equiv_check(f, h, &r) == DEFLAT_ERR_ARGUMENT);
  deflat_formula_free(f);
  deflat_formula_free(g);
  deflat_formula_free(h);
}
