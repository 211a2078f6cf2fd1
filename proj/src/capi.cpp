#include "deflat/deflat.h"

#include <cctype>
#include <cstring>
#include <json.hpp>
#include <regex>
#include <string>

#include "deflat/lattice.hpp"
#include "deflat/oracle.hpp"
#include "deflat/qe_dlo.hpp"
#include "deflat/qe_succ.hpp"

using namespace deflat;

struct deflat_formula {
  Formula f;
  Signature sig;
};

struct deflat_class {
  DefClass c;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

namespace {

thread_local std::string last_error;
thread_local std::size_t last_position = static_cast<std::size_t>(-1);

Signature to_sig(deflat_structure s) { return s == DEFLAT_Z ? Signature::ZSucc : Signature::QOrder; }
deflat_structure from_sig(Signature s) { return s == Signature::ZSucc ? DEFLAT_Z : DEFLAT_Q; }

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
deflat_status guarded(Fn&& fn) {
  last_error.clear();
  last_position = static_cast<std::size_t>(-1);
  try {
    fn();
    return DEFLAT_OK;
  } catch (const ParseError& e) {
    last_error = e.what();
    last_position = e.position();
    return DEFLAT_ERR_PARSE;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return DEFLAT_ERR_ARGUMENT;
  } catch (const std::out_of_range& e) {
    last_error = e.what();
    return DEFLAT_ERR_ARGUMENT;
  } catch (const std::domain_error& e) {
    last_error = e.what();
    return DEFLAT_ERR_DOMAIN;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DEFLAT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return DEFLAT_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be NULL");
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n");
  auto e = s.find_last_not_of(" \t\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

DefClass parse_class(Signature sig, const std::string& raw) {
  std::string spec = trim(raw);
  std::string l = lower(spec);
  if (sig == Signature::QOrder) {
    if (l == "order" || l == "<") return QClass::of(QKind::Order);
    if (l == "between" || l == "b") return QClass::of(QKind::Between);
    if (l == "cyclic" || l == "c") return QClass::of(QKind::Cyclic);
    if (l == "separation" || l == "s") return QClass::of(QKind::Separation);
    if (l == "true" || l == "trivial") return QClass::trivial(TrivialSub::True);
    if (l == "false") return QClass::trivial(TrivialSub::False);
    if (l == "equality") return QClass::trivial(TrivialSub::EqualityOnly);
    throw std::invalid_argument("unknown Q class '" + spec + "'");
  }
  if (l == "true" || l == "trivial") return ZClass::trivial(true);
  if (l == "false") return ZClass::trivial(false);
  if (l == "equality") return ZClass::equality();
  static const std::regex lettered(R"(^([abc])\s*(?:\(\s*(\d+)\s*\)|(\d+))$)");
  std::smatch m;
  if (std::regex_match(l, m, lettered)) {
    std::string digits = m[2].matched ? m[2].str() : m[3].str();
    std::int64_t d = 0;
    try {
      d = std::stoll(digits);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("divisor out of range in '" + spec + "'");
    }
    if (d < 1) throw std::invalid_argument("divisor must be >= 1 in '" + spec + "'");
    ZKind k = m[1] == "a" ? ZKind::A : m[1] == "b" ? ZKind::B : ZKind::C;
    return ZClass::lettered(k, d);
  }
  throw std::invalid_argument("unknown Z class '" + spec + "' (expected A n, B n, C n, equality, true or false)");
}

Formula canonical(const DefClass& c) {
  return c.structure() == Signature::QOrder ? canonical_formula_q(c.q()) : canonical_formula_z(c.z());
}

}  // namespace

extern "C" {

const char* deflat_version(void) { return "1.0.0"; }
const char* deflat_last_error(void) { return last_error.c_str(); }
size_t deflat_last_error_position(void) { return last_position; }
void deflat_string_free(char* s) { std::free(s); }

deflat_status deflat_formula_parse(deflat_structure s, const char* text, deflat_formula** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new deflat_formula{parse(text, to_sig(s)), to_sig(s)};
  });
}

void deflat_formula_free(deflat_formula* f) { delete f; }

deflat_structure deflat_formula_structure(const deflat_formula* f) { return f ? from_sig(f->sig) : DEFLAT_Q; }

deflat_status deflat_formula_render(const deflat_formula* f, char** out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    *out = dup(render(f->f));
  });
}

deflat_status deflat_formula_free_vars(const deflat_formula* f, char** out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    std::string s;
    for (const auto& v : free_vars(f->f)) s += (s.empty() ? "" : ",") + v;
    *out = dup(s);
  });
}

deflat_status deflat_formula_nnf(const deflat_formula* f, deflat_formula** out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    *out = new deflat_formula{nnf(f->f), f->sig};
  });
}

deflat_status deflat_eliminate(const deflat_formula* f, deflat_formula** out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    Formula e = f->sig == Signature::QOrder ? eliminate_dlo(f->f) : eliminate_succ(f->f);
    *out = new deflat_formula{e, f->sig};
  });
}

deflat_status deflat_width(const deflat_formula* f, int64_t* out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    if (f->sig != Signature::ZSucc) throw std::invalid_argument("width is defined for Z formulas only");
    *out = width(eliminate_succ(f->f));
  });
}

deflat_status deflat_classify(const deflat_formula* f, const char* vars, int64_t window, deflat_class** out) {
  return guarded([&] {
    need(f, "formula");
    need(out, "out");
    if (window < 0) throw std::invalid_argument("window must be >= 0");
    VarOrder args = vars ? parse_var_order(vars) : VarOrder{};
    if (args.empty()) args = free_vars(f->f);
    nlohmann::ordered_json details;
    details["arity"] = args.size();
    std::string joined;
    for (const auto& v : args) joined += (joined.empty() ? "" : ",") + v;
    details["vars"] = joined;
    if (f->sig == Signature::QOrder) {
      check_signature(f->f, Signature::QOrder);
      OrderTypeSet ots = order_type_set(f->f, args);
      QClosure flags = closure_flags(ots);
      details["order_types"] = enumerate_order_types(args.size()).size();
      details["members"] = ots.members.size();
      details["reversal_closed"] = flags.reversal;
      details["rotation_closed"] = flags.rotation;
      *out = new deflat_class{classify_q(ots), std::move(details)};
    } else {
      Formula qf = eliminate_succ(f->f);
      PatternTable t = pattern_table(qf, args, window);
      details["width"] = width(qf);
      details["window"] = t.window();
      details["patterns"] = t.values().size();
      details["true_patterns"] = t.true_count();
      *out = new deflat_class{classify_z(t), std::move(details)};
    }
  });
}

deflat_status deflat_class_parse(deflat_structure s, const char* spec, deflat_class** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new deflat_class{parse_class(to_sig(s), spec)};
  });
}

void deflat_class_free(deflat_class* c) { delete c; }

deflat_structure deflat_class_structure(const deflat_class* c) { return c ? from_sig(c->c.structure()) : DEFLAT_Q; }

const char* deflat_class_letter(const deflat_class* c) {
  if (!c) return "";
  if (c->c.structure() == Signature::QOrder) {
    switch (c->c.q().kind) {
      case QKind::Order: return "order";
      case QKind::Between: return "between";
      case QKind::Cyclic: return "cyclic";
      case QKind::Separation: return "separation";
      case QKind::Trivial: return "trivial";
    }
    return "";
  }
  switch (c->c.z().kind) {
    case ZKind::A: return "A";
    case ZKind::B: return "B";
    case ZKind::C: return "C";
    case ZKind::Equality: return "equality";
    case ZKind::Trivial: return "trivial";
  }
  return "";
}

int64_t deflat_class_divisor(const deflat_class* c) {
  if (!c || c->c.structure() != Signature::ZSucc || !c->c.z().lettered()) return 0;
  return c->c.z().d;
}

const char* deflat_class_sub(const deflat_class* c) {
  if (!c) return "";
  if (c->c.structure() == Signature::QOrder) {
    if (c->c.q().kind != QKind::Trivial) return "";
    switch (c->c.q().sub) {
      case TrivialSub::True: return "true";
      case TrivialSub::False: return "false";
      case TrivialSub::EqualityOnly: return "equality";
    }
    return "";
  }
  if (c->c.z().kind != ZKind::Trivial) return "";
  return c->c.z().truth ? "true" : "false";
}

deflat_status deflat_class_canonical(const deflat_class* c, char** out) {
  return guarded([&] {
    need(c, "class");
    need(out, "out");
    *out = dup(render(canonical(c->c)));
  });
}

deflat_status deflat_class_details(const deflat_class* c, char** out) {
  return guarded([&] {
    need(c, "class");
    need(out, "out");
    *out = dup(c->details.dump());
  });
}

deflat_status deflat_entails(const deflat_class* source, const deflat_class* target, int* holds, char** rule,
                             char** reason) {
  return guarded([&] {
    need(source, "source");
    need(target, "target");
    need(holds, "holds");
    Verdict v = entails_class(source->c, target->c);
    *holds = v.holds ? 1 : 0;
    if (rule) *rule = dup(to_string(v.rule));
    if (reason) *reason = dup(v.reason);
  });
}

deflat_status deflat_join(const deflat_class* const* classes, size_t n, deflat_class** out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(classes, "classes");
    std::vector<DefClass> cs;
    cs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      need(classes[i], "class");
      cs.push_back(classes[i]->c);
    }
    *out = new deflat_class{join(cs)};
  });
}

deflat_status deflat_realizes(const char* group, const int* sigma, size_t k, int* out) {
  return guarded([&] {
    need(group, "group");
    need(out, "out");
    if (k > 0) need(sigma, "sigma");
    std::string g = lower(group);
    GroupId id;
    if (g == "shifts" || g == "shift")
      id = GroupId::Shifts;
    else if (g == "b")
      id = GroupId::B;
    else if (g == "c")
      id = GroupId::C;
    else if (g == "s")
      id = GroupId::S;
    else
      throw std::invalid_argument("unknown group '" + std::string(group) + "' (expected shifts, B, C or S)");
    *out = realizes(id, std::span<const int>(sigma, k)) ? 1 : 0;
  });
}

deflat_status deflat_equiv_check(const deflat_formula* f, const deflat_formula* g, int* out) {
  return guarded([&] {
    need(f, "f");
    need(g, "g");
    need(out, "out");
    if (f->sig != g->sig) throw std::invalid_argument("formulas are over different structures");
    *out = equiv_check(f->f, g->f, f->sig) ? 1 : 0;
  });
}

deflat_status deflat_probe(const deflat_formula* f, const char* kind, int64_t step, uint64_t seed, size_t samples,
                           int* violated, char** report) {
  return guarded([&] {
    need(f, "formula");
    need(kind, "kind");
    need(violated, "violated");
    PermKind k = parse_perm_kind(kind);
    ProbeReport rep;
    if (f->sig == Signature::QOrder) {
      LazyPermQ perm = lazy_perm_q(k, seed);
      rep = invariance_probe(f->f, perm, samples, seed ^ 0x9e3779b97f4a7c15ULL);
    } else {
      LazyPermZ perm = lazy_perm_z(PermSpec{k, step}, seed);
      rep = invariance_probe(f->f, perm, samples, seed ^ 0x9e3779b97f4a7c15ULL);
    }
    *violated = rep.violated ? 1 : 0;
    if (report) *report = dup(rep.summary());
  });
}

}  // extern "C"
