// deflat: command-line front end over the C API.
//
// One structured record per run on stdout. Exit 0 on success, 1 when the
// query answers "no" (entails, realizes, oracle-check), 2 on user error.

#include <deflat/deflat.h>

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;

namespace {

struct FormulaFree {
  void operator()(deflat_formula* f) const { deflat_formula_free(f); }
};
struct ClassFree {
  void operator()(deflat_class* c) const { deflat_class_free(c); }
};
using FormulaPtr = std::unique_ptr<deflat_formula, FormulaFree>;
using ClassPtr = std::unique_ptr<deflat_class, ClassFree>;

// Carries a failed status out of a command.
struct Failure {
  deflat_status status;
  std::string message;
  std::size_t position;
};

void check(deflat_status s) {
  if (s != DEFLAT_OK) throw Failure{s, deflat_last_error(), deflat_last_error_position()};
}

[[noreturn]] void usage(const std::string& msg) { throw Failure{DEFLAT_ERR_ARGUMENT, msg, static_cast<std::size_t>(-1)}; }

std::string take(char* s) {
  std::string out = s ? s : "";
  deflat_string_free(s);
  return out;
}

const char* code_name(deflat_status s) {
  switch (s) {
    case DEFLAT_ERR_PARSE: return "parse";
    case DEFLAT_ERR_ARGUMENT: return "argument";
    case DEFLAT_ERR_DOMAIN: return "domain";
    case DEFLAT_ERR_INTERNAL: return "internal";
    default: return "ok";
  }
}

struct Options {
  std::string structure;
  std::int64_t window = 0;
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  bool pretty = false;
  std::string vars;
  std::string perm;
  std::int64_t step = 1;
};

deflat_structure structure_of(const Options& o) {
  if (o.structure == "q" || o.structure == "Q") return DEFLAT_Q;
  if (o.structure == "z" || o.structure == "Z") return DEFLAT_Z;
  if (o.structure.empty()) usage("--structure q|z is required");
  usage("unknown structure '" + o.structure + "' (expected q or z)");
}

FormulaPtr parse_formula(deflat_structure s, const std::string& text) {
  deflat_formula* f = nullptr;
  check(deflat_formula_parse(s, text.c_str(), &f));
  return FormulaPtr(f);
}

std::string rendered(const deflat_formula* f) {
  char* s = nullptr;
  check(deflat_formula_render(f, &s));
  return take(s);
}

ClassPtr classify(const Options& o, const deflat_formula* f) {
  deflat_class* c = nullptr;
  check(deflat_classify(f, o.vars.empty() ? nullptr : o.vars.c_str(), o.window, &c));
  return ClassPtr(c);
}

// Class record: letter, then divisor or truth tag when they apply.
void put_class(json& j, const deflat_class* c) {
  j["class"] = deflat_class_letter(c);
  if (std::int64_t d = deflat_class_divisor(c); d > 0) j["d"] = d;
  if (std::string sub = deflat_class_sub(c); !sub.empty()) j["sub"] = sub;
  char* canon = nullptr;
  check(deflat_class_canonical(c, &canon));
  j["canonical"] = take(canon);
}

json class_json(const deflat_class* c) {
  json j;
  put_class(j, c);
  return j;
}

int cmd_classify(const Options& o, const std::string& text, json& out) {
  auto s = structure_of(o);
  auto f = parse_formula(s, text);
  auto c = classify(o, f.get());
  out["formula"] = rendered(f.get());
  put_class(out, c.get());
  char* details = nullptr;
  check(deflat_class_details(c.get(), &details));
  out["diagnostics"] = json::parse(take(details));
  return 0;
}

int cmd_entails(const Options& o, const std::string& src, const std::string& dst, json& out) {
  auto s = structure_of(o);
  auto f = parse_formula(s, src);
  auto g = parse_formula(s, dst);
  Options plain = o;
  plain.vars.clear();
  auto cf = classify(plain, f.get());
  auto cg = classify(plain, g.get());
  int holds = 0;
  char* rule = nullptr;
  char* reason = nullptr;
  check(deflat_entails(cf.get(), cg.get(), &holds, &rule, &reason));
  out["source"] = class_json(cf.get());
  out["target"] = class_json(cg.get());
  out["verdict"] = {{"holds", holds != 0}, {"rule", take(rule)}, {"reason", take(reason)}};
  return holds ? 0 : 1;
}

int cmd_join(const Options& o, const std::vector<std::string>& texts, json& out) {
  auto s = structure_of(o);
  if (texts.empty()) usage("join needs at least one formula");
  std::vector<ClassPtr> owned;
  std::vector<const deflat_class*> raw;
  json inputs = json::array();
  Options plain = o;
  plain.vars.clear();
  for (const auto& t : texts) {
    auto f = parse_formula(s, t);
    owned.push_back(classify(plain, f.get()));
    raw.push_back(owned.back().get());
    inputs.push_back(class_json(owned.back().get()));
  }
  deflat_class* j = nullptr;
  check(deflat_join(raw.data(), raw.size(), &j));
  ClassPtr joined(j);
  out["inputs"] = inputs;
  put_class(out, joined.get());
  return 0;
}

int cmd_qe(const Options& o, const std::string& text, json& out) {
  auto s = structure_of(o);
  auto f = parse_formula(s, text);
  deflat_formula* e = nullptr;
  check(deflat_eliminate(f.get(), &e));
  FormulaPtr qf(e);
  out["formula"] = rendered(f.get());
  out["result"] = rendered(qf.get());
  if (s == DEFLAT_Z) {
    std::int64_t w = 0;
    check(deflat_width(f.get(), &w));
    out["width"] = w;
  }
  return 0;
}

int cmd_canonical(const Options& o, const std::string& spec, json& out) {
  auto s = structure_of(o);
  deflat_class* c = nullptr;
  check(deflat_class_parse(s, spec.c_str(), &c));
  ClassPtr cls(c);
  put_class(out, cls.get());
  return 0;
}

std::vector<int> parse_perm(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" {}[]");
    auto e = item.find_last_not_of(" {}[]");
    if (b == std::string::npos) usage("empty entry in permutation '" + text + "'");
    item = item.substr(b, e - b + 1);
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      usage("bad permutation entry '" + item + "'");
    }
  }
  return out;
}

int cmd_realizes(const std::string& group, const std::string& perm, json& out) {
  auto sigma = parse_perm(perm);
  int yes = 0;
  check(deflat_realizes(group.c_str(), sigma.data(), sigma.size(), &yes));
  out["group"] = group;
  out["permutation"] = sigma;
  out["realizes"] = yes != 0;
  return yes ? 0 : 1;
}

int cmd_oracle(const Options& o, const std::vector<std::string>& texts, json& out) {
  auto s = structure_of(o);
  if (texts.size() == 2) {
    if (!o.perm.empty()) usage("--perm takes a single formula");
    auto f = parse_formula(s, texts[0]);
    auto g = parse_formula(s, texts[1]);
    int eq = 0;
    check(deflat_equiv_check(f.get(), g.get(), &eq));
    out["equivalent"] = eq != 0;
    return eq ? 0 : 1;
  }
  if (texts.size() == 1) {
    if (o.perm.empty()) usage("oracle-check needs two formulas, or one formula and --perm");
    auto f = parse_formula(s, texts[0]);
    int violated = 0;
    char* report = nullptr;
    check(deflat_probe(f.get(), o.perm.c_str(), o.step, o.seed, o.samples, &violated, &report));
    out["perm"] = o.perm;
    if (s == DEFLAT_Z) out["step"] = o.step;
    out["samples"] = o.samples;
    out["violated"] = violated != 0;
    out["report"] = take(report);
    return violated ? 1 : 0;
  }
  usage("oracle-check takes one or two formulas");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Definability classes for <Q,<> and <Z,succ>"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(deflat_version()));

  Options o;
  auto common = [&](CLI::App* sub, bool needs_structure = true) {
    if (needs_structure) sub->add_option("--structure,-s", o.structure, "q or z");
    sub->add_flag("--pretty", o.pretty, "indented output");
  };

  std::string one, two, group, perm;
  std::vector<std::string> many;

  auto* classify_cmd = app.add_subcommand("classify", "class of the relation a formula defines");
  common(classify_cmd);
  classify_cmd->add_option("formula", one)->required();
  classify_cmd->add_option("--vars", o.vars, "argument order, e.g. \"x,y,z\"");
  classify_cmd->add_option("--window", o.window, "pattern window (Z), default the formula width");

  auto* entails_cmd = app.add_subcommand("entails", "is the second relation definable from the first");
  common(entails_cmd);
  entails_cmd->add_option("source", one)->required();
  entails_cmd->add_option("target", two)->required();
  entails_cmd->add_option("--window", o.window);

  auto* join_cmd = app.add_subcommand("join", "least class definable from all inputs together");
  common(join_cmd);
  join_cmd->add_option("formulas", many)->required();
  join_cmd->add_option("--window", o.window);

  auto* qe_cmd = app.add_subcommand("qe", "quantifier elimination");
  common(qe_cmd);
  qe_cmd->add_option("formula", one)->required();

  auto* canon_cmd = app.add_subcommand("canonical", "canonical formula of a class such as \"C 2\" or separation");
  common(canon_cmd);
  canon_cmd->add_option("class", one)->required();

  auto* real_cmd = app.add_subcommand("realizes", "does a Q permutation group realize a permutation of positions");
  common(real_cmd, false);
  real_cmd->add_option("group", group, "shifts, B, C or S")->required();
  real_cmd->add_option("permutation", perm, "e.g. 3,1,2")->required();

  auto* oracle_cmd = app.add_subcommand("oracle-check", "brute-force equivalence, or an invariance probe with --perm");
  common(oracle_cmd);
  oracle_cmd->add_option("formulas", many)->required()->expected(1, 2);
  oracle_cmd->add_option("--perm", o.perm, "shift, B, C, S, first, second or third");
  oracle_cmd->add_option("--step", o.step, "line step d for Z permutations");
  oracle_cmd->add_option("--seed", o.seed);
  oracle_cmd->add_option("--samples", o.samples);

  std::string command = argc > 1 ? argv[1] : "";
  json out;
  out["command"] = command;
  int code = 0;
  try {
    app.parse(argc, argv);
    if (!o.structure.empty()) out["structure"] = o.structure == "Z" ? "z" : o.structure == "Q" ? "q" : o.structure;
    out["status"] = "ok";
    if (classify_cmd->parsed())
      code = cmd_classify(o, one, out);
    else if (entails_cmd->parsed())
      code = cmd_entails(o, one, two, out);
    else if (join_cmd->parsed())
      code = cmd_join(o, many, out);
    else if (qe_cmd->parsed())
      code = cmd_qe(o, one, out);
    else if (canon_cmd->parsed())
      code = cmd_canonical(o, one, out);
    else if (real_cmd->parsed())
      code = cmd_realizes(group, perm, out);
    else
      code = cmd_oracle(o, many, out);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << deflat_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    json err{{"command", command}, {"status", "error"}, {"error", {{"code", "usage"}, {"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return 2;
  } catch (const Failure& f) {
    json err{{"command", command}};
    if (!o.structure.empty()) err["structure"] = o.structure;
    err["status"] = "error";
    err["error"] = {{"code", code_name(f.status)}, {"message", f.message}};
    if (f.position != static_cast<std::size_t>(-1)) err["error"]["position"] = f.position;
    std::cout << err.dump() << "\n";
    return 2;
  }
  std::cout << (o.pretty ? out.dump(2) : out.dump()) << "\n";
  return code;
}
