#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "treecount/error.hpp"
#include "treecount/lean.hpp"
#include "treecount/normalize.hpp"
#include "treecount/parser.hpp"
#include "treecount/semantics.hpp"
#include "treecount/tableau.hpp"
#include "treecount/xpath.hpp"

using namespace treecount;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kSat = 0, kUnsat = 1, kError = 2, kExhausted = 3 };

struct Flags {
  bool json = false;
  bool dump_lean = false;
  bool trace = false;
  std::size_t max_st = std::size_t{1} << 22;
  double timeout = 0;
  std::string schema_file;
  std::string context;  // root, except eval: any
};

// An input given either as a formula or as an XPath expression.
struct Query {
  std::string text;
  bool xpath = false;
  XPathPtr expr;
  CompiledXPath compiled;
  Formula formula = Formula::top();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

XPathContext context_of(const Flags& f) { return f.context == "any" ? XPathContext::Any : XPathContext::Root; }

Flags with_context(Flags f, const char* fallback) {
  if (f.context.empty()) f.context = fallback;
  return f;
}

SurfacePtr schema_of(const Flags& f) {
  if (f.schema_file.empty()) return nullptr;
  return parse_formula(read_file(f.schema_file));
}

Query load(const std::string& text, bool xpath, const Flags& f, const std::string& prefix = "@n") {
  Query q;
  q.text = text;
  q.xpath = xpath;
  SurfacePtr schema = schema_of(f);
  if (xpath) {
    q.expr = parse_xpath(text);
    XPathCompileOptions opt;
    opt.context = context_of(f);
    opt.nominal_prefix = prefix;
    opt.schema = schema;
    q.compiled = compile_xpath(q.expr, opt);
    q.formula = q.compiled.formula;
  } else {
    SurfacePtr s = parse_formula(text);
    q.formula = normalize(schema ? surface::conj(s, schema) : s);
  }
  return q;
}

SolveOptions solve_options(const Flags& f) {
  SolveOptions opt;
  opt.max_st = f.max_st;
  if (f.timeout > 0) opt.timeout = std::chrono::duration<double>(f.timeout);
  if (f.trace)
    opt.trace = [](const RoundStats& r) {
      std::cerr << "round " << r.round << " aux=" << r.aux << " st=" << r.st << " finished=" << r.finished << "\n";
    };
  return opt;
}

// Nodes selected by an XPath query in the chosen context.
NodeSet xpath_selection(const Query& q, const BinTree& t, XPathContext ctx) {
  if (ctx == XPathContext::Root) return select_from_root(*q.expr, t);
  NodeSet out(t.size());
  for (const NodeSet& row : eval_xpath(*q.expr, t))
    for (int y = 0; y < t.size(); ++y) out[y] = out[y] || row[y];
  return out;
}

// Labels only; marks are solver bookkeeping.
BinTree plain(const BinTree& t) {
  BinTree c = t;
  c.clear_marks();
  return c;
}

json witness_json(const SolverResult& r) {
  BinTree m = plain(r.model);
  return {{"term", to_term(m)}, {"xml", to_xml(m)}, {"node", m.path(r.node)}};
}

json diagnostics(const SolverResult& r) {
  return {{"lean_size", r.lean_size}, {"K", r.bound}, {"rounds", r.rounds}, {"classes", r.classes}};
}

json lean_json(Formula f) {
  Lean l = Lean::build(annotate_counting(f));
  json a = json::array();
  for (Formula e : l.elements()) a.push_back(e.to_string());
  return a;
}

void print_text(const json& out, double seconds) {
  std::cout << out["status"].get<std::string>() << "\n";
  if (out.contains("message")) std::cout << "message: " << out["message"].get<std::string>() << "\n";
  if (out.contains("witness")) {
    const json& w = out["witness"];
    std::cout << "witness: " << w["term"].get<std::string>() << "\n";
    std::cout << "xml: " << w["xml"].get<std::string>() << "\n";
    std::cout << "node: " << w["node"].get<std::string>() << "\n";
  }
  if (out.contains("diagnostics")) {
    const json& d = out["diagnostics"];
    std::cout << "lean=" << d["lean_size"] << " K=" << d["K"] << " rounds=" << d["rounds"] << " classes=" << d["classes"]
              << " time=" << seconds << "s\n";
  }
  if (out.contains("lean"))
    for (const auto& e : out["lean"]) std::cout << "  " << e.get<std::string>() << "\n";
}

// Elapsed time is left out of --json so that runs compare byte for byte.
int emit(const json& out, const Flags& f, double seconds, int code) {
  if (f.json) std::cout << out.dump() << "\n";
  else print_text(out, seconds);
  return code;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_sat(const std::string& text, bool xpath, const Flags& f) {
  auto t0 = std::chrono::steady_clock::now();
  Query q = load(text, xpath, f);
  SolverResult r = solve(q.formula, solve_options(f));
  json out = {{"command", "sat"}, {"input", text}, {"kind", xpath ? "xpath" : "formula"}};
  int code = kUnsat;
  switch (r.verdict) {
    case Verdict::Sat:
      out["status"] = "sat";
      out["witness"] = witness_json(r);
      code = kSat;
      break;
    case Verdict::Unsat: out["status"] = "unsat"; break;
    case Verdict::ResourceExhausted:
      out["status"] = "resource-exhausted";
      out["message"] = r.reason;
      code = kExhausted;
      break;
  }
  out["diagnostics"] = diagnostics(r);
  if (f.dump_lean) out["lean"] = lean_json(q.formula);
  return emit(out, f, since(t0), code);
}

// q => p. On a counterexample the model node is selected by q and not by p;
// for XPath this is rechecked with the evaluator.
struct Check {
  Containment c;
  std::string unconfirmed;
};

Check check_contains(const Query& q, const Query& p, const Flags& f) {
  Check out{contains(q.formula, p.formula, solve_options(f)), ""};
  if (out.c.holds || out.c.detail.verdict != Verdict::Sat) return out;
  const SolverResult& r = out.c.detail;
  const BinTree& m = r.model;
  XPathContext ctx = context_of(f);
  bool in_q = q.xpath ? xpath_selection(q, m, ctx)[r.node] : eval(q.formula, m)[r.node];
  bool in_p = p.xpath ? xpath_selection(p, m, ctx)[r.node] : eval(p.formula, m)[r.node];
  if (in_q && !in_p) return out;
  // A fresh nominal on the right is read existentially by the evaluator but
  // universally once negated, so such a model need not refute anything.
  if (p.xpath && !p.compiled.nominals.empty())
    out.unconfirmed = "counterexample not confirmed by the XPath evaluator (fresh nominals on the right-hand side)";
  else if (!p.xpath && !marker_props(p.formula).empty())
    out.unconfirmed = "counterexample not confirmed (nominals on the right-hand side)";
  else
    throw std::logic_error("counterexample rejected by the evaluator");
  return out;
}

int cmd_contains(const std::string& lhs, bool lx, const std::string& rhs, bool rx, bool both_ways, const Flags& f) {
  auto t0 = std::chrono::steady_clock::now();
  Query q = load(lhs, lx, f, "@n"), p = load(rhs, rx, f, "@m");
  json out = {{"command", both_ways ? "equiv" : "contains"},
              {"lhs", lhs},
              {"lhs_kind", lx ? "xpath" : "formula"},
              {"rhs", rhs},
              {"rhs_kind", rx ? "xpath" : "formula"}};
  const char* yes = both_ways ? "equivalent" : "contained";
  const char* no = both_ways ? "not-equivalent" : "not-contained";

  std::vector<std::pair<const Query*, const Query*>> dirs{{&q, &p}};
  if (both_ways) dirs.emplace_back(&p, &q);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    Check c = check_contains(*dirs[i].first, *dirs[i].second, f);
    const SolverResult& r = c.c.detail;
    out["diagnostics"] = diagnostics(r);
    if (r.verdict == Verdict::ResourceExhausted) {
      out["status"] = "resource-exhausted";
      out["message"] = r.reason;
      return emit(out, f, since(t0), kExhausted);
    }
    if (!c.unconfirmed.empty()) {
      out["status"] = "error";
      out["message"] = c.unconfirmed;
      return emit(out, f, since(t0), kError);
    }
    if (!c.c.holds) {
      out["status"] = no;
      if (both_ways) out["direction"] = i == 0 ? "lhs-not-in-rhs" : "rhs-not-in-lhs";
      out["witness"] = witness_json(r);
      return emit(out, f, since(t0), kUnsat);
    }
  }
  out["status"] = yes;
  return emit(out, f, since(t0), kSat);
}

BinTree load_tree(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return parse_tree(read_file(arg));
  return parse_tree(arg);
}

int cmd_eval(const std::string& text, bool xpath, const std::string& tree, const Flags& f) {
  BinTree t = load_tree(tree);
  NodeSet s;
  if (xpath) {
    Query q;
    q.expr = parse_xpath(text);
    s = xpath_selection(q, t, context_of(f));
  } else {
    s = eval(normalize(parse_formula(text)), t);
  }
  json sel = json::array();
  for (int i = 0; i < t.size(); ++i)
    if (s[i]) sel.push_back(t.path(i));
  json out = {{"command", "eval"}, {"input", text}, {"kind", xpath ? "xpath" : "formula"}, {"tree", to_term(t)},
              {"selected", sel}};
  if (f.json) std::cout << out.dump() << "\n";
  else
    for (const auto& p : sel) std::cout << p.get<std::string>() << "\n";
  return 0;
}

int cmd_compile(const std::string& text, const Flags& f) {
  Query q = load(text, true, f);
  Formula a = annotate_counting(q.formula);
  Lean l = Lean::build(a);
  json noms = json::array();
  for (const auto& n : q.compiled.nominals) noms.push_back(n);
  json out = {{"command", "compile"},
              {"input", text},
              {"formula", q.formula.to_string()},
              {"size", formula_size(q.formula)},
              {"xpath_size", xpath_size(*q.expr)},
              {"lean", l.size()},
              {"K", occurrence_bound(a)},
              {"nominals", noms}};
  if (f.dump_lean) out["lean_elements"] = lean_json(q.formula);
  if (f.json) {
    std::cout << out.dump() << "\n";
  } else {
    std::cout << out["formula"].get<std::string>() << "\n";
    std::cout << "size=" << out["size"] << " lean=" << out["lean"] << " K=" << out["K"] << "\n";
    if (f.dump_lean)
      for (const auto& e : out["lean_elements"]) std::cout << "  " << e.get<std::string>() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satisfiability, containment and evaluation for tree formulas and XPath"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&](CLI::App* c) {
    c->add_flag("--json", f.json, "One JSON record on stdout");
    c->add_option("--schema", f.schema_file, "Formula file conjoined at the context");
    c->add_option("--context", f.context, "XPath context")->check(CLI::IsMember({"root", "any"}));
    c->add_flag("--dump-lean", f.dump_lean, "Print the lean");
    c->add_flag("--trace", f.trace, "Per-round statistics on stderr");
    c->add_option("--max-st", f.max_st, "Cap on stored phi-tree classes");
    c->add_option("--timeout", f.timeout, "Seconds");
  };

  std::string input, lhs, rhs, tree;
  bool xpath = false, formula = false, lhs_xpath = false, lhs_formula = false, rhs_xpath = false, rhs_formula = false;

  auto* sat = app.add_subcommand("sat", "Satisfiability of a formula or XPath expression");
  sat->add_option("input", input)->required();
  sat->add_flag("--xpath", xpath);
  sat->add_flag("--formula", formula);
  common(sat);

  auto pair_cmd = [&](const char* name, const char* what) {
    auto* c = app.add_subcommand(name, what);
    c->add_option("lhs", lhs)->required();
    c->add_option("rhs", rhs)->required();
    c->add_flag("--xpath", xpath, "Both sides are XPath");
    c->add_flag("--formula", formula, "Both sides are formulas");
    c->add_flag("--lhs-xpath", lhs_xpath);
    c->add_flag("--lhs-formula", lhs_formula);
    c->add_flag("--rhs-xpath", rhs_xpath);
    c->add_flag("--rhs-formula", rhs_formula);
    common(c);
    return c;
  };
  auto* cont = pair_cmd("contains", "Is every node selected by lhs selected by rhs");
  auto* equiv = pair_cmd("equiv", "Containment both ways");

  auto* ev = app.add_subcommand("eval", "Evaluate on an explicit tree (term, XML or a file)");
  ev->add_option("input", input)->required();
  ev->add_option("tree", tree)->required();
  ev->add_flag("--xpath", xpath);
  ev->add_flag("--formula", formula);
  common(ev);

  auto* comp = app.add_subcommand("compile", "Compile an XPath expression");
  comp->add_option("input", input)->required();
  comp->add_flag("--xpath", xpath, "Accepted for symmetry; input is always XPath");
  common(comp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (xpath && formula) throw Error("--xpath and --formula are exclusive");
    if (sat->parsed()) return cmd_sat(input, xpath, with_context(f, "root"));
    if (cont->parsed() || equiv->parsed()) {
      bool lx = (xpath || lhs_xpath) && !lhs_formula, rx = (xpath || rhs_xpath) && !rhs_formula;
      return cmd_contains(lhs, lx, rhs, rx, equiv->parsed(), with_context(f, "root"));
    }
    // eval reads an expression relationally unless asked otherwise
    if (ev->parsed()) return cmd_eval(input, xpath, tree, with_context(f, "any"));
    if (comp->parsed()) return cmd_compile(input, with_context(f, "root"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (f.json) std::cout << json{{"status", "error"}, {"message", e.what()}}.dump() << "\n";
    return kError;
  }
  return kError;
}
