#include "msocard/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "msocard/compiler.hpp"
#include "msocard/error.hpp"
#include "msocard/finite_model.hpp"
#include "msocard/templates.hpp"

namespace msocard {

namespace {

constexpr const char* kReportHelp =
    "Reports are line oriented. Verification lines read\n"
    "  q=<q> check=<name> verdict=<ok|fail> witness=<text|->\n"
    "followed by premise lines and one summary line\n"
    "  summary invariant=<yes|no> sound=<yes|no> stabilized_from=<q|none> "
    "constructive_Q=<Q|none> premise=<holds|fails>\n"
    "Exit status: 0 success, 1 error, 2 inconclusive.";

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  return s.substr(b);
}

/// `-` reads `in`, an existing file is read, anything else is the text itself.
std::string read_source(const std::string& arg, std::istream& in) {
  std::ostringstream buf;
  if (arg == "-") {
    buf << in.rdbuf();
    return trim(buf.str());
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream file(arg);
    if (!file) throw InvalidArgument("cannot read " + arg);
    buf << file.rdbuf();
    return trim(buf.str());
  }
  return arg;
}

struct Bindings {
  SymbolBinding symbols;
  std::map<std::string, CardOracle> oracles;
};

Bindings parse_bindings(const std::vector<std::string>& specs) {
  Bindings b;
  for (const auto& s : specs) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidArgument("relation binding must read NAME=<oracle>, got '" + s + "'");
    std::string name = s.substr(0, eq);
    if (b.oracles.count(name) != 0) throw InvalidArgument("relation " + name + " bound twice");
    CardOracle o = parse_oracle(s.substr(eq + 1));
    b.oracles.emplace(name, o);
    b.symbols.bind(name, o);
  }
  return b;
}

Mask parse_set_value(const std::string& text) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw InvalidArgument("set value must read {a,b,...}, got '" + text + "'");
  Mask m = 0;
  std::stringstream ss(text.substr(1, text.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t v = std::stoul(item);
    if (v >= kMaxDomain) throw InvalidArgument("element " + item + " out of range");
    m |= Mask{1} << v;
  }
  return m;
}

Assignment parse_assignment(const std::vector<std::string>& items) {
  Assignment a;
  for (const auto& s : items) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw InvalidArgument("assignment must read VAR=value, got '" + s + "'");
    std::string var = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (!is_identifier(var)) throw InvalidArgument("bad variable name '" + var + "'");
    if (sort_of(var) == Sort::set) {
      a.sets[var] = parse_set_value(val);
    } else {
      try {
        a.elements[var] = std::stoul(val);
      } catch (const std::exception&) {
        throw InvalidArgument("element value must be a number, got '" + val + "'");
      }
    }
  }
  return a;
}

std::vector<Nat> parse_numbers(const std::string& text) {
  std::vector<Nat> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(trim(item), &used));
      if (used != trim(item).size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("expected a comma separated list of numbers, got '" + text + "'");
    }
  }
  return out;
}

void print_report(std::ostream& out, const DefinabilityReport& rep) {
  for (const auto& l : rep.lines) out << l << '\n';
  out << "verdict=" << verdict_name(rep.verdict) << '\n';
}

int exit_for(Verdict v) { return v == Verdict::inconclusive ? kExitInconclusive : kExitOk; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"Definability of cardinality relations in weak MSO over orders", "msocard"};
  app.require_subcommand(1, 1);
  app.footer(kReportHelp);
  unsigned jobs = 1;
  app.add_option("--jobs", jobs, "Worker cap (work is currently sequential)")->check(CLI::PositiveNumber);

  std::string formula_arg, output, dfa_arg, oracle_arg, mu_arg, template_name_arg, sentence_arg;
  std::vector<std::string> bindings, assigns;
  Nat bound = 0, search = 8, cutoff = 16;
  std::size_t length = 8, q = 1, k = 5, qmin = 1, qmax = 1, n = 1, card_k = 0;
  bool no_verify = false, table = false, iq = false, brute = false, both = false, fast = false;
  std::string symbol = "R", eqcard_symbol = "EqCard";

  auto* compile_cmd = app.add_subcommand("compile", "Compile a formula to its minimal automaton");
  compile_cmd->add_option("-f,--formula", formula_arg, "Formula text, file, or - for stdin")->required();
  compile_cmd->add_option("-o,--output", output, "Write the automaton here instead of stdout");
  compile_cmd->add_option("--oracle", bindings, "Relation binding NAME=<oracle>");
  std::vector<std::string> words;
  std::string equiv_arg;
  compile_cmd->add_option("--accepts", words, "Report membership of a word (letters as in the text form)");
  compile_cmd->add_option("--equiv", equiv_arg, "Report equivalence with an automaton file");

  auto* decide_cmd = app.add_subcommand("decide", "Decide a sentence over the naturals");
  decide_cmd->add_option("-f,--formula", formula_arg, "Sentence text, file, or -")->required();
  decide_cmd->add_option("--oracle", bindings, "Relation binding NAME=<oracle>");

  auto* analyze_cmd = app.add_subcommand("analyze", "Definability of a cardinality relation");
  auto* analyze_oracle = analyze_cmd->add_option("--oracle", oracle_arg, "Oracle to analyse");
  auto* analyze_formula =
      analyze_cmd->add_option("--formula", formula_arg, "Formula over set variables to analyse");
  analyze_oracle->excludes(analyze_formula);
  analyze_cmd->add_option("--rel", bindings, "Relation binding NAME=<oracle> for --formula");
  analyze_cmd->add_option("--cutoff", cutoff, "Sections examined for C below this");
  analyze_cmd->add_option("--search", search, "STRUP search range for m and periods");
  analyze_cmd->add_option("--length", length, "Word length for the invariance check");

  auto* decompose_cmd = app.add_subcommand("decompose", "Read a recognizable relation off an automaton");
  decompose_cmd->add_option("--dfa", dfa_arg, "Automaton file or -")->required();
  decompose_cmd->add_flag("--no-verify", no_verify, "Skip the equivalence check");

  auto* strup_cmd = app.add_subcommand("strup", "Check mu-STRUP of an oracle up to a bound");
  strup_cmd->add_option("--oracle", oracle_arg, "Oracle spec")->required();
  strup_cmd->add_option("--mu", mu_arg, "m,p1,...,pn")->required();
  strup_cmd->add_option("--bound", bound, "Largest coordinate examined")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula in the finite order M_q");
  eval_cmd->add_option("-f,--formula", formula_arg, "Formula text, file, or -")->required();
  eval_cmd->add_option("-q", q, "Domain size")->required()->check(CLI::Range(std::size_t{1}, kMaxDomain));
  eval_cmd->add_option("--oracle", bindings, "Relation binding NAME=<oracle>");
  eval_cmd->add_option("--assign", assigns, "VAR=value, with {a,b} for sets");
  eval_cmd->add_flag("--table", table, "List every satisfying tuple of sets or elements");
  eval_cmd->add_flag("--iq", iq, "Report the cardinality image and invariance");

  auto* quasi_cmd = app.add_subcommand("quasieq", "Audit QuasiEq as a quasi-equicardinality relation");
  quasi_cmd->add_option("--oracle", oracle_arg, "Oracle spec")->required();
  quasi_cmd->add_option("-k", k, "Completeness on sizes below k")->required();
  quasi_cmd->add_option("--qmin", qmin, "Smallest q")->required();
  quasi_cmd->add_option("--qmax", qmax, "Largest q")->required();
  auto* f_fast = quasi_cmd->add_flag("--fast", fast, "Cardinality-profile evaluation (default)");
  auto* f_brute = quasi_cmd->add_flag("--brute", brute, "Brute-force evaluation, q <= 6");
  auto* f_both = quasi_cmd->add_flag("--both", both, "Both, cross-checked where q <= 6");
  f_fast->excludes(f_brute)->excludes(f_both);
  f_brute->excludes(f_both);

  auto* sat_cmd = app.add_subcommand("sat", "Least q <= qmax with M_q satisfying a sentence");
  sat_cmd->add_option("-f,--formula", formula_arg, "Sentence text, file, or -")->required();
  sat_cmd->add_option("--qmax", qmax, "Largest domain tried")->required()->check(
      CLI::Range(std::size_t{1}, kMaxDomain));
  sat_cmd->add_option("--oracle", bindings, "Relation binding NAME=<oracle>");

  auto* gen_cmd = app.add_subcommand("gen", "Print a formula template");
  gen_cmd->add_option("--template", template_name_arg, "Template name")->required();
  gen_cmd->add_option("-n", n, "Relation arity");
  gen_cmd->add_option("-k", card_k, "Cardinality for CARD and CARDLESS");
  gen_cmd->add_option("--symbol", symbol, "Relation symbol");
  gen_cmd->add_option("--eqcard", eqcard_symbol, "Equicardinality symbol");
  gen_cmd->add_option("--sentence", sentence_arg, "Sentence G for Theta");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (compile_cmd->parsed()) {
      Bindings b = parse_bindings(bindings);
      Formula f = parse_formula(read_source(formula_arg, in), b.symbols.signature());
      Dfa a = compile(f, b.symbols);
      if (!words.empty() || !equiv_arg.empty()) {
        for (const auto& text : words) {
          Word w = word_from_string(text, a.tracks());
          out << "accepts " << word_to_string(w, a.tracks()) << ": " << (a.accepts(w) ? "yes" : "no")
              << '\n';
        }
        if (!equiv_arg.empty()) {
          Dfa other = dfa_from_text(read_source(equiv_arg, in));
          out << "equivalent: " << (other.labels() == a.labels() && equivalent(a, other) ? "yes" : "no")
              << '\n';
        }
        return kExitOk;
      }
      if (output.empty()) {
        write_dfa(out, a);
      } else {
        std::ofstream file(output);
        if (!file) throw InvalidArgument("cannot write " + output);
        write_dfa(file, a);
        out << "states=" << a.state_count() << " tracks=" << a.tracks() << " written=" << output
            << '\n';
      }
      return kExitOk;
    }
    if (decide_cmd->parsed()) {
      Bindings b = parse_bindings(bindings);
      Formula f = parse_formula(read_source(formula_arg, in), b.symbols.signature());
      out << (decide_sentence(f, b.symbols) ? "true" : "false") << '\n';
      return kExitOk;
    }
    if (analyze_cmd->parsed()) {
      AnalysisOptions opts;
      opts.section_cutoff = cutoff;
      opts.strup_search = search;
      opts.invariance_length = length;
      DefinabilityReport rep;
      if (!oracle_arg.empty()) {
        rep = analyze_definability(parse_oracle(oracle_arg), opts);
      } else if (!formula_arg.empty()) {
        Bindings b = parse_bindings(bindings);
        Formula f = parse_formula(read_source(formula_arg, in), b.symbols.signature());
        rep = analyze_definability(f, b.symbols, opts);
      } else {
        throw InvalidArgument("analyze needs --oracle or --formula");
      }
      print_report(out, rep);
      return exit_for(rep.verdict);
    }
    if (decompose_cmd->parsed()) {
      Dfa a = dfa_from_text(read_source(dfa_arg, in));
      RecognizableRel r = decompose(a, !no_verify);
      out << r.to_string() << '\n';
      return kExitOk;
    }
    if (strup_cmd->parsed()) {
      CardOracle o = parse_oracle(oracle_arg);
      auto nums = parse_numbers(mu_arg);
      if (nums.size() != o.arity + 1)
        throw InvalidArgument("--mu needs m and " + std::to_string(o.arity) + " periods");
      StrupMu mu{nums[0], std::vector<Nat>(nums.begin() + 1, nums.end())};
      auto w = check_mu_strup(o, mu, bound);
      if (w)
        out << "violated " << w->to_string() << '\n';
      else
        out << "ok\n";
      return kExitOk;
    }
    if (eval_cmd->parsed()) {
      Bindings b = parse_bindings(bindings);
      Formula f = parse_formula(read_source(formula_arg, in), b.symbols.signature());
      FiniteModel m{q, b.oracles};
      if (iq) {
        IqResult r = i_q(f, m);
        out << "invariant=" << (r.invariant ? "yes" : "no") << '\n';
        for (const auto& pt : r.image) {
          out << "image";
          for (Nat c : pt) out << ' ' << c;
          out << '\n';
        }
        if (r.counterexample) {
          out << "counterexample holds:";
          for (std::size_t j = 0; j < r.order.size(); ++j)
            out << (j ? "," : "") << r.order[j] << '=' << mask_to_string(r.counterexample->first[j]);
          out << " fails:";
          for (std::size_t j = 0; j < r.order.size(); ++j)
            out << (j ? "," : "") << r.order[j] << '=' << mask_to_string(r.counterexample->second[j]);
          out << '\n';
        }
        return kExitOk;
      }
      if (table) {
        auto fv = free_variables(f);
        if (fv.elements.empty()) {
          for (const auto& t : val_q(f, m)) {
            std::size_t j = 0;
            for (const auto& v : fv.sets) {
              out << (j ? " " : "") << v << '=' << mask_to_string(t[j]);
              ++j;
            }
            out << '\n';
          }
        } else {
          for (const auto& t : graph_q(f, m)) {
            std::size_t j = 0;
            for (const auto& v : fv.elements) {
              out << (j ? " " : "") << v << '=' << t[j];
              ++j;
            }
            out << '\n';
          }
        }
        return kExitOk;
      }
      out << (eval(f, m, parse_assignment(assigns)) ? "true" : "false") << '\n';
      return kExitOk;
    }
    if (quasi_cmd->parsed()) {
      VerifyMode mode = brute ? VerifyMode::brute : both ? VerifyMode::both : VerifyMode::fast;
      QuasiReport rep = verify_quasi_eqcard(parse_oracle(oracle_arg), k, qmin, qmax, mode);
      out << rep.to_string();
      return rep.stabilized_from ? kExitOk : kExitInconclusive;
    }
    if (sat_cmd->parsed()) {
      Bindings b = parse_bindings(bindings);
      Formula f = parse_formula(read_source(formula_arg, in), b.symbols.signature());
      SatResult r = bounded_sat(f, b.oracles, qmax);
      if (r.q) {
        out << "sat q=" << *r.q << '\n';
        return kExitOk;
      }
      out << "unknown tested=" << r.tested << '\n';
      return kExitInconclusive;
    }
    if (gen_cmd->parsed()) {
      auto kind = template_kind_from_name(template_name_arg);
      if (!kind) {
        std::string names;
        for (const auto& nm : template_names()) names += (names.empty() ? "" : ", ") + nm;
        throw InvalidArgument("unknown template '" + template_name_arg + "'; known: " + names);
      }
      FormulaTemplate t;
      t.kind = *kind;
      t.n = n;
      t.k = card_k;
      t.symbol = symbol;
      t.eqcard = eqcard_symbol;
      if (!sentence_arg.empty()) {
        Signature sig{{eqcard_symbol, 2, true}};
        t.sentence = parse_formula(read_source(sentence_arg, in), sig);
      }
      out << print_formula(build_template(t)) << '\n';
      return kExitOk;
    }
  } catch (const SyntaxError& e) {
    err << "syntax error at " << e.position() << ": " << e.what() << '\n';
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace msocard
