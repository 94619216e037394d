#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "msocard/automata.hpp"
#include "msocard/cardinality.hpp"
#include "msocard/cli.hpp"
#include "msocard/compiler.hpp"
#include "msocard/error.hpp"
#include "msocard/finite_model.hpp"
#include "msocard/formula.hpp"
#include "msocard/templates.hpp"

namespace py = pybind11;
using namespace msocard;

namespace {

using OracleMap = std::map<std::string, std::string>;

std::map<std::string, CardOracle> oracles_of(const OracleMap& specs) {
  std::map<std::string, CardOracle> out;
  for (const auto& [name, spec] : specs) out.emplace(name, parse_oracle(spec));
  return out;
}

SymbolBinding binding_of(const std::map<std::string, CardOracle>& oracles) {
  SymbolBinding b;
  for (const auto& [name, o] : oracles) b.bind(name, o);
  return b;
}

Formula parse_with(const std::string& text, const SymbolBinding& b) {
  return parse_formula(text, b.signature());
}

py::dict report_dict(const DefinabilityReport& rep) {
  py::dict d;
  d["verdict"] = verdict_name(rep.verdict);
  d["lines"] = rep.lines;
  if (rep.decomposition) d["decomposition"] = rep.decomposition->to_string();
  if (rep.witness) d["witness"] = rep.witness->to_string();
  return d;
}

}  // namespace

PYBIND11_MODULE(_msocard, m) {
  m.doc() = "Cardinality relations and weak monadic second-order logic over orders";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Dfa>(m, "Dfa")
      .def_static("from_text", &dfa_from_text)
      .def_property_readonly("labels", &Dfa::labels)
      .def_property_readonly("states", &Dfa::state_count)
      .def("accepts", [](const Dfa& a, const std::string& w) {
        return a.accepts(word_from_string(w, a.tracks()));
      }, py::arg("word"))
      .def("to_text", &dfa_to_text)
      .def("equivalent", [](const Dfa& a, const Dfa& b) { return equivalent(a, b); })
      .def("is_empty", [](const Dfa& a) { return is_empty(a); })
      .def("shortest", [](const Dfa& a) -> std::optional<std::string> {
        Word w;
        if (!shortest_accepted(a, w)) return std::nullopt;
        return word_to_string(w, a.tracks());
      })
      .def("__repr__", [](const Dfa& a) {
        std::ostringstream s;
        s << "<Dfa states=" << a.state_count() << " tracks=" << a.tracks() << '>';
        return s.str();
      });

  m.def("normalize", [](const std::string& text, const OracleMap& oracles) {
    return print_formula(parse_with(text, binding_of(oracles_of(oracles))));
  }, py::arg("formula"), py::arg("oracles") = OracleMap{},
        "Parse a formula and print it back in normal syntax.");

  m.def("compile", [](const std::string& text, const OracleMap& oracles) {
    SymbolBinding b = binding_of(oracles_of(oracles));
    return compile(parse_with(text, b), b);
  }, py::arg("formula"), py::arg("oracles") = OracleMap{});

  m.def("decide", [](const std::string& text, const OracleMap& oracles) {
    SymbolBinding b = binding_of(oracles_of(oracles));
    return decide_sentence(parse_with(text, b), b);
  }, py::arg("sentence"), py::arg("oracles") = OracleMap{});

  m.def("analyze_oracle", [](const std::string& spec, Nat cutoff, Nat search) {
    AnalysisOptions opts;
    opts.section_cutoff = cutoff;
    opts.strup_search = search;
    return report_dict(analyze_definability(parse_oracle(spec), opts));
  }, py::arg("spec"), py::arg("cutoff") = 16, py::arg("search") = 8);

  m.def("analyze_formula", [](const std::string& text, const OracleMap& oracles) {
    SymbolBinding b = binding_of(oracles_of(oracles));
    return report_dict(analyze_definability(parse_with(text, b), b));
  }, py::arg("formula"), py::arg("oracles") = OracleMap{});

  m.def("check_strup", [](const std::string& spec, Nat mu_m, std::vector<Nat> periods, Nat bound)
            -> std::optional<std::string> {
    auto w = check_mu_strup(parse_oracle(spec), StrupMu{mu_m, std::move(periods)}, bound);
    if (!w) return std::nullopt;
    return w->to_string();
  }, py::arg("spec"), py::arg("m"), py::arg("periods"), py::arg("bound"),
        "None when the condition holds up to bound, else the witness.");

  m.def("evaluate", [](const std::string& text, std::size_t q, const OracleMap& oracles,
                       const std::map<std::string, std::size_t>& elements,
                       const std::map<std::string, std::vector<std::size_t>>& sets) {
    auto rel = oracles_of(oracles);
    Formula f = parse_with(text, binding_of(rel));
    Assignment a;
    a.elements = elements;
    for (const auto& [name, members] : sets) {
      Mask mask = 0;
      for (auto i : members) {
        if (i >= q) throw InvalidArgument("set element outside the domain");
        mask |= Mask{1} << i;
      }
      a.sets[name] = mask;
    }
    return eval(f, FiniteModel{q, rel}, a);
  }, py::arg("formula"), py::arg("q"), py::arg("oracles") = OracleMap{},
        py::arg("elements") = std::map<std::string, std::size_t>{},
        py::arg("sets") = std::map<std::string, std::vector<std::size_t>>{});

  m.def("quasieq", [](const std::string& spec, std::size_t k, std::size_t qmin, std::size_t qmax,
                      const std::string& mode) {
    VerifyMode vm = VerifyMode::fast;
    if (mode == "brute") vm = VerifyMode::brute;
    else if (mode == "both") vm = VerifyMode::both;
    else if (mode != "fast") throw InvalidArgument("mode must be fast, brute or both");
    QuasiReport rep = verify_quasi_eqcard(parse_oracle(spec), k, qmin, qmax, vm);
    py::dict d;
    d["text"] = rep.to_string();
    d["invariant"] = rep.invariant_everywhere;
    d["sound"] = rep.sound_everywhere;
    d["premise"] = rep.premise_holds;
    d["stabilized_from"] = rep.stabilized_from;
    d["constructive_q"] = rep.constructive_q;
    return d;
  }, py::arg("spec"), py::arg("k"), py::arg("qmin"), py::arg("qmax"), py::arg("mode") = "fast");

  m.def("template", [](const std::string& name, std::size_t n, std::size_t k) {
    auto kind = template_kind_from_name(name);
    if (!kind) throw InvalidArgument("unknown template '" + name + "'");
    FormulaTemplate t;
    t.kind = *kind;
    t.n = n;
    t.k = k;
    return print_formula(build_template(t));
  }, py::arg("name"), py::arg("n") = 1, py::arg("k") = 0);
  m.def("template_names", &template_names);

  m.def("run_cli", [](const std::vector<std::string>& args, const std::string& input) {
    std::ostringstream out, err;
    std::istringstream in(input);
    int code = run(args, out, err, in);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), py::arg("stdin") = "", "Runs the command line; returns (code, stdout, stderr).");
}
