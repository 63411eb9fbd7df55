#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "codeviews/cli.hpp"
#include "codeviews/error.hpp"
#include "codeviews/exporter.hpp"
#include "codeviews/pipeline.hpp"

namespace py = pybind11;
using namespace codeviews;

namespace {

AnalysisOptions make_options(const std::vector<std::string>& graphs, const std::optional<std::vector<std::string>>& collapse,
                             const std::vector<std::string>& blacklist, bool full_cst) {
  AnalysisOptions o;
  o.views = ViewSet{};
  for (const auto& g : graphs) o.views.insert(parse_view(g));
  if (collapse) {
    if (collapse->size() == 1 && (collapse->front() == "all" || collapse->front() == "ALL")) {
      o.combine.collapse = CollapseMode::All;
    } else {
      o.combine.collapse = CollapseMode::Names;
      o.combine.collapse_names = *collapse;
    }
  }
  o.combine.blacklist = blacklist;
  o.full_cst = full_cst;
  return o;
}

py::dict result(const Analysis& a) {
  py::list diags;
  for (const Diagnostic& d : a.diagnostics) {
    py::dict item;
    item["category"] = std::string(category_name(d.category));
    item["file"] = d.file;
    item["line"] = d.line;
    item["message"] = d.message;
    item["fatal_for"] = d.fatal_for.names();
    diags.append(item);
  }
  py::dict out;
  out["json"] = to_json(a.graph);
  out["dot"] = to_dot(a.graph);
  out["diagnostics"] = diags;
  return out;
}

}  // namespace

PYBIND11_MODULE(_codeviews, m) {
  m.doc() = "AST, CFG and DFG extraction for C/C++ source";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  m.def(
      "analyze_source",
      [](const std::string& code, const std::string& lang, const std::vector<std::string>& graphs,
         const std::optional<std::vector<std::string>>& collapse, const std::vector<std::string>& blacklist,
         bool full_cst, const std::string& name) {
        const Lang l = parse_lang(lang);
        return result(analyze(preprocess_text(code, l, name), make_options(graphs, collapse, blacklist, full_cst)));
      },
      py::arg("code"), py::arg("lang") = "c", py::arg("graphs") = std::vector<std::string>{"cfg"},
      py::arg("collapse") = py::none(), py::arg("blacklist") = std::vector<std::string>{},
      py::arg("full_cst") = false, py::arg("name") = "input.c");

  m.def(
      "analyze_file",
      [](const std::string& path, const std::string& lang, const std::vector<std::string>& graphs,
         const std::optional<std::vector<std::string>>& collapse, const std::vector<std::string>& blacklist,
         bool full_cst) {
        return result(analyze_file(path, parse_lang(lang), make_options(graphs, collapse, blacklist, full_cst)));
      },
      py::arg("path"), py::arg("lang") = "c", py::arg("graphs") = std::vector<std::string>{"cfg"},
      py::arg("collapse") = py::none(), py::arg("blacklist") = std::vector<std::string>{},
      py::arg("full_cst") = false);

  m.def(
      "analyze_folder",
      [](const std::string& path, const std::string& lang, const std::string& name, const std::vector<std::string>& graphs) {
        return result(analyze_folder(path, parse_lang(lang), name, make_options(graphs, std::nullopt, {}, false)));
      },
      py::arg("path"), py::arg("lang"), py::arg("combined_name"),
      py::arg("graphs") = std::vector<std::string>{"cfg"});

  m.def(
      "enumerate_paths",
      [](const std::string& code, const std::string& lang, const std::string& function, int loop_iterations_max) {
        Analysis a = analyze(preprocess_text(code, parse_lang(lang), lang == "c" ? "input.c" : "input.cpp"),
                             make_options({"cfg"}, std::nullopt, {}, false));
        PathBounds b;
        b.loop_iterations_max = loop_iterations_max;
        return paths_to_json(enumerate_paths(*a.cfg, function, b));
      },
      py::arg("code"), py::arg("lang"), py::arg("function"), py::arg("loop_iterations_max") = 1);

  m.def("to_dot", [](const std::string& json_text) { return to_dot(from_json(json_text)); }, py::arg("json_text"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int rc = cli::run(args, out, err);
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"));
}
