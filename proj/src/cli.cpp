#include "codeviews/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "codeviews/error.hpp"
#include "codeviews/exporter.hpp"
#include "codeviews/pipeline.hpp"

namespace codeviews::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

void write_file(const fs::path& p, const std::string& data) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + p.string());
  f << data;
  if (!f) throw Error(ErrorCode::Io, "cannot write " + p.string());
}

void report(const Diagnostics& diags, std::ostream& err) {
  std::map<DiagnosticCategory, std::pair<int, int>> counts;
  for (const Diagnostic& d : diags) {
    err << (d.file.empty() ? "<project>" : d.file) << ":" << d.line << ": " << category_name(d.category) << ": "
        << d.message;
    if (d.is_fatal()) {
      std::string views;
      for (const auto& v : d.fatal_for.names()) views += (views.empty() ? "" : ",") + v;
      err << " [incomplete: " << views << "]";
    }
    err << "\n";
    auto& c = counts[d.category];
    ++c.first;
    if (d.is_fatal()) ++c.second;
  }
  err << "\nDiagnostics summary\n";
  err << "  " << std::left << std::setw(26) << "category" << std::right << std::setw(6) << "count" << std::setw(7)
      << "fatal" << "\n";
  int total = 0;
  for (DiagnosticCategory c : kAllCategories) {
    const auto [n, fatal] = counts[c];
    total += n;
    err << "  " << std::left << std::setw(26) << category_name(c) << std::right << std::setw(6) << n << std::setw(7)
        << fatal << "\n";
  }
  err << "  " << std::left << std::setw(26) << "total" << std::right << std::setw(6) << total << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extract aligned AST, CFG and DFG graphs from C/C++ source", "codeviews"};
  std::string lang_s;
  std::string code_file;
  std::string code_folder;
  std::string combined_name;
  std::string graphs = "cfg";
  std::string output = "json";
  std::string collapse;
  std::string blacklist;
  std::string paths_fn;
  int max_loop_iters = 1;
  std::string out_dir = ".";
  std::string renderer = "dot";
  bool full_cst = false;

  app.add_option("--lang", lang_s, "Source language: c or cpp")->required();
  auto* file_opt = app.add_option("--code-file", code_file, "Single source file");
  auto* folder_opt = app.add_option("--code-folder", code_folder, "Project directory, consolidated into one graph");
  file_opt->excludes(folder_opt);
  app.add_option("--combined-name", combined_name, "Output base name for --code-folder");
  app.add_option("--graphs", graphs, "Comma-separated views: ast,cfg,dfg");
  app.add_option("--output", output, "json, dot, png or all (comma-separated allowed)");
  app.add_option("--collapse", collapse, "Collapse variables: 'all' or comma-separated names");
  app.add_option("--blacklist", blacklist, "Comma-separated node kinds to drop");
  app.add_option("--paths", paths_fn, "Enumerate entry-to-exit paths of a function");
  app.add_option("--max-loop-iters", max_loop_iters, "Back-edge traversals per loop and path")->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--renderer", renderer, "DOT renderer executable for PNG output");
  app.add_flag("--full-cst", full_cst, "Keep every CST token in the AST view");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  AnalysisOptions options;
  bool want_json = false, want_dot = false, want_png = false;
  Lang lang = Lang::C;
  try {
    lang = parse_lang(lang_s);
    if (code_file.empty() == code_folder.empty()) {
      throw Error(ErrorCode::BadArguments, "exactly one of --code-file and --code-folder is required");
    }
    if (!code_folder.empty() && combined_name.empty()) {
      throw Error(ErrorCode::BadArguments, "--code-folder requires --combined-name");
    }
    options.views = ViewSet{};
    for (const auto& g : split_csv(graphs)) options.views.insert(parse_view(g));
    if (options.views.empty()) throw Error(ErrorCode::BadArguments, "--graphs is empty");
    for (const auto& o : split_csv(output)) {
      if (o == "json") want_json = true;
      else if (o == "dot") want_dot = true;
      else if (o == "png") want_png = true;
      else if (o == "all") want_json = want_dot = want_png = true;
      else throw Error(ErrorCode::BadArguments, "unknown output '" + o + "'");
    }
    if (!collapse.empty()) {
      std::string lower = collapse;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
      if (lower == "all") {
        options.combine.collapse = CollapseMode::All;
      } else if (lower != "none") {
        options.combine.collapse = CollapseMode::Names;
        options.combine.collapse_names = split_csv(collapse);
      }
    }
    options.combine.blacklist = split_csv(blacklist);
    options.full_cst = full_cst;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Analysis analysis;
  try {
    analysis = code_file.empty() ? analyze_folder(code_folder, lang, combined_name, options)
                                 : analyze_file(code_file, lang, options);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (analysis.unit->files.empty() || analysis.failed_files >= analysis.unit->files.size()) {
    report(analysis.diagnostics, err);
    err << "error: no source file could be analyzed\n";
    return 2;
  }

  int rc = analysis.partial(options.views) ? 1 : 0;
  bool png_ok = false;
  const std::string base = analysis.unit->name;
  try {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    const std::string dot = to_dot(analysis.graph);
    if (want_json) write_file(dir / (base + ".json"), to_json(analysis.graph));
    if (want_dot) write_file(dir / (base + ".dot"), dot);
    if (!paths_fn.empty()) {
      if (!analysis.cfg) analysis.cfg = build_cfg(analysis.tree, *analysis.table);
      PathBounds bounds;
      bounds.loop_iterations_max = max_loop_iters;
      PathBundle bundle = enumerate_paths(*analysis.cfg, paths_fn, bounds);
      analysis.diagnostics.insert(analysis.diagnostics.end(), bundle.diagnostics.begin(), bundle.diagnostics.end());
      write_file(dir / (base + ".paths.json"), paths_to_json(bundle));
    }
    if (want_png) {
      try {
        render_png(dot, dir / (base + ".png"), renderer);
        png_ok = true;
      } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        rc = std::max(rc, 1);
      }
    }
  } catch (const Error& e) {
    report(analysis.diagnostics, err);
    err << "error: " << e.what() << "\n";
    return 2;
  }
  report(analysis.diagnostics, err);
  out << "wrote " << (fs::path(out_dir) / base).string() << ".{";
  std::vector<std::string> kinds;
  if (want_json) kinds.emplace_back("json");
  if (want_dot) kinds.emplace_back("dot");
  if (png_ok) kinds.emplace_back("png");
  if (!paths_fn.empty()) kinds.emplace_back("paths.json");
  for (std::size_t i = 0; i < kinds.size(); ++i) out << (i ? "," : "") << kinds[i];
  out << "} (" << analysis.graph.nodes().size() << " nodes, " << analysis.graph.edges().size() << " edges)\n";
  return rc;
}

}  // namespace codeviews::cli
