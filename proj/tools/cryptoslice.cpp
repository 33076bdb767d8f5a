#include "cryptoslice/bench.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace cryptoslice;

namespace {

OutputFormat formatOf(const std::string &s) {
  return s == "json" ? OutputFormat::Json : OutputFormat::Text;
}

std::vector<std::pair<std::string, Program>> inputPrograms(const RunConfig &cfg) {
  std::vector<std::pair<std::string, Program>> out;
  if (cfg.manifest) {
    auto m = parseManifest(*cfg.manifest);
    for (const auto &root : rootSubprojects(m))
      out.emplace_back(root, classesForRoot(m, root));
    return out;
  }
  std::vector<ClassDef> classes;
  for (const auto &f : cfg.files)
    for (auto &c : parseClasses(readFile(f), f))
      classes.push_back(std::move(c));
  out.emplace_back("<input>", linkProgram(std::move(classes)));
  return out;
}

// "<sig>#0,1": interParam criteria at every call site of sig.
void dumpSlice(const RunConfig &cfg, const std::string &spec) {
  size_t hash = spec.rfind('#');
  if (hash == std::string::npos)
    throw std::invalid_argument("--dump-slice expects <signature>#<params>");
  MethodSig sig = parseMethodSig(spec.substr(0, hash));
  std::set<int> params;
  std::stringstream ss(spec.substr(hash + 1));
  std::string p;
  while (std::getline(ss, p, ','))
    params.insert(std::stoi(p));
  for (auto &[root, program] : inputPrograms(cfg)) {
    AnalysisContext ctx(program);
    std::cout << "# root " << root << "\n";
    for (const auto &site : callSitesOf(ctx.callGraph(), sig)) {
      std::cout << "# site " << site.caller.str() << " @" << site.line << "\n";
      auto chains =
          interBackwardSlices(ctx, SlicingCriterion::interParam(site, params), cfg.depth);
      std::cout << dumpSlices(ctx, chains);
    }
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Static detector for cryptographic API misuse in TIR programs"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string rules, format = "text", failOn = "L", dumpSliceSpec, output;
  bool noRefine = false, dumpCallgraph = false, listRules = false;
  double budget = -1;
  int jobs = 1;

  auto *analyze = app.add_subcommand("analyze", "Analyze TIR files or a manifest");
  analyze->add_option("files", cfg.files, "TIR input files")->check(CLI::ExistingFile);
  analyze->add_option("--manifest", cfg.manifest, "Subproject manifest")
      ->check(CLI::ExistingFile);
  analyze->add_option("--rules", rules, "Rule subset, e.g. 1,4-7,16");
  analyze->add_option("--depth", cfg.depth, "Orthogonal exploration depth")
      ->check(CLI::NonNegativeNumber);
  analyze->add_flag("--no-refine", noRefine, "Disable refinement passes");
  analyze->add_flag("--refine-breakdown", cfg.refineBreakdown,
                    "Print removals per refinement pass");
  analyze->add_option("--jobs", jobs, "Parallel root analyses")
      ->envname("ANALYZER_JOBS")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--budget", budget, "Time budget per root, seconds")
      ->check(CLI::NonNegativeNumber);
  analyze->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--fail-on", failOn, "Lowest severity that fails the run")
      ->check(CLI::IsMember({"H", "M", "L"}));
  analyze->add_option("--output,-o", output, "Write the report to a file");
  analyze->add_flag("--check-client-trusted", cfg.checkClientTrusted,
                    "Also check checkClientTrusted for rule 5");
  analyze->add_flag("--dump-callgraph", dumpCallgraph, "Print call graph edges and exit");
  analyze->add_option("--dump-slice", dumpSliceSpec,
                      "Print stitched slices for <signature>#<params> and exit");
  analyze->add_flag("--list-rules", listRules, "Print the rule registry and exit");

  std::string corpus;
  BenchConfig bcfg;
  std::string benchRules, benchFormat = "text";
  bool benchNoRefine = false;
  auto *bench = app.add_subcommand("bench", "Score the analyzer on a labeled corpus");
  bench->add_option("corpus", corpus, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--depth", bcfg.depth, "Orthogonal exploration depth")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--rules", benchRules, "Rule subset");
  bench->add_option("--format", benchFormat, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  bench->add_flag("--no-refine", benchNoRefine, "Disable refinement passes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*bench) {
      if (!benchRules.empty())
        bcfg.rules = parseRuleList(benchRules);
      bcfg.refine = !benchNoRefine;
      std::cout << emitScore(runBench(corpus, bcfg), formatOf(benchFormat));
      return 0;
    }

    if (listRules) {
      std::cout << dumpRules();
      return 0;
    }
    if (!rules.empty())
      cfg.rules = parseRuleList(rules);
    cfg.refine = !noRefine;
    cfg.jobs = static_cast<unsigned>(jobs);
    if (budget >= 0)
      cfg.budgetSeconds = budget;
    cfg.format = formatOf(format);
    cfg.failOn = *parseSeverity(failOn);
    if (cfg.files.empty() && !cfg.manifest)
      throw std::invalid_argument("give TIR files or --manifest");
    if (!cfg.files.empty() && cfg.manifest)
      throw std::invalid_argument("TIR files and --manifest are exclusive");

    if (dumpCallgraph) {
      for (auto &[root, program] : inputPrograms(cfg))
        std::cout << "# root " << root << "\n" << buildCallGraph(program).dump();
      return 0;
    }
    if (!dumpSliceSpec.empty()) {
      dumpSlice(cfg, dumpSliceSpec);
      return 0;
    }

    Report report = run(cfg);
    std::string text = emitReport(report, cfg.format);
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(output, std::ios::binary);
      if (!(out << text))
        throw std::runtime_error("cannot write " + output);
    }
    return exitCode(report);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
