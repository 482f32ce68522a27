// symbreak: symmetry detection and breaking for ground logic programs.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symbreak/symbreak.hpp"

using namespace symbreak;

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kUnsupported = 3,
  kPropertyViolated = 4,
  kSat = 10,
  kUnsat = 20,
};

struct Io {
  std::string in_file;
  std::string out_file;
  bool text = false;

  std::string read() const {
    std::ostringstream ss;
    if (in_file.empty() || in_file == "-") {
      ss << std::cin.rdbuf();
    } else {
      std::ifstream f(in_file);
      if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open " + in_file);
      ss << f.rdbuf();
    }
    return ss.str();
  }

  void write(const std::string& payload) const {
    if (out_file.empty() || out_file == "-") {
      std::cout << payload;
      std::cout.flush();
      return;
    }
    std::ofstream f(out_file);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + out_file);
    f << payload;
  }

  std::string format(const Program& p) const { return text ? to_text(p) : to_smodels(p); }
};

void add_io(CLI::App* cmd, Io& io, bool program_output) {
  cmd->add_option("-f,--file", io.in_file, "Input file (default: stdin)");
  cmd->add_option("-o,--output", io.out_file, "Output file (default: stdout)");
  if (program_output) cmd->add_flag("--text", io.text, "Write the text format instead of smodels");
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("SYMBREAK_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, std::string("SYMBREAK_SEED is not a number: ") + s);
    }
  }
  return 1;
}

std::size_t number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos == s.size()) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidArgument, what + ": expected a non-negative integer, got '" + s + "'");
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return kParse;
    case ErrorKind::UnsupportedRuleType:
    case ErrorKind::NotTight:
    case ErrorKind::NonBinaryConstraint:
    case ErrorKind::TooLarge:
    case ErrorKind::SearchBudgetExceeded: return kUnsupported;
    default: return kUsage;
  }
}

std::string answer_line(const Program& p, const AtomSet& m) {
  std::vector<std::string> names;
  for (AtomId a : m)
    if (!p.is_hidden(a)) names.push_back(p.name(a));
  std::sort(names.begin(), names.end());
  std::string line;
  for (std::size_t i = 0; i < names.size(); ++i) line += (i ? " " : "") + names[i];
  return line + "\n";
}

// ---------------------------------------------------------------------------

struct NormalizeCmd {
  Io io;
  bool remove_tautologies = false;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("normalize", "Remove duplicate literals and rules");
    add_io(c, io, true);
    c->add_flag("--remove-tautologies", remove_tautologies, "Also drop rules whose head occurs in the positive body");
  }

  int run() {
    Program p = read_program(io.read());
    io.write(io.format(normalize(p, {.remove_tautologies = remove_tautologies})));
    return kOk;
  }
};

struct DetectCmd {
  Io io;
  bool show = false, stats = false, dump = false, irredundant = false, no_graph_opt = false;
  std::uint64_t budget = 0;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("detect", "Find symmetry generators");
    add_io(c, io, false);
    c->add_flag("--show-generators", show, "Print generators in cycle notation (default)");
    c->add_flag("--stats", stats, "Print generator count, graph size, group order and time");
    c->add_flag("--dump-graph", dump, "Print the coloured graph instead");
    c->add_flag("--irredundant", irredundant, "Drop generators implied by the others");
    c->add_flag("--no-graph-opt", no_graph_opt, "Disable the fact and single-literal graph optimisations");
    c->add_option("--budget", budget, "Search node budget (0: unlimited)");
  }

  int run() {
    Program p = read_program(io.read());
    DetectOptions opts;
    if (no_graph_opt) opts.encode = EncodeOptions::none();
    opts.search.node_budget = budget;
    opts.irredundant = irredundant;
    std::ostringstream out;
    if (dump) {
      encode_graph(normalize(p), opts.encode).dump(out);
      io.write(out.str());
      return kOk;
    }
    auto start = std::chrono::steady_clock::now();
    DetectResult r = detect_symmetries(p, opts);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (show || !stats)
      for (const Permutation& g : r.generators) out << to_cycle_string(g, p) << "\n";
    if (stats) {
      out << "generators: " << r.generators.size() << "\n";
      out << "vertices: " << r.vertices << "\n";
      out << "edges: " << r.edges << "\n";
      out << "group order: " << PermGroup(r.generators).order() << "\n";
      out << "elapsed: " << elapsed << "s\n";
    }
    io.write(out.str());
    return kOk;
  }
};

struct BreakCmd {
  Io io;
  std::size_t size = 0;
  bool full = false, no_opt = false, irredundant = false;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("break", "Append symmetry-breaking constraints");
    add_io(c, io, true);
    auto* sz = c->add_option("--size", size, "Compare only the first k selected atoms per generator");
    c->add_flag("--full", full, "Compare every selected atom (default)")->excludes(sz);
    c->add_flag("--no-opt", no_opt, "Disable the support, cycle and fact reductions");
    c->add_flag("--irredundant", irredundant, "Drop redundant generators first");
  }

  int run() {
    Program p = normalize(read_program(io.read()));
    DetectOptions opts;
    opts.irredundant = irredundant;
    DetectResult r = detect_symmetries(p, opts);
    PcConfig cfg = no_opt ? PcConfig::no_opt() : PcConfig{};
    if (size > 0) cfg.k_supports = size;
    io.write(io.format(build_sbc(p, r.generators, cfg)));
    return kOk;
  }
};

struct SolveCmd {
  Io io;
  bool oracle = false, count = false;
  std::size_t limit = 0;
  std::uint64_t budget = 0;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("solve", "Enumerate answer sets (exit 10: SAT, 20: UNSAT)");
    add_io(c, io, false);
    c->add_flag("--oracle", oracle, "Use the brute-force reference enumerator");
    c->add_option("--limit", limit, "Stop after N answer sets (0: all)");
    c->add_flag("--count", count, "Print only the number of answer sets");
    c->add_option("--budget", budget, "Decision budget for the solver (0: unlimited)");
  }

  int run() {
    Program p = read_program(io.read());
    std::vector<AtomSet> sets;
    if (oracle) {
      sets = enumerate_answer_sets(p, limit);
    } else {
      try {
        sets = solve_tight(p, {.limit = limit, .node_budget = budget}).answer_sets;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotTight) std::cerr << "symbreak: hint: use --oracle for small programs\n";
        throw;
      }
    }
    std::string out;
    if (count) {
      out = std::to_string(sets.size()) + "\n";
    } else {
      for (const AtomSet& m : sets) out += answer_line(p, m);
    }
    io.write(out);
    return sets.empty() ? kUnsat : kSat;
  }
};

struct GenCmd {
  Io io;
  std::string family;
  std::vector<std::string> params;
  std::string variant = "disjunctive";
  std::optional<std::size_t> holes;
  double density = 0.5;
  std::optional<std::uint64_t> seed, shuffle;
  bool csp = false;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("gen", "Generate a benchmark instance");
    c->footer(
        "Families:\n"
        "  pigeons N [--variant=disjunctive|support] [--holes=H]\n"
        "  allint N\n"
        "  ramsey K M N\n"
        "  schur N K\n"
        "  colouring N K [--density=D] [--seed=S]\n"
        "  graceful dw N | graceful kp N M [--csp]");
    c->add_option("family", family, "Benchmark family")->required();
    c->add_option("params", params, "Family parameters");
    c->add_option("--variant", variant, "Pigeon encoding")->check(CLI::IsMember({"disjunctive", "support"}));
    c->add_option("--holes", holes, "Number of holes (default: pigeons - 1)");
    c->add_option("--density", density, "Edge probability for random colouring graphs");
    c->add_option("--seed", seed, "Random graph seed (default: SYMBREAK_SEED or 1)");
    c->add_option("--shuffle", shuffle, "Renumber atoms with this seed");
    c->add_flag("--csp", csp, "For graceful graphs: write the CSP instead of a program");
    c->add_option("-o,--output", io.out_file, "Output file (default: stdout)");
    c->add_flag("--text", io.text, "Write the text format instead of smodels");
  }

  std::size_t param(std::size_t i, const char* what) const {
    if (i >= params.size()) throw Error(ErrorKind::InvalidArgument, family + ": missing parameter " + what);
    return number(params[i], what);
  }

  void expect_params(std::size_t n) const {
    if (params.size() != n)
      throw Error(ErrorKind::InvalidArgument,
                  family + ": expected " + std::to_string(n) + " parameters, got " + std::to_string(params.size()));
  }

  int run() {
    Program p;
    if (family == "pigeons") {
      expect_params(1);
      p = gen_pigeons(param(0, "N"), variant == "support" ? PigeonVariant::Support : PigeonVariant::Disjunctive,
                      holes);
    } else if (family == "allint") {
      expect_params(1);
      p = gen_allint(param(0, "N"));
    } else if (family == "ramsey") {
      expect_params(3);
      p = gen_ramsey(param(0, "K"), param(1, "M"), param(2, "N"));
    } else if (family == "schur") {
      expect_params(2);
      p = gen_schur(param(0, "N"), param(1, "K"));
    } else if (family == "colouring") {
      expect_params(2);
      p = gen_colouring(random_graph(param(0, "N"), density, seed.value_or(default_seed())), param(1, "K"));
    } else if (family == "graceful") {
      if (params.empty()) throw Error(ErrorKind::InvalidArgument, "graceful: expected dw N or kp N M");
      Graph g;
      if (params[0] == "dw") {
        params.erase(params.begin());
        expect_params(1);
        g = double_wheel(param(0, "N"));
      } else if (params[0] == "kp") {
        params.erase(params.begin());
        expect_params(2);
        g = clique_path(param(0, "N"), param(1, "M"));
      } else {
        throw Error(ErrorKind::InvalidArgument, "graceful: unknown graph family '" + params[0] + "'");
      }
      CspSpec spec = gen_graceful(g);
      if (csp) {
        io.write(to_csp_text(spec));
        return kOk;
      }
      p = encode_csp(spec).program;
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown family '" + family + "'");
    }
    if (shuffle) p = shuffle_atoms(p, *shuffle);
    io.write(io.format(p));
    return kOk;
  }
};

struct CheckPropCmd {
  Io io;
  std::string encoder;
  std::size_t trials = 1000;
  std::optional<std::uint64_t> seed;
  bool witness = false;

  void attach(CLI::App& app) {
    auto* c = app.add_subcommand("check-prop", "Compare unit propagation on an encoding with its oracle");
    c->add_option("--encoder", encoder, "direct, support, alldiff, pair, dfa, allowed or pairwise")->required();
    c->add_option("--trials", trials, "Number of random states");
    c->add_option("--seed", seed, "Seed (default: SYMBREAK_SEED or 1)");
    c->add_option("-f,--file", io.in_file, "Fixed CSP instance (default: random instances)");
    c->add_flag("--witness", witness, "Print the first state where propagation differs");
    c->add_option("-o,--output", io.out_file, "Output file (default: stdout)");
  }

  int run() {
    auto enc = parse_encoder(encoder);
    if (!enc) throw Error(ErrorKind::InvalidArgument, "unknown encoder '" + encoder + "'");
    std::uint64_t s = seed.value_or(default_seed());
    StrengthReport r = io.in_file.empty() ? strength_compare(*enc, trials, s)
                                          : strength_compare(*enc, read_csp(io.read()), trials, s);
    std::ostringstream out;
    out << "encoder: " << to_string(*enc) << "\n";
    out << "oracle: " << (reference_level(*enc) == Consistency::ArcBinary ? "ac-binary" : "gac") << "\n";
    out << "trials: " << r.trials() << "\n";
    out << "equal: " << r.equal << "\n";
    out << "up-weaker: " << r.up_weaker << "\n";
    out << "up-stronger: " << r.up_stronger << "\n";
    if (witness)
      for (const auto& w : {r.first_stronger, r.first_weaker}) {
        if (!w) continue;
        out << "% " << (w->verdict == Verdict::UpStronger ? "up-stronger" : "up-weaker") << " state:";
        for (std::size_t v = 0; v < w->domains.size(); ++v) {
          out << " " << w->spec.vars[v].name << "={";
          bool first = true;
          for (std::size_t i = 0; i < w->domains[v].size(); ++i)
            if (w->domains[v][i]) {
              out << (first ? "" : ",") << i + 1;
              first = false;
            }
          out << "}";
        }
        out << "\n" << to_csp_text(w->spec);
      }
    io.write(out.str());
    return r.up_stronger == 0 ? kOk : kPropertyViolated;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry detection and breaking for ground logic programs"};
  app.require_subcommand(1);
  NormalizeCmd normalize_cmd;
  DetectCmd detect_cmd;
  BreakCmd break_cmd;
  SolveCmd solve_cmd;
  GenCmd gen_cmd;
  CheckPropCmd check_cmd;
  normalize_cmd.attach(app);
  detect_cmd.attach(app);
  break_cmd.attach(app);
  solve_cmd.attach(app);
  gen_cmd.attach(app);
  check_cmd.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (app.got_subcommand("normalize")) return normalize_cmd.run();
    if (app.got_subcommand("detect")) return detect_cmd.run();
    if (app.got_subcommand("break")) return break_cmd.run();
    if (app.got_subcommand("solve")) return solve_cmd.run();
    if (app.got_subcommand("gen")) return gen_cmd.run();
    if (app.got_subcommand("check-prop")) return check_cmd.run();
  } catch (const Error& e) {
    std::cerr << "symbreak: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "symbreak: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
