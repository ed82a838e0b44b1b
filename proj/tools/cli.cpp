#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "bidir/context.hpp"
#include "bidir/oracle.hpp"
#include "bidir/session.hpp"
#include "bidir/surface.hpp"
#include "bidir/testkit.hpp"
#include "bidir/typecheck.hpp"

namespace bidir::cli {

namespace {

struct JudgeFlags {
  std::string mode = "infer";
  std::string against;
  std::string context;
  bool trace = false;
  bool oracle = false;
  std::size_t depth = 1;
  std::string mutate;
};

Mode parse_mode(const std::string& mode) {
  return mode == "no-inference" ? Mode::NoInference : Mode::DefaultInference;
}

// Renames existentials to ?a1, ?a2, ... in order of first appearance.
Type for_display(const Type& a) {
  std::vector<std::string> order;
  std::function<void(const Type&)> walk = [&](const Type& t) {
    switch (t.kind()) {
      case Type::Kind::Exists:
        if (std::find(order.begin(), order.end(), t.name()) == order.end()) order.push_back(t.name());
        break;
      case Type::Kind::Forall:
        walk(t.body());
        break;
      case Type::Kind::Arrow:
        walk(t.domain());
        walk(t.codomain());
        break;
      default:
        break;
    }
  };
  walk(a);
  Type out = a;
  for (std::size_t i = 0; i < order.size(); ++i) out = subst_evar(out, order[i], Type::exists("_" + std::to_string(i + 1)));
  for (std::size_t i = 0; i < order.size(); ++i) {
    out = subst_evar(out, "_" + std::to_string(i + 1), Type::exists("a" + std::to_string(i + 1)));
  }
  return out;
}

// `origin:line:col: error: message`, then the offending line with carets.
void render(std::ostream& err, const std::string& origin, std::string_view source, std::optional<SourceSpan> span,
            const std::string& message) {
  if (!span) {
    err << origin << ": error: " << message << "\n";
    return;
  }
  std::size_t start = std::min(span->start, source.size());
  std::size_t end = std::max(start, std::min(span->end, source.size()));
  std::size_t line_start = 0;
  for (std::size_t i = 0; i < start; ++i) {
    if (source[i] == '\n') line_start = i + 1;
  }
  std::size_t line_end = source.find('\n', start);
  if (line_end == std::string_view::npos) line_end = source.size();
  std::size_t line = 1 + std::count(source.begin(), source.begin() + line_start, '\n');
  std::size_t col = 1 + start - line_start;
  err << origin << ":" << line << ":" << col << ": error: " << message << "\n";
  err << "  " << source.substr(line_start, line_end - line_start) << "\n";
  std::size_t width = std::max<std::size_t>(1, std::min(end, line_end) - start);
  err << "  " << std::string(start - line_start, ' ') << std::string(width, '^') << "\n";
}

int report_violations(const Session& s, std::ostream& err) {
  for (const Violation& v : s.violations()) err << "internal invariant violation: " << v.invariant << ": " << v.detail << "\n";
  return kInvariantViolation;
}

int judge(const std::string& source, const std::string& origin, const JudgeFlags& flags, std::ostream& out,
          std::ostream& err) {
  Context g;
  std::optional<Type> against;
  Term e = Term::unit();
  try {
    for (const TermDecl& d : parse_declarations(flags.context)) g = g.extended(Entry::term_var(d.name, d.type));
  } catch (const ParseError& ex) {
    render(err, "--context", flags.context, ex.span(), ex.what());
    return kParseError;
  }
  try {
    if (!flags.against.empty()) against = parse_closed_type(flags.against);
  } catch (const ParseError& ex) {
    render(err, "--against", flags.against, ex.span(), ex.what());
    return kParseError;
  }
  try {
    e = parse_term(source);
  } catch (const ParseError& ex) {
    render(err, origin, source, ex.span(), ex.what());
    return kParseError;
  }

  Options options;
  options.mode = parse_mode(flags.mode);
  options.skip_forall_r_truncation = flags.mutate == "skip-forall-r-truncation";
  Session s(options);
  if (flags.trace) s.set_trace_sink([&out](std::string_view line) { out << line << "\n"; });

  std::optional<Context> delta;
  std::optional<Type> result;
  std::optional<TypeError> failure;
  try {
    if (against) {
      delta = check(s, g, e, *against);
      result = *against;
    } else {
      Synthesized r = synth(s, g, e);
      delta = r.context;
      result = apply_ctx(r.context, r.type);
    }
  } catch (const TypeError& ex) {
    failure = ex;
  }

  if (!s.violations().empty()) return report_violations(s, err);
  if (failure) {
    render(err, origin, source, failure->span(), std::string(to_string(failure->kind())) + ": " + failure->what());
  } else {
    out << "ok : " << print_type(for_display(*result)) << "\n";
  }

  if (flags.oracle) {
    Universe u{flags.depth, {}};
    if (delta) u.seeds = testkit::witness_for(s, *delta).seeds;
    Oracle oracle(u, options.mode);
    DeclContext psi(g);
    bool accepts = against ? oracle.check(psi, e, *against) : !oracle.synth(psi, e).empty();
    out << "oracle (depth " << flags.depth << ") : " << (accepts ? "accepts" : "rejects")
        << (accepts == !failure ? ", agrees" : ", disagrees") << (oracle.cap_hit() ? " (result set capped)" : "")
        << "\n";
  }
  return failure ? kTypeError : kOk;
}

void add_judge_flags(CLI::App* cmd, JudgeFlags& flags) {
  cmd->add_option("--mode", flags.mode, "Typing mode")->check(CLI::IsMember({"infer", "no-inference"}));
  cmd->add_option("--against", flags.against, "Check against TYPE instead of synthesizing");
  cmd->add_option("--context", flags.context, "Declarations `x : TYPE; ...` in scope");
  cmd->add_flag("--trace", flags.trace, "Print one line per rule firing");
  cmd->add_flag("--oracle", flags.oracle, "Also ask the declarative oracle");
  cmd->add_option("--depth", flags.depth, "Oracle monotype depth");
  cmd->add_option("--mutate", flags.mutate)->group("")->check(CLI::IsMember({"skip-forall-r-truncation"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bidirectional typechecker for a higher-rank lambda calculus", "bidir"};
  app.require_subcommand(1);

  JudgeFlags flags;
  std::string file;
  CLI::App* check_cmd = app.add_subcommand("check", "Typecheck the expression in FILE");
  check_cmd->add_option("file", file, "Source file")->required();
  add_judge_flags(check_cmd, flags);

  std::string expr;
  CLI::App* infer_cmd = app.add_subcommand("infer", "Typecheck a literal expression");
  infer_cmd->add_option("expr", expr, "Expression")->required();
  add_judge_flags(infer_cmd, flags);

  testkit::DiffConfig fuzz;
  std::string fuzz_mode = "infer";
  std::string fuzz_mutate;
  bool verbose = false;
  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "Differential test against the declarative oracle");
  fuzz_cmd->add_option("--cases", fuzz.cases, "Number of generated judgments");
  fuzz_cmd->add_option("--seed", fuzz.seed, "Run seed");
  fuzz_cmd->add_option("--size", fuzz.term_size, "Maximum term size");
  fuzz_cmd->add_option("--depth", fuzz.depth, "Oracle monotype depth");
  fuzz_cmd->add_option("--mode", fuzz_mode, "Typing mode")->check(CLI::IsMember({"infer", "no-inference"}));
  fuzz_cmd->add_flag("--verbose", verbose, "Print every report line, not just the first 50");
  fuzz_cmd->add_option("--mutate", fuzz_mutate)->group("")->check(CLI::IsMember({"skip-forall-r-truncation"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kParseError;
  }

  if (*check_cmd) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      err << file << ": error: cannot read file\n";
      return kParseError;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return judge(text.str(), file, flags, out, err);
  }
  if (*infer_cmd) return judge(expr, "<expr>", flags, out, err);

  fuzz.mode = parse_mode(fuzz_mode);
  fuzz.skip_forall_r_truncation = fuzz_mutate == "skip-forall-r-truncation";
  testkit::DiffReport report = testkit::differential_run(fuzz);
  std::size_t shown = verbose ? report.lines.size() : std::min<std::size_t>(report.lines.size(), 50);
  for (std::size_t i = 0; i < shown; ++i) out << report.lines[i] << "\n";
  if (shown < report.lines.size()) out << "... " << report.lines.size() - shown << " more lines\n";
  out << report.summary(fuzz.seed) << "\n";
  return report.disagreements() == 0 && report.violations == 0 ? kOk : 1;
}

}  // namespace bidir::cli
