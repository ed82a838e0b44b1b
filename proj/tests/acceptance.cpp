// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bidir/instantiate.hpp"
#include "bidir/oracle.hpp"
#include "bidir/subtype.hpp"
#include "bidir/surface.hpp"
#include "bidir/testkit.hpp"
#include "bidir/typecheck.hpp"

using namespace bidir;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int failed = 0;

void report(int n, bool pass, const std::string& detail) {
  std::printf("%s %d: %s\n", pass ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  failed += !pass;
}

Context decls(const std::string& text) {
  Context g;
  for (const TermDecl& d : parse_declarations(text)) g = g.extended(Entry::term_var(d.name, d.type));
  return g;
}

bool checks(const Context& g, const std::string& term, const std::string& type, Mode mode = Mode::DefaultInference) {
  Options o;
  o.mode = mode;
  Session s(o);
  try {
    check(s, g, parse_term(term), parse_closed_type(type));
  } catch (const TypeError&) {
    return false;
  }
  return s.violations().empty();
}

void instantiation_example() {
  // The solution must be t -> t for a single unsolved t.
  auto start = Clock::now();
  Session s;
  Context g({Entry::universal("c"), Entry::unsolved("e"), Entry::term_var("x", Type::unit())});
  Context d = inst_right(s, g, parse_type("forall b. b -> b"), "e");
  double ms = ms_since(start);
  Type sol = apply_ctx(d, Type::exists("e"));
  bool shape = sol.is_arrow() && sol.domain() == sol.codomain() && sol.domain().is_exists() &&
               d.is_unsolved(sol.domain().name()) && unsolved_count(d) == 1 && extends(g, d) &&
               s.violations().empty();
  report(1, shape && ms < 1.0,
         "instantiation of ?e against forall b. b -> b gives ?e = " + print_type(sol) + " in " + std::to_string(ms) +
             " ms (limit 1 ms)");
}

void application_example() {
  auto start = Clock::now();
  Context g = decls("x : forall a. (forall b. b -> b) -> a -> a");
  bool algorithm = checks(g, "x (\\y. y)", "1 -> 1");
  bool oracle = decl_check(DeclContext(g), parse_term("x (\\y. y)"), parse_type("1 -> 1"), Universe{0, {}});
  double ms = ms_since(start);
  report(2, algorithm && oracle && ms < 10.0,
         std::string("x (\\y. y) <= 1 -> 1: algorithm ") + (algorithm ? "accepts" : "rejects") + ", depth-0 oracle " +
             (oracle ? "accepts" : "rejects") + ", " + std::to_string(ms) + " ms (limit 10 ms)");
}

void eta_example() {
  Context g = decls("f : 1 -> forall a. a");
  bool reduct = checks(g, "f", "1 -> 1");
  bool expanded = checks(g, "\\x. f x", "1 -> 1");
  testkit::SuiteReport suite = testkit::eta_suite(500, 3);
  for (const std::string& line : suite.lines) std::printf("  %s\n", line.c_str());
  bool pass = reduct && expanded && suite.instances == 500 && suite.failures == 0 && suite.violations == 0;
  report(3, pass,
         std::string("f and \\x. f x against 1 -> 1: ") + (reduct && expanded ? "both check" : "not both check") +
             "; eta suite " + std::to_string(suite.instances) + " instances, " + std::to_string(suite.failures) +
             " property failures (" + std::to_string(suite.oracle_confirmed) +
             " reproduced by the declarative oracle), " + std::to_string(suite.violations) + " invariant violations");
}

void occurs_check() {
  Session s;
  Context g({Entry::unsolved("e")});
  std::string outcome = "succeeded";
  bool pass = false;
  try {
    subtype(s, g, Type::exists("e"), Type::arrow(Type::exists("e"), Type::exists("e")));
  } catch (const TypeError& e) {
    pass = e.kind() == TypeError::Kind::OccursCheck;
    outcome = to_string(e.kind());
  }
  report(4, pass, "?e <: ?e -> ?e fails with " + outcome);
}

testkit::DiffConfig diff_config() {
  testkit::DiffConfig c;
  c.cases = 1000;
  c.seed = 7;
  c.term_size = 8;
  c.depth = 2;
  return c;
}

void print_lines(const std::vector<std::string>& lines) {
  for (std::size_t i = 0; i < lines.size() && i < 20; ++i) std::printf("  %s\n", lines[i].c_str());
}

std::size_t total_violations = 0;

void differential_soundness() {
  auto start = Clock::now();
  testkit::DiffConfig c = diff_config();
  testkit::DiffReport r = testkit::differential_run(c);
  double s = ms_since(start) / 1000.0;
  total_violations += r.violations;
  print_lines(r.lines);
  std::printf("  %s\n", r.summary(c.seed).c_str());
  report(5, r.cases == 1000 && r.soundness_failures == 0 && s < 60.0,
         std::to_string(r.cases) + " judgments, " + std::to_string(r.algorithm_accepted) +
             " accepted by the algorithm, " + std::to_string(r.soundness_failures) + " rejected by the oracle, " +
             std::to_string(r.cap_hits) + " oracle cap hits, " + std::to_string(s) + " s (limit 60 s)");
}

void differential_completeness() {
  auto start = Clock::now();
  testkit::DiffConfig c = diff_config();
  testkit::DiffReport r = testkit::completeness_run(c, 1000, 20000);
  double s = ms_since(start) / 1000.0;
  total_violations += r.violations;
  print_lines(r.lines);
  std::printf("  %s\n", r.summary(c.seed).c_str());
  report(6, r.oracle_accepted >= 1000 && r.completeness_failures == 0 && s < 120.0,
         std::to_string(r.oracle_accepted) + " oracle-accepted evar-free judgments, " +
             std::to_string(r.completeness_failures) + " rejected by the algorithm, " + std::to_string(s) +
             " s (limit 120 s)");
}

void invariants() {
  report(7, total_violations == 0,
         std::to_string(total_violations) + " invariant violations across the differential runs");
}

void robustness() {
  testkit::SuiteReport anno = testkit::annotation_removal_suite(500, 5);
  testkit::SuiteReport sub = testkit::substitution_suite(500, 5);
  print_lines(anno.lines);
  print_lines(sub.lines);
  bool pass = anno.instances == 500 && sub.instances == 500 && anno.failures + anno.violations == 0 &&
              sub.failures + sub.violations == 0;
  report(8, pass,
         "annotation removal " + std::to_string(anno.instances) + " instances, " + std::to_string(anno.failures) +
             " failures; substitution " + std::to_string(sub.instances) + " instances, " +
             std::to_string(sub.failures) + " failures; " + std::to_string(anno.violations + sub.violations) +
             " invariant violations");
}

void no_inference() {
  Options o;
  o.mode = Mode::NoInference;
  Session s(o);
  bool lambda_fails = false;
  try {
    synth(s, Context(), parse_term("\\x. x"));
  } catch (const TypeError& e) {
    lambda_fails = e.kind() == TypeError::Kind::CannotSynthesize;
  }
  bool annotated = checks(Context(), "(\\x. x : 1 -> 1)", "1 -> 1", Mode::NoInference);
  std::vector<std::string> rules;
  s.set_trace_sink([&](std::string_view line) { rules.emplace_back(line.substr(0, line.find(':'))); });
  Context d = check(s, Context({Entry::unsolved("e")}), Term::unit(), Type::exists("e"));
  bool solved = apply_ctx(d, Type::exists("e")) == Type::unit() && rules == std::vector<std::string>{"1I^"};
  report(9, lambda_fails && annotated && solved && s.violations().empty(),
         std::string("\\x. x ") + (lambda_fails ? "cannot synthesize" : "synthesizes") + "; (\\x. x : 1 -> 1) " +
             (annotated ? "checks" : "does not check") + "; () <= ?e gives " + print_context(d));
}

}  // namespace

int main() {
  instantiation_example();
  application_example();
  eta_example();
  occurs_check();
  differential_soundness();
  differential_completeness();
  invariants();
  robustness();
  no_inference();
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
