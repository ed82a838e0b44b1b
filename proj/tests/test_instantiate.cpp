#include <gtest/gtest.h>

#include "bidir/instantiate.hpp"
#include "bidir/testkit.hpp"
#include "support.hpp"

using namespace bidir;
using bidir::test::ctx;
using bidir::test::ty;

namespace {

std::vector<std::string> unsolved_names(const Context& g) {
  std::vector<std::string> out;
  for (const Entry& e : g.entries()) {
    if (e.kind == Entry::Kind::Unsolved) out.push_back(e.name);
  }
  return out;
}

struct Problem {
  Context g;
  std::string evar;
  Type a;
};

// An instantiation problem meeting the preconditions: evar unsolved, `a`
// applied, well-formed and free of the evar.
std::optional<Problem> gen_problem(testkit::Rng& rng, bool monotype) {
  testkit::ContextGenOptions options;
  options.evars = 4;
  Context g = testkit::gen_context(rng, options);
  std::vector<std::string> open = unsolved_names(g);
  if (open.empty()) return std::nullopt;
  std::string evar = open[rng() % open.size()];
  testkit::TypeScope scope = testkit::scope_of(g);
  Type a = monotype ? testkit::gen_monotype(rng, 5, scope) : testkit::gen_type(rng, 6, 2, scope);
  a = apply_ctx(g, a);
  if (occurs_evar(evar, a)) return std::nullopt;
  return Problem{g, evar, a};
}

}  // namespace

TEST(InstLeft, Solve) {
  Session s;
  EXPECT_EQ(print_context(inst_left(s, ctx({"b", "?a", "x : 1"}), "a", ty("1"))), "b, ?a = 1, x : 1");
  EXPECT_EQ(print_context(inst_left(s, ctx({"?a"}), "a", ty("(1 -> 1) -> 1"))), "?a = (1 -> 1) -> 1");
}

TEST(InstLeft, Reach) {
  Session s;
  EXPECT_EQ(print_context(inst_left(s, ctx({"?a", "?b"}), "a", ty("?b"))), "?a, ?b = ?a");
}

TEST(InstLeft, ArrowArticulates) {
  Session s;
  // ?b is declared after ?a, so the arrow cannot be solved whole.
  Context g = ctx({"?a", "?b"});
  Context d = inst_left(s, g, "a", ty("?b -> 1"));
  EXPECT_TRUE(extends(g, d));
  EXPECT_EQ(unsolved_count(d), 1u);
  Type sol = apply_ctx(d, ty("?a"));
  ASSERT_EQ(sol.kind(), Type::Kind::Arrow);
  EXPECT_EQ(sol.domain().kind(), Type::Kind::Exists);
  EXPECT_EQ(sol.domain(), apply_ctx(d, ty("?b")));
  EXPECT_EQ(sol.codomain(), ty("1"));
}

TEST(InstLeft, AllRHasNoMonotype) {
  // No monotype is below forall b. b -> b: the universal is out of reach of
  // the articulated existentials.
  Session s;
  try {
    inst_left(s, ctx({"?a"}), "a", ty("forall b. b -> b"));
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.kind(), TypeError::Kind::NoRuleApplies);
  }
  Context d = inst_left(s, ctx({"?a"}), "a", ty("forall b. 1 -> 1"));
  EXPECT_EQ(print_context(d), "?a = 1 -> 1");
}

TEST(InstLeft, UniversalOutOfScopeFails) {
  Session s;
  try {
    inst_left(s, ctx({"?a", "b"}), "a", ty("b"));
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.kind(), TypeError::Kind::NoRuleApplies);
  }
}

TEST(InstRight, SolveAndReach) {
  Session s;
  EXPECT_EQ(print_context(inst_right(s, ctx({"?a"}), ty("1"), "a")), "?a = 1");
  EXPECT_EQ(print_context(inst_right(s, ctx({"?a", "?b"}), ty("?b"), "a")), "?a, ?b = ?a");
}

TEST(InstRight, ForallLeavesUnconstrained) {
  Session s;
  Context g = ctx({"c", "?b", "x : 1"});
  EXPECT_EQ(print_context(inst_right(s, g, ty("forall a. a"), "b")), print_context(g));
}

TEST(InstRight, MonomorphicApproximation) {
  Session s;
  Context g = ctx({"?a"});
  Context d = inst_right(s, g, ty("forall b. b -> b"), "a");
  EXPECT_TRUE(extends(g, d));
  Type sol = apply_ctx(d, ty("?a"));
  ASSERT_EQ(sol.kind(), Type::Kind::Arrow);
  EXPECT_EQ(sol.domain(), sol.codomain());
  EXPECT_EQ(sol.domain().kind(), Type::Kind::Exists);
  EXPECT_EQ(unsolved_count(d), 1u);
  EXPECT_TRUE(d.is_unsolved(sol.domain().name()));
  EXPECT_TRUE(s.violations().empty());
}

TEST(Instantiate, MonotypesSolveOneVariable) {
  testkit::Rng rng(21);
  int tried = 0;
  for (int i = 0; i < 600; ++i) {
    auto p = gen_problem(rng, true);
    if (!p) continue;
    for (bool left : {true, false}) {
      Session s;
      Context d;
      try {
        d = left ? inst_left(s, p->g, p->evar, p->a) : inst_right(s, p->g, p->a, p->evar);
      } catch (const TypeError&) {
        continue;
      }
      ++tried;
      EXPECT_TRUE(extends(p->g, d));
      EXPECT_EQ(unsolved_count(p->g), unsolved_count(d) + 1) << print_context(p->g) << " / " << print_type(p->a);
      EXPECT_TRUE(s.violations().empty());
    }
  }
  EXPECT_GT(tried, 100);
}

TEST(Instantiate, SizeAndLeftUnsolvedPreservation) {
  testkit::Rng rng(22);
  int tried = 0;
  for (int i = 0; i < 600; ++i) {
    auto p = gen_problem(rng, i % 2 == 0);
    if (!p) continue;
    Session s;
    Context d;
    try {
      d = i % 4 < 2 ? inst_left(s, p->g, p->evar, p->a) : inst_right(s, p->g, p->a, p->evar);
    } catch (const TypeError&) {
      continue;
    }
    ++tried;
    EXPECT_TRUE(extends(p->g, d));
    for (int k = 0; k < 5; ++k) {
      Type b = apply_ctx(p->g, testkit::gen_type(rng, 6, 1, testkit::scope_of(p->g)));
      if (occurs_evar(p->evar, b)) continue;
      EXPECT_EQ(plain_size(b), plain_size(apply_ctx(d, b))) << print_type(b);
    }
    Split sp = split_at(p->g, EntryKey::existential(p->evar));
    for (const std::string& left : unsolved_names(sp.left)) EXPECT_TRUE(d.is_unsolved(left)) << left;
  }
  EXPECT_GT(tried, 100);
}
