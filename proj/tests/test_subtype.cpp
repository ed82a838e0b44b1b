#include <gtest/gtest.h>

#include "bidir/subtype.hpp"
#include "bidir/testkit.hpp"
#include "support.hpp"

using namespace bidir;
using bidir::test::ctx;
using bidir::test::ty;

namespace {

TypeError::Kind failure(const Context& g, const Type& a, const Type& b) {
  Session s;
  try {
    subtype(s, g, a, b);
  } catch (const TypeError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "subtyping succeeded";
  return TypeError::Kind::NoRuleApplies;
}

}  // namespace

TEST(Subtype, Unit) {
  Session s;
  Context g = ctx({"a", "?b"});
  EXPECT_EQ(print_context(subtype(s, g, ty("1"), ty("1"))), print_context(g));
}

TEST(Subtype, ResultQuantifier) {
  Session s;
  Context g = ctx({"f : 1 -> forall a. a"});
  Context d = subtype(s, g, ty("1 -> forall a. a"), ty("1 -> 1"));
  EXPECT_TRUE(extends(g, d));
  EXPECT_TRUE(s.violations().empty());
}

TEST(Subtype, OccursCheck) {
  EXPECT_EQ(failure(ctx({"?a"}), ty("?a"), ty("?a -> ?a")), TypeError::Kind::OccursCheck);
  EXPECT_EQ(failure(ctx({"?a"}), ty("?a -> 1"), ty("?a")), TypeError::Kind::OccursCheck);
}

TEST(Subtype, Mismatch) {
  EXPECT_EQ(failure(ctx({"a"}), ty("a"), ty("1")), TypeError::Kind::Mismatch);
  EXPECT_EQ(failure(ctx({}), ty("1 -> 1"), ty("forall a. a -> a")), TypeError::Kind::Mismatch);
  EXPECT_EQ(failure(ctx({}), ty("1"), ty("1 -> 1")), TypeError::Kind::Mismatch);
}

TEST(Subtype, InstantiatesLeftQuantifier) {
  Session s;
  Context d = subtype(s, ctx({}), ty("forall a. a -> a"), ty("1 -> 1"));
  EXPECT_TRUE(d.empty());
  ASSERT_FALSE(s.solutions().empty());
  bool unit = false;
  for (const auto& [evar, sol] : s.solutions()) unit = unit || sol == Type::unit();
  EXPECT_TRUE(unit);
}

TEST(Subtype, BothQuantified) {
  Session s;
  Context d = subtype(s, ctx({}), ty("forall a. a -> a"), ty("forall b. b -> b"));
  EXPECT_TRUE(d.empty());
  EXPECT_EQ(failure(ctx({}), ty("forall b. b -> b"), ty("forall a. forall c. a -> c")), TypeError::Kind::Mismatch);
}

TEST(Subtype, ContravariantDomain) {
  Session s;
  EXPECT_NO_THROW(subtype(s, ctx({}), ty("(1 -> 1) -> 1"), ty("(forall a. a -> a) -> 1")));
  EXPECT_EQ(failure(ctx({}), ty("(forall a. a -> a) -> 1"), ty("(1 -> 1) -> 1")), TypeError::Kind::Mismatch);
}

TEST(Subtype, MonotypeMonotonicityAndExtension) {
  testkit::Rng rng(31);
  testkit::ContextGenOptions options;
  options.evars = 4;
  int succeeded = 0;
  for (int i = 0; i < 1000; ++i) {
    Context g = testkit::gen_context(rng, options);
    testkit::TypeScope scope = testkit::scope_of(g);
    bool mono = i % 2 == 0;
    Type a = apply_ctx(g, mono ? testkit::gen_monotype(rng, 5, scope) : testkit::gen_type(rng, 6, 2, scope));
    Type b = apply_ctx(g, mono ? testkit::gen_monotype(rng, 5, scope) : testkit::gen_type(rng, 6, 2, scope));
    Session s;
    Context d;
    try {
      d = subtype(s, g, a, b);
    } catch (const TypeError&) {
      EXPECT_TRUE(s.violations().empty());
      continue;
    }
    ++succeeded;
    EXPECT_TRUE(extends(g, d)) << print_type(a) << " <: " << print_type(b);
    EXPECT_TRUE(s.violations().empty()) << s.violations().front().invariant;
    if (mono) {
      EXPECT_LE(unsolved_count(d), unsolved_count(g));
    }
  }
  EXPECT_GT(succeeded, 100);
}
