#include <gtest/gtest.h>

#include "bidir/syntax.hpp"
#include "bidir/testkit.hpp"
#include "support.hpp"

using namespace bidir;
using bidir::test::ty;

namespace {

// Renames every binder to a name fixed by its nesting depth; two types are
// alpha-equivalent iff their renamings are literally equal.
Type rename_by_depth(const Type& a, std::vector<std::pair<std::string, std::string>>& env) {
  switch (a.kind()) {
    case Type::Kind::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == a.name()) return Type::var(it->second);
      }
      return Type::var("free_" + a.name());
    case Type::Kind::Forall: {
      std::string fixed = "bound_" + std::to_string(env.size());
      env.emplace_back(a.name(), fixed);
      Type body = rename_by_depth(a.body(), env);
      env.pop_back();
      return Type::forall(fixed, body);
    }
    case Type::Kind::Arrow:
      return Type::arrow(rename_by_depth(a.domain(), env), rename_by_depth(a.codomain(), env));
    default:
      return a;
  }
}

bool alpha_oracle(const Type& a, const Type& b) {
  std::vector<std::pair<std::string, std::string>> ea, eb;
  return rename_by_depth(a, ea) == rename_by_depth(b, eb);
}

testkit::TypeScope ab_scope() { return {{"a", "b"}, {"e1"}}; }

}  // namespace

TEST(SubstTyvar, ReplacesFreeOccurrences) {
  EXPECT_EQ(subst_tyvar(ty("a -> a"), "a", Type::unit()), ty("1 -> 1"));
  EXPECT_EQ(subst_tyvar(ty("forall a. a -> b"), "b", Type::unit()), ty("forall a. a -> 1"));
}

TEST(SubstTyvar, AvoidsCapture) {
  Type out = subst_tyvar(ty("forall b. b -> a"), "a", Type::var("b"));
  ASSERT_TRUE(out.is_forall());
  EXPECT_NE(out.name(), "b");
  EXPECT_EQ(free_tyvars(out), NameSet{"b"});
  EXPECT_TRUE(alpha_oracle(out, ty("forall c. c -> b")));
}

TEST(SubstTyvar, Properties) {
  testkit::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Type a = testkit::gen_type(rng, 8, 2, ab_scope());
    EXPECT_TRUE(alpha_equiv(subst_tyvar(a, "a", Type::var("a")), a));

    Type b = testkit::gen_type(rng, 4, 1, ab_scope());
    NameSet allowed = free_tyvars(a);
    allowed.erase("a");
    for (const auto& v : free_tyvars(b)) allowed.insert(v);
    for (const auto& v : free_tyvars(subst_tyvar(a, "a", b))) EXPECT_TRUE(allowed.contains(v)) << v;

    Type tau = testkit::gen_monotype(rng, 5, ab_scope());
    EXPECT_EQ(plain_size(subst_tyvar(a, "a", tau)),
              plain_size(a) + tyvar_occurrences(a, "a") * (plain_size(tau) - 1));
  }
}

TEST(Monotype, Examples) {
  EXPECT_TRUE(is_monotype(ty("1 -> ?a")));
  EXPECT_FALSE(is_monotype(ty("forall a. a")));
  EXPECT_FALSE(is_monotype(ty("1 -> (forall a. a) -> 1")));
}

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_evars(ty("?a -> ?b")), (NameSet{"a", "b"}));
  EXPECT_EQ(free_tyvars(ty("forall a. a -> b")), NameSet{"b"});
  EXPECT_TRUE(free_evars(ty("forall a. a")).empty());
  EXPECT_TRUE(occurs_evar("a", ty("1 -> ?a")));
  EXPECT_FALSE(occurs_evar("b", ty("1 -> ?a")));
}

TEST(PlainSize, Examples) {
  EXPECT_EQ(plain_size(ty("1")), 1u);
  EXPECT_EQ(plain_size(ty("1 -> 1")), 3u);
  EXPECT_EQ(plain_size(ty("forall a. a -> a")), 4u);
  EXPECT_EQ(forall_count(ty("(forall a. a) -> forall b. b")), 2u);
}

TEST(AlphaEquiv, Examples) {
  EXPECT_TRUE(alpha_equiv(ty("forall a. a"), ty("forall b. b")));
  EXPECT_FALSE(alpha_equiv(ty("?a"), ty("?b")));
  EXPECT_TRUE(alpha_equiv(ty("forall a. forall b. a -> b"), ty("forall b. forall a. b -> a")));
  EXPECT_FALSE(alpha_equiv(ty("forall a. forall b. a -> b"), ty("forall a. forall b. b -> a")));
  EXPECT_FALSE(alpha_equiv(ty("forall a. b"), ty("forall b. b")));
}

TEST(AlphaEquiv, AgreesWithRenamingOracle) {
  testkit::Rng rng(5);
  int equal = 0;
  for (int i = 0; i < 2000; ++i) {
    Type a = testkit::gen_type(rng, 5, 2, ab_scope());
    Type b = testkit::gen_type(rng, 5, 2, ab_scope());
    if (i % 3 == 0) b = a.is_forall() ? Type::forall("z", subst_tyvar(a.body(), a.name(), Type::var("z"))) : a;
    bool expected = alpha_oracle(a, b);
    equal += expected;
    EXPECT_EQ(alpha_equiv(a, b), expected) << i;
    EXPECT_EQ(canonical_key(a) == canonical_key(b), expected) << i;
  }
  EXPECT_GT(equal, 100);
}

TEST(FreshVariant, AvoidsTakenNames) {
  EXPECT_EQ(fresh_variant("x", {}), "x");
  EXPECT_EQ(fresh_variant("x", {"x", "x1"}), "x2");
}

TEST(Terms, SizeAndFreeVars) {
  Term e = bidir::test::tm("\\x. f x y");
  EXPECT_EQ(term_size(e), 6u);
  EXPECT_EQ(free_term_vars(e), (NameSet{"f", "y"}));
  EXPECT_EQ(term_var_names(e), (NameSet{"f", "x", "y"}));
}

TEST(Terms, SubstitutionAvoidsCapture) {
  Term e = bidir::test::tm("\\y. x y");
  Term out = subst_term(e, "x", Term::var("y"));
  ASSERT_TRUE(out.is_lam());
  EXPECT_NE(out.name(), "y");
  EXPECT_EQ(free_term_vars(out), NameSet{"y"});
  EXPECT_TRUE(term_equal(subst_term(bidir::test::tm("\\x. x"), "x", Term::unit()), bidir::test::tm("\\x. x")));
}
