#include <gtest/gtest.h>

#include <functional>

#include "bidir/context.hpp"
#include "bidir/testkit.hpp"
#include "support.hpp"

using namespace bidir;
using bidir::test::ctx;
using bidir::test::ty;

namespace {

// Substitutes solved existentials one step at a time until nothing changes.
Type naive_apply(const Context& g, Type a) {
  for (;;) {
    Type before = a;
    for (const Entry& e : g.entries()) {
      if (e.kind == Entry::Kind::Solved) a = subst_evar(a, e.name, *e.type);
    }
    if (a == before) return a;
  }
}

// The extension rules read as a backtracking search, without the greedy
// shortcut the library uses.
bool extension_oracle(std::span<const Entry> g, std::span<const Entry> d, const Context& full_d) {
  if (g.empty() && d.empty()) return true;
  if (d.empty()) return false;
  const Entry& dl = d.back();
  auto dr = d.first(d.size() - 1);
  auto same = [&](const Type& x, const Type& y) { return alpha_equiv(apply_ctx(full_d, x), apply_ctx(full_d, y)); };
  if (!g.empty()) {
    const Entry& gl = g.back();
    auto gr = g.first(g.size() - 1);
    if (gl.name == dl.name) {
      bool head = false;
      switch (gl.kind) {
        case Entry::Kind::Universal: head = dl.kind == Entry::Kind::Universal; break;
        case Entry::Kind::Marker: head = dl.kind == Entry::Kind::Marker; break;
        case Entry::Kind::TermVar: head = dl.kind == Entry::Kind::TermVar && same(*gl.type, *dl.type); break;
        case Entry::Kind::Unsolved: head = dl.is_evar(); break;
        case Entry::Kind::Solved: head = dl.kind == Entry::Kind::Solved && same(*gl.type, *dl.type); break;
      }
      if (head && extension_oracle(gr, dr, full_d)) return true;
    }
  }
  if (dl.is_evar()) return extension_oracle(g, dr, full_d);
  return false;
}

bool oracle_extends(const Context& g, const Context& d) { return extension_oracle(g.entries(), d.entries(), d); }

std::vector<Context> small_contexts() {
  std::vector<Entry> alphabet = {
      Entry::universal("a"),        Entry::unsolved("e1"),          Entry::solved("e1", Type::unit()),
      Entry::unsolved("e2"),        Entry::solved("e2", Type::exists("e1")), Entry::marker("e1"),
      Entry::term_var("x", Type::exists("e1")),
  };
  std::vector<Context> out{Context()};
  std::vector<Context> frontier{Context()};
  for (int len = 1; len <= 5; ++len) {
    std::vector<Context> next;
    for (const Context& c : frontier) {
      for (const Entry& e : alphabet) {
        Context k = c.extended(e);
        if (ctx_wf(k)) next.push_back(k);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST(ApplyCtx, Examples) {
  EXPECT_EQ(apply_ctx(ctx({"?a = 1", "?b = ?a -> 1"}), ty("?b")), ty("1 -> 1"));
  EXPECT_EQ(apply_ctx(ctx({"?a"}), ty("?a")), ty("?a"));
  EXPECT_EQ(apply_ctx(ctx({"?a = 1"}), ty("forall b. b -> ?a")), ty("forall b. b -> 1"));
}

TEST(ApplyCtx, AgreesWithFixpointOracleAndIsIdempotent) {
  testkit::Rng rng(3);
  testkit::ContextGenOptions options;
  options.evars = 4;
  for (int i = 0; i < 300; ++i) {
    Context g = testkit::gen_context(rng, options);
    Type a = testkit::gen_type(rng, 7, 2, testkit::scope_of(g));
    Type once = apply_ctx(g, a);
    EXPECT_EQ(once, naive_apply(g, a)) << print_context(g) << " / " << print_type(a);
    EXPECT_EQ(apply_ctx(g, once), once);
    EXPECT_TRUE(type_wf(g, once));
    EXPECT_LE(contextual_size(g, once), contextual_size(g, a));
  }
}

TEST(WellFormedness, Examples) {
  EXPECT_TRUE(type_wf(ctx({"a"}), ty("a -> 1")));
  EXPECT_FALSE(type_wf(ctx({}), ty("?a")));
  EXPECT_TRUE(type_wf(ctx({}), ty("forall a. a")));
  EXPECT_TRUE(ctx_wf(ctx({"?a", "?b = ?a"})));
  EXPECT_FALSE(ctx_wf(ctx({"?b = ?a", "?a"})));
  EXPECT_FALSE(ctx_wf(ctx({"a", "a"})));
  EXPECT_FALSE(ctx_wf(ctx({"?a", "?a = 1"})));
}

TEST(Holes, SplitAt) {
  Context g = ctx({"?a", "?b", "x : ?b"});
  Split s = split_at(g, EntryKey::existential("b"));
  EXPECT_EQ(print_context(s.left), "?a");
  EXPECT_EQ(print_entry(s.found), "?b");
  EXPECT_EQ(print_context(s.right), "x : ?b");

  Split one = split_at(ctx({"a"}), EntryKey::universal("a"));
  EXPECT_TRUE(one.left.empty());
  EXPECT_TRUE(one.right.empty());

  try {
    split_at(g, EntryKey::existential("zz"));
    FAIL();
  } catch (const ContextError& e) {
    EXPECT_EQ(e.kind(), ContextError::Kind::NotFound);
  }
}

TEST(Holes, Replace) {
  Context g = ctx({"a", "?a", "x : 1"});
  Context art = replace(g, EntryKey::existential("a"),
                        {Entry::unsolved("a2"), Entry::unsolved("a1"), Entry::solved("a", ty("?a1 -> ?a2"))});
  EXPECT_EQ(print_context(art), "a, ?a2, ?a1, ?a = ?a1 -> ?a2, x : 1");
  EXPECT_EQ(print_context(replace(g, EntryKey::existential("a"), {Entry::solved("a", Type::unit())})),
            "a, ?a = 1, x : 1");
  try {
    replace(g, EntryKey::existential("a"), {Entry::unsolved("a"), Entry::unsolved("a")});
    FAIL();
  } catch (const ContextError& e) {
    EXPECT_EQ(e.kind(), ContextError::Kind::IllFormedResult);
  }
}

TEST(Holes, TruncateBefore) {
  EXPECT_EQ(print_context(truncate_before(ctx({"b", ">?a", "?a", "?c"}), EntryKey::marker("a"))), "b");
  EXPECT_EQ(print_context(truncate_before(ctx({"?c", "a", "?d"}), EntryKey::universal("a"))), "?c");
  EXPECT_EQ(print_context(truncate_before(ctx({"?c", "x : 1", "?d"}), EntryKey::term_var("x"))), "?c");
  // The marker and the existential of the same name are different keys.
  EXPECT_EQ(print_context(truncate_before(ctx({"b", ">?a", "?a"}), EntryKey::existential("a"))), "b, >?a");
}

TEST(Extension, Examples) {
  EXPECT_TRUE(extends(ctx({"?a", "?b = ?a"}), ctx({"?a = 1", "?b = ?a"})));
  EXPECT_TRUE(extends(ctx({"?a = 1", "?b = ?a"}), ctx({"?a = 1", "?b = 1"})));
  EXPECT_FALSE(extends(ctx({"a", "b"}), ctx({"b", "a"})));
  EXPECT_FALSE(extends(ctx({"?a = 1"}), ctx({"?a"})));
  EXPECT_FALSE(extends(ctx({"a"}), ctx({})));
  EXPECT_TRUE(extends(ctx({"a"}), ctx({"?z", "a", "?y = 1"})));
}

TEST(Extension, AgreesWithRuleSearchOnSmallContexts) {
  std::vector<Context> all = small_contexts();
  ASSERT_GT(all.size(), 50u);
  std::size_t positive = 0;
  for (const Context& g : all) {
    for (const Context& d : all) {
      bool expected = oracle_extends(g, d);
      ASSERT_EQ(extends(g, d), expected) << "[" << print_context(g) << "] -> [" << print_context(d) << "]";
      if (!expected) continue;
      ++positive;
      // Declarations keep their relative order.
      std::vector<std::size_t> pos;
      for (const Entry& e : g.entries()) pos.push_back(*d.find(key_of(e)));
      EXPECT_TRUE(std::is_sorted(pos.begin(), pos.end()));
    }
  }
  EXPECT_GT(positive, all.size());
}

TEST(Extension, ReflexiveTransitiveAndWeakening) {
  testkit::Rng rng(8);
  testkit::ContextGenOptions options;
  options.evars = 4;
  for (int i = 0; i < 200; ++i) {
    Context g = testkit::gen_context(rng, options);
    EXPECT_TRUE(extends(g, g));
    // Solve the unsolved existentials one by one, then add one more.
    Context d = g;
    std::vector<Context> chain{g};
    for (const Entry& e : g.entries()) {
      if (e.kind != Entry::Kind::Unsolved) continue;
      Split s = split_at(d, EntryKey::existential(e.name));
      Type tau = testkit::gen_monotype(rng, 3, testkit::scope_of(s.left));
      d = replace(d, EntryKey::existential(e.name), {Entry::solved(e.name, tau)});
      chain.push_back(d);
    }
    d = d.extended(Entry::unsolved("z9"));
    chain.push_back(d);
    for (std::size_t x = 0; x < chain.size(); ++x) {
      for (std::size_t y = x; y < chain.size(); ++y) EXPECT_TRUE(extends(chain[x], chain[y]));
    }
    Type a = testkit::gen_type(rng, 6, 2, testkit::scope_of(g));
    EXPECT_TRUE(type_wf(d, a));
  }
}

TEST(Completion, Examples) {
  DeclContext p = complete_apply(CompleteContext(ctx({"x : 1", "?a = 1"})), ctx({"x : 1", "?a"}));
  EXPECT_EQ(print_context(p.context()), "x : 1");
  Context om = ctx({"?a = 1", "x : ?a"});
  EXPECT_EQ(print_context(complete_apply(CompleteContext(om), om).context()), "x : 1");
  try {
    complete_apply(CompleteContext(ctx({"a"})), ctx({"b"}));
    FAIL();
  } catch (const ContextError& e) {
    EXPECT_EQ(e.kind(), ContextError::Kind::NotAnExtension);
  }
  EXPECT_THROW(CompleteContext(ctx({"?a"})), ContextError);
}

TEST(Completion, Fill) {
  EXPECT_EQ(print_context(fill(ctx({"?a", "?b = ?a"})).context()), "?a = 1, ?b = ?a");
  EXPECT_EQ(print_context(fill(ctx({"a", "?b = a"})).context()), "a, ?b = a");
  EXPECT_TRUE(fill(Context()).context().empty());
}

TEST(Completion, Stability) {
  testkit::Rng rng(9);
  testkit::ContextGenOptions options;
  options.evars = 3;
  for (int i = 0; i < 300; ++i) {
    Context g = testkit::gen_context(rng, options);
    CompleteContext omega = fill(g);
    ASSERT_TRUE(extends(g, omega.context()));
    EXPECT_TRUE(complete_apply(omega, g) == complete_apply(omega, omega.context())) << print_context(g);
  }
}

TEST(Measures, UnsolvedCount) {
  EXPECT_EQ(unsolved_count(ctx({"?a", "?b = 1"})), 1u);
  EXPECT_EQ(unsolved_count(ctx({})), 0u);
  EXPECT_EQ(unsolved_count(ctx({"?a", "?b"})), 2u);
}

TEST(Measures, ContextualSize) {
  Context g = ctx({"b", "?a = b"});
  EXPECT_EQ(contextual_size(g, ty("?a")), 2u);
  EXPECT_EQ(contextual_size(g, ty("1")), 1u);
  EXPECT_EQ(contextual_size(g, ty("?a -> ?a")), 5u);
  EXPECT_EQ(contextual_size(ctx({"?c"}), ty("forall a. a -> ?c")), 4u);
}

TEST(Printing, TraceFormat) {
  EXPECT_EQ(print_context(ctx({"a", "?b = 1 -> a", "x : ?b", ">?c"})), "a, ?b = 1 -> a, x : ?b, >?c");
  EXPECT_EQ(print_context(Context()), "");
}
