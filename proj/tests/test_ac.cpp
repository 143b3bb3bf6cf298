#include <doctest.h>

#include "accomp/ac.hpp"
#include "support.hpp"

using namespace accomp;
using accomp::testing::Gen;
using accomp::testing::Sig;

namespace {

Sig ac_sig() {
  Sig s;
  s.fun("+", 2, Theory::ac);
  s.fun("f", 2, Theory::ac);
  s.fun("g", 1);
  s.fun("s", 1);
  s.fun("a", 0);
  s.fun("b", 0);
  s.fun("c", 0);
  s.fun("0", 0);
  return s;
}

Gen small_gen(Sig& s, unsigned seed) {
  Gen g(seed);
  g.symbols = {s.syms.find("+"), s.syms.find("g"), s.syms.find("a"),
               s.syms.find("b"), s.syms.find("0")};
  g.variables = {s.v("x").var(), s.v("y").var()};
  return g;
}

}  // namespace

TEST_CASE("flattening produces identical canonical forms for AC-equal terms") {
  Sig s = ac_sig();
  // f(x, f(y, g(f(z,a)))) and f(f(y,x), g(f(a,z))) with f an AC symbol
  Term t1 = s.t("f(x,f(y,g(f(z,a))))");
  Term t2 = s.t("f(f(y,x),g(f(a,z)))");
  CHECK(flatten_canonical(t1) == flatten_canonical(t2));
  CHECK(ac_equal(t1, t2));
  // the canonical form is variadic: three arguments under one f
  CHECK(flatten_canonical(t1).args().size() == 3);

  // no AC symbol: identity
  Term plain = s.t("g(s(a))");
  CHECK(unflatten(flatten_canonical(plain)) == plain);
}

TEST_CASE("flattening is idempotent on random terms") {
  Sig s = ac_sig();
  Gen g = small_gen(s, 21u);
  for (int i = 0; i < 300; ++i) {
    Term t = g.term(8);
    Term once = canonical_term(t);
    CHECK(canonical_term(once) == once);
    CHECK(ac_equal(t, once));
  }
}

TEST_CASE("ac_equal on the worked examples") {
  Sig s = ac_sig();
  CHECK(ac_equal(s.t("+(b,+(a,a))"), s.t("+(a,+(b,a))")));
  Term t = s.t("g(+(a,b))");
  CHECK(ac_equal(t, t));
  // g is not AC, so argument order matters above it
  Sig s2;
  Symbol h = s2.fun("h", 2);
  Term ab = Term::app(h, {Term::app(s2.fun("a", 0)), Term::app(s2.fun("b", 0))});
  Term ba = Term::app(h, {Term::app(s2.syms.find("b")), Term::app(s2.syms.find("a"))});
  CHECK_FALSE(ac_equal(ab, ba));
}

TEST_CASE("ac_equal agrees with class enumeration") {
  Sig s = ac_sig();
  Gen g = small_gen(s, 22u);
  auto counterexample = accomp::testing::prop_ac_equal_vs_enumeration(g, 200);
  CHECK_MESSAGE(!counterexample, *counterexample);
}

TEST_CASE("class enumeration sizes") {
  Sig s = ac_sig();
  CHECK(ac_class_enumerate(s.t("+(a,b)")).size() == 2);
  CHECK(ac_class_enumerate(s.t("+(a,+(b,c))")).size() == 12);
  CHECK(ac_class_enumerate(s.t("g(a)")).size() == 1);
  CHECK_THROWS_AS(ac_class_enumerate(s.t("+(a,+(b,c))"), 5), std::length_error);
}

TEST_CASE("ac_match on the worked examples") {
  Sig s = ac_sig();

  // s(x)+y matched against y2+s(x2) contains {x -> x2, y -> y2}
  Term pattern = s.t("+(s(x),y)");
  s.vars.intern("x2");
  s.vars.intern("y2");
  Term subject = s.t("+(y2,s(x2))");
  bool found = false;
  for (const Substitution& sigma : ac_match(pattern, subject)) {
    if (sigma.apply(s.v("x")) == s.v("x2") && sigma.apply(s.v("y")) == s.v("y2"))
      found = true;
    CHECK(ac_equal(sigma.apply(pattern), subject));
  }
  CHECK(found);

  // x+0 against 0+a yields {x -> a}
  auto sols = ac_match(s.t("+(x,0)"), s.t("+(0,a)"));
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].apply(s.v("x")) == s.t("a"));

  // nonlinear pattern with no consistent split
  CHECK(ac_match(s.t("+(x,x)"), s.t("+(a,b)")).empty());
  // ... but a consistent one works
  auto dup = ac_match(s.t("+(x,x)"), s.t("+(a,a)"));
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].apply(s.v("x")) == s.t("a"));
}

TEST_CASE("ac_match is sound and complete against enumeration") {
  Sig s = ac_sig();
  Gen g = small_gen(s, 23u);
  auto counterexample = accomp::testing::prop_ac_match_vs_enumeration(g, 200);
  CHECK_MESSAGE(!counterexample, *counterexample);
}

TEST_CASE("ac_match solutions arrive deterministically") {
  Sig s = ac_sig();
  Term pattern = s.t("+(x,y)");
  Term subject = s.t("+(a,+(b,c))");
  auto first = ac_match(pattern, subject);
  auto second = ac_match(pattern, subject);
  REQUIRE(first.size() == second.size());
  for (size_t i = 0; i < first.size(); ++i) CHECK(first[i] == second[i]);
  CHECK(first.size() == 6);  // three binary splits, each in two roles
}

TEST_CASE("extended rules") {
  Sig s = ac_sig();

  ExtendedSystem one = extend_rules({s.rule("+(x,0)", "x")});
  REQUIRE(one.extensions.size() == 1);
  const Rule& ext = one.extensions[0].rule;
  CHECK(is_rule_variant(ext, s.rule("+(+(x,0),z)", "+(x,z)")));

  ExtendedSystem none = extend_rules({s.rule("g(0)", "0")});
  CHECK(none.extensions.empty());

  ExtendedSystem succ = extend_rules({s.rule("+(s(x),y)", "s(+(x,y))")});
  REQUIRE(succ.extensions.size() == 1);
  CHECK(is_rule_variant(succ.extensions[0].rule,
                        s.rule("+(+(s(x),y),z)", "+(s(+(x,y)),z)")));
}

TEST_CASE("the three rewrite relations on the addition system") {
  Sig s = ac_sig();
  Trs r{s.rule("+(0,y)", "y"), s.rule("+(s(x),y)", "s(+(x,y))")};

  // y+s(x) is a plain normal form but has a theory-matching step at the root
  Term t = s.t("+(y,s(x))");
  CHECK(rewrite_steps(t, r, RelationKind::plain).empty());
  auto ps = rewrite_steps(t, r, RelationKind::ps);
  REQUIRE(!ps.empty());
  CHECK(ps[0].pos.empty());
  CHECK(ac_equal(ps[0].result, s.t("s(+(x,y))")));

  // (y+z)+s(x): no theory-matching step reaches s(x+y)+z, the extended
  // system does
  Term u = s.t("+(+(y,z),s(x))");
  Term target = s.t("+(s(+(x,y)),z)");
  for (const RewriteStep& st : rewrite_steps(u, r, RelationKind::ps))
    CHECK_FALSE(ac_equal(st.result, target));
  bool modulo_reaches = false;
  for (const RewriteStep& st : rewrite_steps(u, r, RelationKind::modulo)) {
    REQUIRE(st.result_canonical);
    CHECK(ac_equal(*st.result_canonical, st.result));
    if (ac_equal(st.result, target)) modulo_reaches = true;
  }
  CHECK(modulo_reaches);

  CHECK(rewrite_steps(t, Trs{}, RelationKind::modulo).empty());
}

TEST_CASE("plain steps are theory steps; theory steps are class steps") {
  Sig s = ac_sig();
  Gen g = small_gen(s, 25u);
  Trs r{s.rule("+(x,0)", "x"), s.rule("g(+(x,y))", "+(g(x),g(y))")};
  for (int i = 0; i < 200; ++i) {
    Term t = g.ground_term(6);
    auto plain = rewrite_steps(t, r, RelationKind::plain);
    auto ps = rewrite_steps(t, r, RelationKind::ps);
    // every plain result appears among the theory-matching results
    for (const RewriteStep& p : plain) {
      bool found = false;
      for (const RewriteStep& q : ps)
        if (q.result == p.result) found = true;
      CHECK(found);
    }
    // every theory-matching step is realizable as class member + plain step
    for (const RewriteStep& q : ps) {
      bool realizable = false;
      for (const Term& member : ac_class_enumerate(t))
        for (const RewriteStep& p : rewrite_steps(member, r, RelationKind::plain))
          if (ac_equal(p.result, q.result)) realizable = true;
      CHECK(realizable);
    }
  }
}

TEST_CASE("n-step class rewriting equals the extended-system relation") {
  Sig s = ac_sig();
  Gen g = small_gen(s, 26u);
  Trs r{s.rule("+(x,0)", "x"), s.rule("+(a,b)", "c")};
  auto counterexample = accomp::testing::prop_step_set_equivalence(g, r, 60);
  CHECK_MESSAGE(!counterexample, *counterexample);
}

TEST_CASE("strict coherence as reduct-set equality over classes") {
  Sig s = ac_sig();
  Gen g = small_gen(s, 27u);
  Trs r{s.rule("+(x,0)", "x"), s.rule("+(a,b)", "c")};
  auto counterexample = accomp::testing::prop_strict_coherence(g, r, 120);
  CHECK_MESSAGE(!counterexample, *counterexample);
}

TEST_CASE("normal forms") {
  Sig s = ac_sig();
  // the four-rule system: f(0+0) normalizes to 0 via f(0) then the unit rule
  Sig a;
  a.fun("+", 2, Theory::ac);
  a.fun("f", 1);
  a.fun("0", 0);
  Trs r{a.rule("f(+(x,y))", "+(f(x),f(y))"), a.rule("f(0)", "0"),
        a.rule("+(x,0)", "x"), a.rule("+(0,x)", "x")};
  CHECK(normal_form(a.t("f(+(0,0))"), r, RelationKind::plain) == a.t("0"));

  CHECK(normal_form(s.t("+(a,b)"), Trs{}, RelationKind::plain) == s.t("+(a,b)"));
  CHECK(normal_form(s.t("+(x,0)"), Trs{s.rule("+(x,0)", "x")},
                    RelationKind::plain) == s.v("x"));
}

TEST_CASE("fuel exhaustion raises instead of looping") {
  Sig s = ac_sig();
  Trs r{s.rule("g(x)", "g(g(x))")};
  CHECK_THROWS_AS(normal_form(s.t("g(a)"), r, RelationKind::plain, 100),
                  FuelExceeded);
}

TEST_CASE("joinability modulo the theory") {
  Sig s;
  s.fun("+", 2);  // not declared AC: the pcp system is plain
  s.fun("f", 1);
  s.fun("a", 0);
  s.fun("b", 0);
  Trs r{s.rule("f(+(a,x))", "x"), s.rule("f(+(x,a))", "x"),
        s.rule("f(+(b,x))", "x"), s.rule("f(+(x,b))", "x"), s.rule("a", "b")};
  CHECK(joinable_mod_ac(s.t("f(+(b,x))"), s.v("x"), r));
  CHECK(joinable_mod_ac(s.t("f(+(a,x))"), s.v("x"), r));
  CHECK(joinable_mod_ac(s.t("a"), s.t("a"), r));
  CHECK_FALSE(joinable_mod_ac(s.t("a"), s.t("f(a)"), Trs{}));
}

TEST_CASE("theory axioms materialize per symbol kind") {
  Sig s = ac_sig();
  std::vector<Symbol> both{s.syms.find("+")};
  CHECK(theory_axioms(both).size() == 3);  // two associativity, one commutativity
  Sig c;
  Symbol comm = c.fun("u", 2, Theory::comm);
  std::vector<Symbol> just{comm};
  CHECK(theory_axioms(just).size() == 1);
}
