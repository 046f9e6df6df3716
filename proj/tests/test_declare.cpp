#include <doctest.h>

#include <string>
#include <vector>

#include "driftscope/declare.hpp"
#include "driftscope/errors.hpp"
#include "helpers.hpp"

using namespace driftscope;

namespace {

// Traces over {a, b, c} intern to ids 0, 1, 2 because alphabets sort.
std::vector<ActivityId> ids_of(const std::string& t) {
  std::vector<ActivityId> out;
  out.reserve(t.size());
  for (char c : t) out.push_back(static_cast<ActivityId>(c - 'a'));
  return out;
}

TraceEval eval_str(TemplateKind kind, char a, char b, const std::string& t) {
  const Constraint c{kind, static_cast<ActivityId>(a - 'a'),
                     is_unary(kind) ? -1 : static_cast<ActivityId>(b - 'a')};
  const auto ids = ids_of(t);
  return evaluate_trace(c, ids);
}

bool satisfies(TemplateKind kind, char a, char b, const std::string& t) {
  const TraceEval r = eval_str(kind, a, b, t);
  return r.activations == r.satisfied;
}

}  // namespace

TEST_SUITE("declare") {

TEST_CASE("template names round-trip") {
  for (TemplateKind k : all_templates()) {
    const auto back = template_from_name(template_name(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK_FALSE(template_from_name("NoSuchTemplate").has_value());
  CHECK(is_unary(TemplateKind::AtMostOne));
  for (TemplateKind k : all_templates())
    if (k != TemplateKind::AtMostOne) CHECK_FALSE(is_unary(k));
}

TEST_CASE("constraint space enumerates kinds then ordered pairs") {
  CHECK(constraint_space(2).size() == 16);   // 2 unary + 7 * 2 ordered pairs
  CHECK(constraint_space(1).size() == 1);    // only AtMostOne(a)
  CHECK(constraint_space(3, {TemplateKind::Response}).size() == 6);
  CHECK_THROWS_AS(constraint_space(0), ConfigError);

  const auto space = constraint_space(2);
  CHECK(space[0] == Constraint{TemplateKind::AtMostOne, 0, -1});
  CHECK(space[1] == Constraint{TemplateKind::AtMostOne, 1, -1});
  CHECK(space[2] == Constraint{TemplateKind::Response, 0, 1});
  CHECK(space[3] == Constraint{TemplateKind::Response, 1, 0});
  CHECK(space[4] == Constraint{TemplateKind::AlternateResponse, 0, 1});
  // No self-pairs anywhere.
  for (const Constraint& c : space)
    if (!is_unary(c.kind)) CHECK(c.a != c.b);
}

TEST_CASE("constraint text names the parameters") {
  const EventLog log = testutil::make_log({"ab"});
  CHECK(constraint_text(testutil::binary(log, TemplateKind::Response, 'a', 'b'),
                        log) == "Response(a, b)");
  CHECK(constraint_text(testutil::unary(log, 'a'), log) == "AtMostOne(a)");
}

TEST_CASE("single-pass evaluation matches hand-worked counts") {
  // ChainPrecedence(b, c) on bcc: the first c follows b, the second fails.
  CHECK(eval_str(TemplateKind::ChainPrecedence, 'b', 'c', "bcc").activations == 2);
  CHECK(eval_str(TemplateKind::ChainPrecedence, 'b', 'c', "bcc").satisfied == 1);
  // Response(a, b) on baabc: both a's see the later b.
  CHECK(eval_str(TemplateKind::Response, 'a', 'b', "baabc").activations == 2);
  CHECK(eval_str(TemplateKind::Response, 'a', 'b', "baabc").satisfied == 2);
  // AlternateResponse(a, b) on caacb: the first a is interrupted by the second.
  CHECK(eval_str(TemplateKind::AlternateResponse, 'a', 'b', "caacb").activations == 2);
  CHECK(eval_str(TemplateKind::AlternateResponse, 'a', 'b', "caacb").satisfied == 1);
  // NotSuccession(a, b) on abb: the a is followed by b.
  CHECK(eval_str(TemplateKind::NotSuccession, 'a', 'b', "abb").activations == 1);
  CHECK(eval_str(TemplateKind::NotSuccession, 'a', 'b', "abb").satisfied == 0);
}

TEST_CASE("at-most-one counts every occurrence as an activation") {
  CHECK(eval_str(TemplateKind::AtMostOne, 'a', 0, "b").activations == 0);
  CHECK(eval_str(TemplateKind::AtMostOne, 'a', 0, "ba").activations == 1);
  CHECK(eval_str(TemplateKind::AtMostOne, 'a', 0, "ba").satisfied == 1);
  CHECK(eval_str(TemplateKind::AtMostOne, 'a', 0, "baa").activations == 2);
  CHECK(eval_str(TemplateKind::AtMostOne, 'a', 0, "baa").satisfied == 0);
  CHECK(eval_str(TemplateKind::AtMostOne, 'a', 0, "aabaa").activations == 4);
  CHECK(eval_str(TemplateKind::AtMostOne, 'a', 0, "aabaa").satisfied == 0);
}

TEST_CASE("classification agrees with the published example traces") {
  struct Row {
    TemplateKind kind;
    std::vector<std::string> good;
    std::vector<std::string> bad;
  };
  const std::vector<Row> rows = {
      {TemplateKind::AtMostOne, {"bcc", "bcac"}, {"bcaac", "bcacaa"}},
      {TemplateKind::Response, {"baabc", "bcc"}, {"caac", "bacc"}},
      {TemplateKind::AlternateResponse, {"cacb", "abcacb"}, {"caacb", "bacacb"}},
      {TemplateKind::ChainResponse, {"cabb", "abcab"}, {"cacb", "bca"}},
      {TemplateKind::Precedence, {"cacbb", "acc"}, {"ccbb", "bacc"}},
      {TemplateKind::AlternatePrecedence,
       {"cacba", "abcaacb"},
       {"cacbba", "abbabcb"}},
      {TemplateKind::ChainPrecedence, {"abca", "abaabc"}, {"bca", "baacb"}},
      {TemplateKind::NotSuccession, {"bbcaa", "cbbca"}, {"aacbb", "abb"}},
  };
  for (const Row& row : rows) {
    for (const std::string& t : row.good) {
      CAPTURE(template_name(row.kind));
      CAPTURE(t);
      CHECK(satisfies(row.kind, 'a', 'b', t));
    }
    for (const std::string& t : row.bad) {
      CAPTURE(template_name(row.kind));
      CAPTURE(t);
      CHECK_FALSE(satisfies(row.kind, 'a', 'b', t));
    }
  }
}

TEST_CASE("single-pass evaluation matches the quantifier checker") {
  // Every trace over {a, b, c} up to length 5, every template instantiation.
  std::vector<std::string> traces{""};
  for (int len = 1; len <= 5; ++len) {
    std::vector<std::string> next;
    for (const std::string& t : traces)
      if (static_cast<int>(t.size()) == len - 1)
        for (char c : {'a', 'b', 'c'}) next.push_back(t + c);
    traces.insert(traces.end(), next.begin(), next.end());
  }

  long long checked = 0;
  for (const std::string& t : traces) {
    for (TemplateKind kind : all_templates()) {
      if (is_unary(kind)) {
        for (char a : {'a', 'b', 'c'}) {
          const TraceEval got = eval_str(kind, a, 0, t);
          const TraceEval want = testutil::oracle_eval(kind, a, 0, t);
          REQUIRE(got.activations == want.activations);
          REQUIRE(got.satisfied == want.satisfied);
          ++checked;
        }
      } else {
        for (char a : {'a', 'b', 'c'})
          for (char b : {'a', 'b', 'c'}) {
            if (a == b) continue;
            const TraceEval got = eval_str(kind, a, b, t);
            const TraceEval want = testutil::oracle_eval(kind, a, b, t);
            if (got.activations != want.activations ||
                got.satisfied != want.satisfied) {
              CAPTURE(template_name(kind));
              CAPTURE(a);
              CAPTURE(b);
              CAPTURE(t);
              REQUIRE(got.activations == want.activations);
              REQUIRE(got.satisfied == want.satisfied);
            }
            ++checked;
          }
      }
    }
  }
  CHECK(checked == 364LL * (3 + 7 * 6));
}

TEST_CASE("support and confidence follow the activation counts") {
  const EventLog log = testutil::make_log(
      {"baabc", "baabc", "baabc", "baabc", "bcc", "bcba", "bcba"});
  const SubLog whole = testutil::whole_log(log);

  const Constraint resp = testutil::binary(log, TemplateKind::Response, 'a', 'b');
  CHECK(support(resp, whole) == doctest::Approx(0.8).epsilon(1e-12));
  // Six of the seven traces contain an a.
  CHECK(confidence(resp, whole) == doctest::Approx(0.8 * 6.0 / 7.0).epsilon(1e-12));

  const Constraint chp =
      testutil::binary(log, TemplateKind::ChainPrecedence, 'b', 'c');
  CHECK(support(chp, whole) == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(confidence(chp, whole) == doctest::Approx(0.875).epsilon(1e-12));
}

TEST_CASE("support distinguishes violated from never-activated") {
  // ChainResponse(c, b) activates on every c; with c always last nothing is
  // satisfied, so support is a true zero.
  const EventLog log = testutil::make_log({"bc", "bc", "aa"});
  const Constraint chr = testutil::binary(log, TemplateKind::ChainResponse, 'c', 'b');
  CHECK(support(chr, testutil::whole_log(log)) == 0.0);
  CHECK(confidence(chr, testutil::whole_log(log)) == 0.0);

  // A window without any a leaves Response(a, b) unactivated: the 0/0
  // convention also yields 0, with no division blowing up.
  SubLog first_two;
  first_two.index = 1;
  first_two.first = 0;
  first_two.count = 2;
  first_two.log = &log;
  const Constraint resp = testutil::binary(log, TemplateKind::Response, 'a', 'b');
  CHECK(support(resp, first_two) == 0.0);
  CHECK(confidence(resp, first_two) == 0.0);

  // Fully satisfied single activations give support 1.
  const Constraint uni = testutil::unary(log, 'c');
  CHECK(support(uni, first_two) == 1.0);
  CHECK(confidence(uni, first_two) == 1.0);
}

TEST_CASE("support weights duplicate traces like a multiset") {
  const EventLog once = testutil::make_log({"ab", "ac"});
  const EventLog twice = testutil::make_log({"ab", "ab", "ab", "ac", "ac", "ac"});
  const Constraint c1 = testutil::binary(once, TemplateKind::Response, 'a', 'b');
  const Constraint c2 = testutil::binary(twice, TemplateKind::Response, 'a', 'b');
  CHECK(support(c1, testutil::whole_log(once)) ==
        support(c2, testutil::whole_log(twice)));
  CHECK(confidence(c1, testutil::whole_log(once)) ==
        confidence(c2, testutil::whole_log(twice)));
}

TEST_CASE("stronger templates imply the listed weaker ones") {
  const auto wr = weaker_kinds(TemplateKind::ChainResponse);
  REQUIRE(wr.size() == 2);
  CHECK(wr[0] == TemplateKind::AlternateResponse);
  CHECK(wr[1] == TemplateKind::Response);
  const auto war = weaker_kinds(TemplateKind::AlternateResponse);
  REQUIRE(war.size() == 1);
  CHECK(war[0] == TemplateKind::Response);
  const auto wp = weaker_kinds(TemplateKind::ChainPrecedence);
  REQUIRE(wp.size() == 2);
  CHECK(wp[0] == TemplateKind::AlternatePrecedence);
  CHECK(wp[1] == TemplateKind::Precedence);
  CHECK(weaker_kinds(TemplateKind::Response).empty());
  CHECK(weaker_kinds(TemplateKind::Precedence).empty());
  CHECK(weaker_kinds(TemplateKind::AtMostOne).empty());
  CHECK(weaker_kinds(TemplateKind::NotSuccession).empty());

  // Semantics back the subsumption direction: whenever the stronger template
  // holds on a trace, so does each weaker one.
  std::vector<std::string> traces{""};
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::string> next;
    for (const std::string& t : traces)
      if (static_cast<int>(t.size()) == len - 1)
        for (char c : {'a', 'b', 'c'}) next.push_back(t + c);
    traces.insert(traces.end(), next.begin(), next.end());
  }
  for (const std::string& t : traces)
    for (TemplateKind strong : all_templates())
      for (TemplateKind weak : weaker_kinds(strong))
        if (satisfies(strong, 'a', 'b', t)) {
          CAPTURE(t);
          CHECK(satisfies(weak, 'a', 'b', t));
        }
}

TEST_CASE("subsumption keeps the strongest of matching series") {
  const std::vector<Constraint> cs = {
      {TemplateKind::Response, 0, 1},
      {TemplateKind::AlternateResponse, 0, 1},
      {TemplateKind::ChainResponse, 0, 1},
  };
  const std::vector<double> series{0.5, 0.6, 0.7};
  SUBCASE("identical series collapse to the chain variant") {
    const auto kept = subsumption_reduce(cs, {series, series, series});
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == 2);
  }
  SUBCASE("a gap wider than epsilon keeps the weaker constraint") {
    std::vector<double> far = series;
    far[1] += 0.5;
    const auto kept = subsumption_reduce(cs, {far, series, series});
    REQUIRE(kept.size() == 2);
    CHECK(kept[0] == 0);
    CHECK(kept[1] == 2);
  }
  SUBCASE("epsilon bounds the pointwise difference inclusively") {
    // Exact binary fractions keep the boundary comparison deterministic.
    const double eps = 0.0078125;  // 2^-7
    std::vector<double> base{0.5, 0.5, 0.5};
    std::vector<double> at_eps{0.5 + eps, 0.5, 0.5};
    const auto one = subsumption_reduce(cs, {at_eps, base, base}, eps);
    CHECK(one.size() == 1);
    std::vector<double> past{0.5 + eps + 0.0009765625, 0.5, 0.5};
    const auto two = subsumption_reduce(cs, {past, base, base}, eps);
    CHECK(two.size() == 2);
  }
}

TEST_CASE("subsumption ignores different parameters and unrelated kinds") {
  const std::vector<Constraint> cs = {
      {TemplateKind::Response, 0, 1},
      {TemplateKind::ChainResponse, 1, 0},  // different parameters
      {TemplateKind::NotSuccession, 0, 1},  // no weaker chain
  };
  const std::vector<double> s{0.5, 0.5};
  const auto kept = subsumption_reduce(cs, {s, s, s});
  CHECK(kept == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("a dropped constraint still drops its own weaker matches") {
  // Chain matches Alternate within epsilon, Alternate matches Response, but
  // Chain vs Response differs by more than epsilon: Response must still go.
  const std::vector<Constraint> cs = {
      {TemplateKind::Response, 0, 1},
      {TemplateKind::AlternateResponse, 0, 1},
      {TemplateKind::ChainResponse, 0, 1},
  };
  const std::vector<double> resp{0.500, 0.5};
  const std::vector<double> alt{0.508, 0.5};
  const std::vector<double> chain{0.516, 0.5};
  const auto kept = subsumption_reduce(cs, {resp, alt, chain}, 0.01);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == 2);
}

TEST_CASE("subsumption validates its inputs") {
  const std::vector<Constraint> cs = {{TemplateKind::Response, 0, 1}};
  CHECK_THROWS_AS(subsumption_reduce(cs, {}), ConfigError);
  const std::vector<Constraint> two = {{TemplateKind::Response, 0, 1},
                                       {TemplateKind::ChainResponse, 0, 1}};
  CHECK_THROWS_AS(subsumption_reduce(two, {{0.1, 0.2}, {0.1}}), ConfigError);
}

}  // TEST_SUITE
