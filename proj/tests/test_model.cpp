#include "doctest.h"

#include "support.hpp"

using namespace pxq;

namespace {

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
  for (const Violation& x : v) {
    if (x.rule.find(rule) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("fixtures are well formed") {
  CHECK(validate(test::fig2b()).empty());
  CHECK(validate(test::fig2a()).empty());
  CHECK(test::fig2b().node_count == 15);
}

TEST_CASE("validate reports each broken rule") {
  SUBCASE("edge probability out of range") {
    auto doc = make_document(PNode::ordinary(
        "r", {PNode::distributional(NodeKind::ind, {PNode::ordinary("a").with_prob(1.2)})}));
    CHECK(has_rule(validate(doc), "edge probability outside (0,1]"));
    doc.root.children[0].children[0].edge_prob = 0.0;
    CHECK(has_rule(validate(doc), "edge probability outside (0,1]"));
  }
  SUBCASE("distributional root") {
    auto doc = make_document(PNode::distributional(NodeKind::ind, {PNode::ordinary("a")}));
    CHECK(has_rule(validate(doc), "root must be ordinary"));
  }
  SUBCASE("root edge") {
    auto doc = make_document(PNode::ordinary("r").with_prob(0.5));
    CHECK(has_rule(validate(doc), "root edge must be 1"));
  }
  SUBCASE("ordinary child of ordinary with probability") {
    auto doc = make_document(PNode::ordinary("r", {PNode::ordinary("a").with_prob(0.5)}));
    CHECK(has_rule(validate(doc), "ordinary edge must be 1"));
  }
  SUBCASE("MUX overflow") {
    auto doc = make_document(PNode::ordinary(
        "r", {PNode::distributional(NodeKind::mux, {PNode::ordinary("a").with_prob(0.6),
                                                    PNode::ordinary("b").with_prob(0.5)})}));
    const auto v = validate(doc);
    REQUIRE(v.size() == 1);
    CHECK(v[0].path == "1.1");
    CHECK(has_rule(v, "MUX sum"));
  }
  SUBCASE("MUX summing to exactly 1 is fine") {
    auto doc = make_document(PNode::ordinary(
        "r", {PNode::distributional(NodeKind::mux, {PNode::ordinary("a").with_prob(0.3),
                                                    PNode::ordinary("b").with_prob(0.7)})}));
    CHECK(validate(doc).empty());
  }
  SUBCASE("labelled distributional node") {
    PNode ind = PNode::distributional(NodeKind::ind, {PNode::ordinary("a")});
    ind.label = "oops";
    CHECK(has_rule(validate(make_document(PNode::ordinary("r", {ind}))),
                   "distributional node carries label or text"));
  }
  SUBCASE("stale node count") {
    auto doc = make_document(PNode::ordinary("r"));
    doc.node_count = 3;
    CHECK_FALSE(validate(doc).empty());
  }
}

TEST_CASE("path probability multiplies edges down to the node") {
  const PDocument doc = test::fig2b();
  CHECK(path_probability(doc, test::kX1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(path_probability(doc, test::kX2) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(path_probability(doc, Dewey{1}) == 1.0);
  CHECK(path_probability(doc, Dewey{1, 1, 1, 2, 1, 1}) == doctest::Approx(0.48));
  CHECK_THROWS_AS(path_probability(doc, Dewey{1, 9}), Error);
  CHECK_THROWS_AS(path_probability(doc, Dewey{2}), Error);
  CHECK(find_node(doc, Dewey{1, 2, 2})->label == "b");
  CHECK(find_node(doc, Dewey{1, 2, 3}) == nullptr);
}

TEST_CASE("path probability equals enumerated existence probability") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const PDocument doc = test::corpus_doc(seed);
    for (const auto& [dewey, p] : oracle_existence(doc)) {
      REQUIRE_MESSAGE(path_probability(doc, dewey) == doctest::Approx(p).epsilon(1e-12),
                      "seed " << seed << " node " << dewey_string(dewey));
    }
  }
}

TEST_CASE("for_each_node visits in document order") {
  std::vector<std::string> seen;
  for_each_node(test::fig2a(), [&](const PNode&, const Dewey& d) { seen.push_back(dewey_string(d)); });
  CHECK(seen.size() == 12);
  CHECK(seen.front() == "1");
  CHECK(seen[1] == "1.1");
  CHECK(seen.back() == "1.2.2");
}

TEST_CASE("same_structure compares on the probability grid") {
  PNode a = PNode::ordinary("r", {PNode::distributional(NodeKind::ind, {PNode::ordinary("x").with_prob(0.3)})});
  PNode b = a;
  b.children[0].children[0].edge_prob = 0.1 + 0.2;  // 0.30000000000000004
  CHECK(same_structure(a, b));
  b.children[0].children[0].edge_prob = 0.300001;
  CHECK_FALSE(same_structure(a, b));
  b = a;
  b.children[0].children[0].text = "t";
  CHECK_FALSE(same_structure(a, b));
}
