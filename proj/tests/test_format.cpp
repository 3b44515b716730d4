#include "doctest.h"

#include "support.hpp"

using namespace pxq;

namespace {

std::string error_of(std::string_view xml) {
  try {
    parse_pxml(xml);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("fig2b fixture parses into the expected layout") {
  const PDocument doc = test::fig2b();
  const PNode& r = doc.root;
  CHECK(r.label == "r");
  REQUIRE(r.children.size() == 2);
  const PNode& ind1 = r.children[0];
  CHECK(ind1.kind == NodeKind::ind);
  const PNode& x2 = ind1.children.at(0);
  CHECK(x2.label == "x");
  CHECK(x2.edge_prob == 0.8);
  const PNode& ind2 = x2.children.at(1).children.at(0);
  CHECK(ind2.kind == NodeKind::ind);
  CHECK(ind2.children.at(0).edge_prob == 0.6);
  CHECK(ind2.children.at(1).edge_prob == 0.7);
  const PNode& mux = r.children[1].children.at(0).children.at(0);
  CHECK(mux.kind == NodeKind::mux);
  CHECK(mux.children.size() == 2);
}

TEST_CASE("attributes and text") {
  const PDocument doc = parse_pxml(
      "<article year=\"2010\" venue=\"x &amp; y\">Keyword <b>search</b> over\n  data</article>");
  const PNode& r = doc.root;
  CHECK(r.text == std::optional<std::string>("Keyword over\n  data"));
  REQUIRE(r.children.size() == 3);
  CHECK(r.children[0].label == "year");
  CHECK(r.children[0].text == std::optional<std::string>("2010"));
  CHECK(r.children[1].text == std::optional<std::string>("x & y"));
  CHECK(r.children[2].label == "b");
  CHECK(r.children[2].text == std::optional<std::string>("search"));
}

TEST_CASE("entities, CDATA, comments and declarations") {
  const PDocument doc = parse_pxml(
      "<?xml version=\"1.0\"?>\n<!DOCTYPE r>\n<!-- c -->\n"
      "<r>&lt;&#65;&#x42;&gt;<![CDATA[<raw>]]><?pi x?></r>");
  CHECK(doc.root.text == std::optional<std::string>("<AB><raw>"));
}

TEST_CASE("malformed XML reports line and column") {
  try {
    parse_pxml("<r>\n  <a>\n</r>");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).rfind("line 3, column", 0) == 0);
  }
  CHECK_THROWS_AS(parse_pxml(""), ParseError);
  CHECK_THROWS_AS(parse_pxml("<r a=\"1\" a=\"2\"/>"), ParseError);
  CHECK_THROWS_AS(parse_pxml("<r>&bogus;</r>"), ParseError);
  CHECK_THROWS_AS(parse_pxml("<r/><s/>"), ParseError);
}

TEST_CASE("model violations are rejected with a position") {
  CHECK(error_of("<r><mux><a p=\"0.6\"/><b p=\"0.5\"/></mux></r>").find("MUX sum 1.1 > 1") !=
        std::string::npos);
  CHECK(error_of("<r><mux><a p=\"0.6\"/></mux></r>").empty());
  CHECK(error_of("<r><a p=\"0.5\"/></r>").find("child of an ordinary node") != std::string::npos);
  CHECK(error_of("<r p=\"0.5\"/>").find("line 1, column") != std::string::npos);
  CHECK(error_of("<ind><a/></ind>").find("root") != std::string::npos);
  CHECK(error_of("<r><ind>text<a p=\"0.5\"/></ind></r>").find("text") != std::string::npos);
  CHECK(error_of("<r><ind q=\"1\"><a p=\"0.5\"/></ind></r>").find("attribute") != std::string::npos);
  CHECK_FALSE(error_of("<r><ind><a p=\"1.5\"/></ind></r>").empty());
  CHECK_FALSE(error_of("<r><ind><a p=\"0\"/></ind></r>").empty());
  CHECK_FALSE(error_of("<r><ind><a p=\"abc\"/></ind></r>").empty());
}

TEST_CASE("custom tag names") {
  FormatOptions opts;
  opts.ind_tag = "prob:ind";
  opts.mux_tag = "prob:mux";
  opts.prob_attr = "prob";
  const PDocument doc = parse_pxml("<r><prob:mux><a prob=\"0.25\"/></prob:mux><ind/></r>", opts);
  CHECK(doc.root.children[0].kind == NodeKind::mux);
  CHECK(doc.root.children[1].kind == NodeKind::ordinary);
  CHECK(serialize_pxml(doc, opts).find("<prob:mux>") != std::string::npos);
  opts.mux_tag = opts.ind_tag;
  CHECK_THROWS_AS(parse_pxml("<r/>", opts), FormatError);
}

TEST_CASE("serialize then parse is a fixed point") {
  for (const PDocument& doc : {test::fig2a(), test::fig2b()}) {
    const std::string once = serialize_pxml(doc);
    const PDocument back = parse_pxml(once);
    CHECK(same_structure(back.root, doc.root));
    CHECK(serialize_pxml(back) == once);
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const PDocument doc = test::corpus_doc(seed);
    const PDocument back = parse_pxml(serialize_pxml(doc));
    REQUIRE_MESSAGE(same_structure(back.root, doc.root), "seed " << seed);
  }
}

TEST_CASE("text needing escapes survives a round trip") {
  PDocument doc = make_document(PNode::ordinary("r").with_text("a < b && c > \"d\""));
  CHECK(parse_pxml(serialize_pxml(doc)).root.text == doc.root.text);
}

TEST_CASE("file IO errors") {
  CHECK_THROWS_AS(read_pxml_file(test::data_path("missing.xml")), Error);
  CHECK_THROWS_AS(write_pxml_file("/nonexistent-dir/out.xml", test::fig2a()), Error);
}
