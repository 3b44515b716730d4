#include "doctest.h"

#include <sstream>

#include "support.hpp"

using namespace pxq;

namespace {

std::vector<std::string> dotted(std::span<const Posting> list) {
  std::vector<std::string> out;
  for (const Posting& p : list) out.push_back(dewey_string(decode_pdewey(p.code).components));
  return out;
}

}  // namespace

TEST_CASE("tokenizer") {
  CHECK(tokenize_text("Keyword-Search over XML, 2010!") ==
        std::vector<std::string>{"keyword", "search", "over", "xml", "2010"});
  CHECK(tokenize_text("  ").empty());
  CHECK(tokenize_text("caf\xc3\xa9 bar") == std::vector<std::string>{"caf\xc3\xa9", "bar"});
  const PNode n = PNode::ordinary("Title").with_text("title of a Title");
  CHECK(tokenize(n) == std::set<std::string>{"title", "of", "a"});
}

TEST_CASE("fig2b postings are in document order") {
  const InvertedIndex index = build_index(test::fig2b());
  CHECK(dotted(index.lookup("a")) ==
        std::vector<std::string>{"1.1.1.1", "1.1.1.2.1.1", "1.2.1.1.1"});
  CHECK(dotted(index.lookup("b")) ==
        std::vector<std::string>{"1.1.1.2.1.2", "1.1.1.3", "1.2.1.1.2", "1.2.2"});
  CHECK(index.lookup("a").size() == 3);
  CHECK(index.lookup("zzz").empty());
  CHECK(lookup(index, "x").size() == 4);

  const Posting& a2 = index.lookup("a")[1];
  CHECK(to_string(a2.code) == "2,2,1.8,3,2,1.6");
  CHECK(a2.kinds == std::vector<NodeKind>{NodeKind::ordinary, NodeKind::ind, NodeKind::ordinary,
                                          NodeKind::ordinary, NodeKind::ind, NodeKind::ordinary});
  CHECK(*index.label(test::kX1) == "x");
  CHECK(index.label(test::kInd2) == nullptr);
  CHECK(index.node_count() == 15);
}

TEST_CASE("every list is sorted by code") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const InvertedIndex index = build_index(test::corpus_doc(seed));
    for (const auto& [kw, list] : index.lists()) {
      for (std::size_t i = 1; i < list.size(); ++i) REQUIRE(list[i - 1].code < list[i].code);
    }
  }
}

TEST_CASE("postings file round trip") {
  for (const PDocument& doc : {test::fig2b(), test::corpus_doc(5), test::corpus_doc(9)}) {
    const InvertedIndex index = build_index(doc);
    std::stringstream buf;
    write_index(buf, index);
    std::istringstream peek(buf.str());
    CHECK(looks_like_index(peek));
    CHECK(read_index(buf) == index);
  }
  std::istringstream xml("<r/>");
  CHECK_FALSE(looks_like_index(xml));
}

TEST_CASE("corrupt postings files are rejected") {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_index(in);
  };
  CHECK_THROWS_AS(read(""), IndexError);
  CHECK_THROWS_AS(read("#pxq-index v1 nodes=x\n"), IndexError);
  CHECK_THROWS_AS(read("#pxq-index v1 nodes=3\na\t2,3\tO\n"), IndexError);
  CHECK_THROWS_AS(read("#pxq-index v1 nodes=3\na\t2,3\tOI\n"), IndexError);
  CHECK_THROWS_AS(read("#pxq-index v1 nodes=3\na\t2,3\tOO\na\t2,2\tOO\n"), IndexError);
  CHECK_THROWS_AS(read("#pxq-index v1 nodes=3\na\t2,0\tOO\n"), IndexError);
  CHECK_THROWS_AS(read("#pxq-index v1 nodes=3\na 2,3 OO\n"), IndexError);
  CHECK_NOTHROW(read("#pxq-index v1 nodes=3\na\t2,2\tOO\na\t2,3\tOO\n#label\t1\tr\n"));
  CHECK_THROWS_AS(read_index_file(test::data_path("missing.idx")), Error);
}
