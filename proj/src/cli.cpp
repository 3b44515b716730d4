#include "pxq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "pxq/engine.hpp"
#include "pxq/format.hpp"
#include "pxq/gen.hpp"
#include "pxq/index.hpp"
#include "pxq/worlds.hpp"

namespace pxq {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

InvertedIndex load_index(const std::string& path) {
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    if (looks_like_index(in)) return read_index_file(path);
  }
  return build_index(read_pxml_file(path));
}

Semantics parse_semantics(const std::string& s) {
  if (s == "elca") return Semantics::elca;
  if (s == "slca") return Semantics::slca;
  throw UsageError("unknown semantics '" + s + "'");
}

std::vector<std::string> require_keywords(const std::string& arg) {
  std::vector<std::string> kw = parse_keywords(arg);
  if (kw.empty()) throw UsageError("no keywords in '" + arg + "'");
  return kw;
}

void emit(std::ostream& out, std::vector<ElcaResult> results, std::size_t top,
          const std::string& format) {
  if (top > 0 && results.size() > top) results.resize(top);
  if (format == "json") {
    write_results_json(out, results);
  } else {
    write_results_tsv(out, results);
  }
}

struct Flags {
  std::string doc;
  std::string out_path;
  std::string keywords;
  std::string semantics = "elca";
  std::size_t top = 0;
  std::string format = "tsv";
  std::size_t max_choice_points = WorldsOptions{}.max_choice_points;

  std::vector<std::string> bench_docs;
  std::size_t reps = 3;

  std::string from;
  std::size_t nodes = 10000;
  GenConfig gen;
};

int cmd_index(const Flags& f, std::ostream& out) {
  const InvertedIndex index = build_index(read_pxml_file(f.doc));
  std::string path = f.out_path;
  if (path.empty()) {
    const auto dot = f.doc.find_last_of('.');
    const auto slash = f.doc.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    path = (has_ext ? f.doc.substr(0, dot) : f.doc) + ".idx";
  }
  if (path == "-") {
    write_index(out, index);
  } else {
    write_index_file(path, index);
  }
  return kExitOk;
}

int cmd_query(const Flags& f, std::ostream& out) {
  const auto keywords = require_keywords(f.keywords);
  const Semantics sem = parse_semantics(f.semantics);
  const InvertedIndex index = load_index(f.doc);
  emit(out, run_query(index, keywords, sem), f.top, f.format);
  return kExitOk;
}

int cmd_oracle(const Flags& f, std::ostream& out) {
  const auto keywords = require_keywords(f.keywords);
  const Semantics sem = parse_semantics(f.semantics);
  const PDocument doc = read_pxml_file(f.doc);
  WorldsOptions opts;
  opts.max_choice_points = f.max_choice_points;
  emit(out, oracle_results(doc, keywords, sem, opts), f.top, f.format);
  return kExitOk;
}

int cmd_gen(const Flags& f, std::ostream& out) {
  check_config(f.gen);
  PDocument det;
  if (!f.from.empty()) {
    det = read_pxml_file(f.from);
  } else {
    const double ordinary_share = 1.0 - f.gen.ind_fraction - f.gen.mux_fraction;
    const auto ordinary = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(f.nodes) * ordinary_share)));
    det = synthetic_det_doc(f.gen.seed, ordinary);
  }
  const PDocument doc = inject(det, f.gen);
  if (f.out_path.empty() || f.out_path == "-") {
    out << serialize_pxml(doc);
  } else {
    write_pxml_file(f.out_path, doc);
  }
  return kExitOk;
}

int cmd_bench(const Flags& f, std::ostream& out) {
  const auto keywords = require_keywords(f.keywords);
  std::vector<Semantics> sems;
  if (f.semantics == "both") {
    sems = {Semantics::elca, Semantics::slca};
  } else {
    sems = {parse_semantics(f.semantics)};
  }
  if (f.reps == 0) throw UsageError("repetitions must be positive");

  out << "doc\tnodes\tpostings\tsemantics\tms\tbytes\n";
  for (const std::string& path : f.bench_docs) {
    const InvertedIndex index = load_index(path);
    std::size_t postings = 0;
    for (const std::string& k : keywords) postings += index.lookup(k).size();

    QueryOptions opts;
    opts.check_invariants = false;
    for (Semantics sem : sems) {
      std::vector<double> ms;
      QueryStats stats;
      for (std::size_t r = 0; r < f.reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto results = run_query(index, keywords, sem, opts, &stats);
        const auto t1 = std::chrono::steady_clock::now();
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      }
      std::sort(ms.begin(), ms.end());
      const double median = ms.size() % 2 ? ms[ms.size() / 2]
                                          : (ms[ms.size() / 2 - 1] + ms[ms.size() / 2]) / 2;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", median);
      out << path << '\t' << index.node_count() << '\t' << postings << '\t'
          << semantics_name(sem) << '\t' << buf << '\t' << stats.peak_bytes << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

std::vector<std::string> parse_keywords(std::string_view arg) {
  std::vector<std::string> out;
  for (std::string& tok : tokenize_text(arg)) {
    if (std::find(out.begin(), out.end(), tok) == out.end()) out.push_back(std::move(tok));
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Keyword search over probabilistic XML (PrXML with IND and MUX nodes)", "pxq"};
  app.require_subcommand(1);
  Flags f;

  auto add_query_flags = [&f](CLI::App* sub) {
    sub->add_option("-k,--keywords", f.keywords, "Comma-separated keywords")->required();
    sub->add_option("-s,--semantics", f.semantics, "elca or slca")
        ->check(CLI::IsMember({"elca", "slca"}));
    sub->add_option("--top", f.top, "Print only the first N rows (0 = all)");
    sub->add_option("--format", f.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  };

  auto* index = app.add_subcommand("index", "Build the postings file of a PrXML document");
  index->add_option("doc", f.doc, "PrXML document")->required();
  index->add_option("-o,--out", f.out_path, "Output path ('-' for stdout; default DOC.idx)");

  auto* query = app.add_subcommand("query", "Rank nodes by ELCA or SLCA probability");
  query->add_option("index", f.doc, "Postings file or PrXML document")->required();
  add_query_flags(query);

  auto* oracle = app.add_subcommand("oracle", "Same as query, by enumerating possible worlds");
  oracle->add_option("doc", f.doc, "PrXML document")->required();
  add_query_flags(oracle);
  oracle->add_option("--max-choice-points", f.max_choice_points,
                     "Refuse documents with more distributional nodes");

  auto* gen = app.add_subcommand("gen", "Generate a PrXML document");
  gen->add_option("-o,--out", f.out_path, "Output path (default stdout)");
  gen->add_option("--seed", f.gen.seed, "Random seed");
  gen->add_option("--nodes", f.nodes, "Approximate total node count of a synthetic document");
  gen->add_option("--from", f.from, "Inject into this document instead of a synthetic one");
  gen->add_option("--ind", f.gen.ind_fraction, "Target share of IND nodes");
  gen->add_option("--mux", f.gen.mux_fraction, "Target share of MUX nodes");
  gen->add_option("--prob-lo", f.gen.prob_lo, "Smallest drawn edge probability");
  gen->add_option("--prob-hi", f.gen.prob_hi, "Largest drawn edge probability");

  auto* bench = app.add_subcommand("bench", "Time queries over several documents");
  bench->add_option("docs", f.bench_docs, "Postings files or PrXML documents")->required();
  bench->add_option("-k,--keywords", f.keywords, "Comma-separated keywords")->required();
  bench->add_option("-s,--semantics", f.semantics, "elca, slca or both")
      ->check(CLI::IsMember({"elca", "slca", "both"}));
  bench->add_option("-r,--reps", f.reps, "Repetitions per query; the median is reported");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (index->parsed()) return cmd_index(f, out);
    if (query->parsed()) return cmd_query(f, out);
    if (oracle->parsed()) return cmd_oracle(f, out);
    if (gen->parsed()) return cmd_gen(f, out);
    return cmd_bench(f, out);
  } catch (const CapExceeded& e) {
    err << "pxq: " << e.what() << '\n';
    return kExitCap;
  } catch (const UsageError& e) {
    err << "pxq: " << e.what() << '\n';
    return kExitUsage;
  } catch (const QueryError& e) {
    err << "pxq: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "pxq: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace pxq
