#include <doctest.h>
#include <nlohmann/json.hpp>

#include <sstream>

#include "corpus_fixture.hpp"
#include "litnet/error.hpp"
#include "litnet/pipeline.hpp"
#include "litnet/util.hpp"
#include "tempdir.hpp"

using namespace litnet;
using namespace litnet::pipeline;
using nlohmann::json;

namespace {

std::string digest_of(const fs::path& p) { return sha256_file(p); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("config parsing") {
    testing::TempDir dir;
    fs::create_directories(dir / "corpus");
    write_file_atomic(dir / "cfg.json", R"({
      "corpus_dir": "corpus",
      "seeds": {"sample": 1, "cluster": 2},
      "rings": 3,
      "sign_basis": "raw",
      "cues": {"positive": ["Positive", "favourable"], "window": 4},
      "phrase_rule": {"content_pos": ["NOUN", "PROPN"], "gap": 2},
      "render": {"mode": "sign_nodes", "ego": "information"}
    })");
    const auto c = PipelineConfig::load(dir / "cfg.json");
    CHECK(c.corpus_dir == dir / "corpus");
    CHECK(c.sample_seed == 1u);
    CHECK(c.rings == 3);
    CHECK(c.sign_basis == findnet::SignBasis::raw);
    CHECK(c.cues.positive_cues.contains("favourable"));
    CHECK(c.cues.positive_cues.contains("positive"));
    CHECK(c.cues.window == 4);
    CHECK_FALSE(c.phrase_rule.content_pos.contains(nlp::Upos::ADJ));
    CHECK(c.render.ego == "information");
    CHECK(c.resolved_verbs_file() == dir / "corpus" / "verbs.tsv");
    CHECK_NOTHROW(c.validate());
    const auto again = PipelineConfig::from_json(c.to_json(), "/");
    CHECK(again.to_json() == c.to_json());
  }

  TEST_CASE("config errors") {
    testing::TempDir dir;
    auto bad = [&](const std::string& body) {
      write_file_atomic(dir / "cfg.json", body);
      return code_of([&] { PipelineConfig::load(dir / "cfg.json").validate(); });
    };
    CHECK(bad(R"({"corpus_dir": ".", "bogus": 1})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"corpus_dir": ".", "seeds": {"sample": 1}})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"corpus_dir": ".", "seeds": {"sample": 1, "cluster": 2}, "metadata_file": "nope.csv"})") ==
          ErrorCode::ConfigError);
    CHECK(bad(R"({"corpus_dir": ".", "seeds": {"sample": 1, "cluster": 2}, "depend_fallback": "maybe"})") ==
          ErrorCode::ConfigError);
    CHECK(bad(R"({"corpus_dir": ".", "seeds": {"sample": "x", "cluster": 2}})") == ErrorCode::ConfigError);
    CHECK(bad("{not json") == ErrorCode::ConfigError);
    CHECK(bad(R"({"corpus_dir": "missing-dir", "seeds": {"sample": 1, "cluster": 2}})") == ErrorCode::ConfigError);
  }

  TEST_CASE("ingest a three-PDF corpus") {
    testing::TempDir dir;
    for (int i = 0; i < 3; ++i) {
      testing::PdfWriter w("Paper " + std::to_string(i));
      w.paragraph("Results");
      w.paragraph("Information increases awareness.");
      w.save(dir / ("pdfs/p" + std::to_string(i) + ".pdf"));
    }
    Pipeline p(testing::config_for(dir.path()));
    const auto r = p.run(Stage::ingest);
    CHECK(r.failures.empty());
    CHECK(corpus::CorpusStore(dir.path()).load().size() == 3);
  }

  TEST_CASE("stages need their upstream") {
    testing::TempDir dir;
    testing::write_planted_corpus(dir.path());
    Pipeline p(testing::config_for(dir.path()));
    CHECK(code_of([&] { p.run(Stage::extract); }) == ErrorCode::MissingPriorStage);
    p.run(Stage::ingest);
    CHECK(code_of([&] { p.run(Stage::sectionize); }) == ErrorCode::MissingPriorStage);
  }

  TEST_CASE("run all twice is a no-op the second time") {
    testing::TempDir dir;
    const auto planted = testing::write_planted_corpus(dir.path());
    Pipeline p(testing::config_for(dir.path()));
    for (const auto& r : p.run_all()) {
      CHECK_FALSE(r.skipped);
      CHECK(r.failures.empty());
    }
    std::map<std::string, std::string> before;
    for (const char* f : {"corpus.jsonl", "sentences.jsonl", "relations.jsonl", "graph.json", "graph.graphml",
                          "graph.dot", "graph.svg", "verbs.tsv", "manifest.json"})
      before[f] = digest_of(dir / f);
    for (const auto& r : p.run_all()) CHECK(r.skipped);
    for (const auto& [f, d] : before) CHECK_MESSAGE(digest_of(dir / f) == d, f);

    const auto g = json::parse(read_file(dir / "graph.json"));
    CHECK(g["n_articles"] == 12);
    CHECK(g["edges"].size() == planted.edges.size());
  }

  TEST_CASE("a classification reruns extract and everything after it") {
    testing::TempDir dir;
    testing::write_planted_corpus(dir.path());
    Pipeline p(testing::config_for(dir.path()));
    p.run_all();
    const auto graph_before = read_file(dir / "graph.json");
    verblex::VerbStore(dir / "verbs.tsv").classify("summarize", verblex::Category::positive, "test");
    const auto results = p.run_all();
    for (const auto& r : results) {
      const bool downstream = r.stage == Stage::extract || r.stage == Stage::graph || r.stage == Stage::render;
      CHECK_MESSAGE(r.skipped == !downstream, to_string(r.stage));
    }
    const auto g = json::parse(read_file(dir / "graph.json"));
    bool found = false;
    for (const auto& e : g["edges"]) found = found || (e["source"] == "table" && e["target"] == "estimate");
    CHECK(found);
    CHECK(read_file(dir / "graph.json") != graph_before);
  }

  TEST_CASE("document failures are reported without aborting") {
    testing::TempDir dir;
    testing::write_planted_corpus(dir.path());
    write_file_atomic(dir / "pdfs/zz-broken.pdf", "not a pdf");
    testing::PdfWriter w;
    w.paragraph("Introduction");
    w.paragraph("Only background here.");
    w.save(dir / "pdfs/zz-intro-only.pdf");
    Pipeline p(testing::config_for(dir.path()));
    const auto results = p.run_all();
    CHECK(results[0].failures.size() == 1);
    CHECK(results[3].failures.size() == 1);
    CHECK(results[3].failures[0].find("NoFindingsText") != std::string::npos);
    const auto g = json::parse(read_file(dir / "graph.json"));
    CHECK(g["n_articles"] == 13);
  }

  TEST_CASE("forced rerun rewrites identical outputs") {
    testing::TempDir dir;
    testing::write_planted_corpus(dir.path());
    Pipeline p(testing::config_for(dir.path()));
    p.run_all();
    const auto before = read_file(dir / "graph.json");
    for (const auto& r : p.run_all(true)) CHECK_FALSE(r.skipped);
    CHECK(read_file(dir / "graph.json") == before);
  }

  TEST_CASE("external tagger through the config") {
    testing::TempDir dir;
    testing::PdfWriter w;
    w.paragraph("Results");
    w.paragraph("Information increases awareness.");
    w.save(dir / "pdfs/p.pdf");
    auto c = testing::config_for(dir.path());
    c.tagger.kind = "external";
    c.tagger.command = "python3 " + std::string(LITNET_FIXTURES) + "/../support/lookup_tagger.py " +
                       std::string(LITNET_FIXTURES) + "/gold_pos.tsv";
    Pipeline p(c);
    p.run_all();
    const auto sentences = load_sentences(p.sentences_path());
    REQUIRE(sentences.size() == 1);
    CHECK(sentences[0].tokens[1].lemma == "increases");
  }

  TEST_CASE("corpus lock") {
    testing::TempDir dir;
    {
      CorpusLock lock(dir.path());
      CHECK(code_of([&] { CorpusLock second(dir.path()); }) == ErrorCode::IoError);
      Pipeline p(testing::config_for(dir.path()));
      CHECK(code_of([&] { p.run(Stage::ingest); }) == ErrorCode::IoError);
    }
    CHECK_FALSE(fs::exists(dir / ".litnet.lock"));
    write_file_atomic(dir / ".litnet.lock", "999999999\n");
    CHECK_NOTHROW(CorpusLock(dir.path()));
  }

  TEST_CASE("annotation loop") {
    testing::TempDir dir;
    testing::write_planted_corpus(dir.path());
    Pipeline p(testing::config_for(dir.path()));
    p.run(Stage::ingest);
    p.run(Stage::normalize);
    p.run(Stage::sectionize);
    p.run(Stage::tagsents);
    p.run(Stage::harvest);
    const auto freq = load_frequencies(p.frequencies_path());
    const auto sentences = load_sentences(p.sentences_path());
    verblex::VerbStore store(dir / "verbs.tsv");
    auto pending = [&] {
      std::vector<std::string> out;
      const auto d = verblex::VerbStore(dir / "verbs.tsv").snapshot();
      for (const auto& [l, n] : freq)
        if (d.category(l) == verblex::Category::unclassified) out.push_back(l);
      return out;
    };
    const auto start = pending();
    REQUIRE(start.size() == 2);
    CHECK(std::set<std::string>(start.begin(), start.end()) == std::set<std::string>{"need", "summarize"});

    std::istringstream in("s\nbogus\nn\nquit\n");
    std::ostringstream out;
    const auto s1 = annotate_loop(store, freq, sentences, 1, in, out, "tester");
    CHECK(s1.classified == 1);
    CHECK(s1.skipped == 1);
    CHECK_FALSE(s1.completed);
    CHECK(out.str().find("[[") != std::string::npos);
    CHECK(out.str().find("unrecognized choice 'bogus'") != std::string::npos);
    CHECK(pending() == std::vector<std::string>{start[0]});
    CHECK(store.snapshot().find(start[1])->annotator == "tester");
    CHECK(store.snapshot().category(start[1]) == verblex::Category::negative);

    std::istringstream in2("x\n");
    std::ostringstream out2;
    const auto s2 = annotate_loop(store, freq, sentences, 1, in2, out2);
    CHECK(s2.classified == 1);
    CHECK(s2.completed);
    CHECK(out2.str().ends_with("All verbs classified.\n"));
    CHECK(pending().empty());

    std::istringstream in3("");
    std::ostringstream out3;
    CHECK(annotate_loop(store, freq, sentences, 1, in3, out3).completed);
    CHECK(out3.str() == "All verbs classified.\n");
  }
}
