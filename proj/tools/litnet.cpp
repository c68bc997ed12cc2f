// litnet command line: pipeline stages, verb annotation and the HTTP server.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "litnet/error.hpp"
#include "litnet/pipeline.hpp"
#include "litnet/server.hpp"

namespace fs = std::filesystem;
using namespace litnet;

namespace {

struct GlobalOptions {
  std::string config;
  std::string corpus;
  std::optional<std::uint64_t> seed_sample;
  std::optional<std::uint64_t> seed_cluster;
  bool force = false;
  std::optional<unsigned> threads;
};

pipeline::PipelineConfig make_config(const GlobalOptions& g) {
  pipeline::PipelineConfig c;
  if (!g.config.empty()) c = pipeline::PipelineConfig::load(g.config);
  if (!g.corpus.empty()) c.corpus_dir = fs::absolute(g.corpus).lexically_normal();
  if (g.seed_sample) c.sample_seed = g.seed_sample;
  if (g.seed_cluster) c.cluster_seed = g.seed_cluster;
  if (g.threads) c.threads = *g.threads;
  return c;
}

int report(const std::vector<pipeline::StageResult>& results) {
  int code = 0;
  for (const auto& r : results) {
    std::cout << pipeline::to_string(r.stage) << ": " << (r.skipped ? "up to date" : "done");
    if (!r.failures.empty()) std::cout << " (" << r.failures.size() << " document failures)";
    std::cout << "\n";
    for (const auto& f : r.failures) std::cerr << "  " << pipeline::to_string(r.stage) << ": " << f << "\n";
    if (!r.failures.empty()) code = 1;
  }
  return code;
}

server::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed findings networks from scientific articles"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--corpus", g.corpus, "corpus directory (overrides corpus_dir)");
  app.add_option("--seed-sample", g.seed_sample, "seed for sentence and article sampling");
  app.add_option("--seed-cluster", g.seed_cluster, "seed recorded for clustering");
  app.add_flag("--force", g.force, "rerun stages even when inputs are unchanged");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");

  std::vector<std::pair<CLI::App*, pipeline::Stage>> stage_cmds;
  for (auto s : pipeline::all_stages()) {
    auto* cmd = app.add_subcommand(std::string(pipeline::to_string(s)), "run the " + std::string(pipeline::to_string(s)) + " stage");
    stage_cmds.emplace_back(cmd, s);
  }
  auto* all = app.add_subcommand("all", "run every stage in order");

  auto* annotate = app.add_subcommand("annotate", "classify harvested verbs interactively");
  std::string annotator = "cli";
  std::size_t sample_n = 10;
  annotate->add_option("--annotator", annotator, "name recorded with each classification");
  annotate->add_option("-n,--sentences", sample_n, "sample sentences per verb");

  auto* serve = app.add_subcommand("serve", "serve the JSON API and web UI");
  std::string host = "127.0.0.1";
  int port = 8765;
  std::string webui;
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port (0 = any free port)");
  serve->add_option("--webui", webui, "directory holding the web UI bundle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto config = make_config(g);
    for (const auto& [cmd, stage] : stage_cmds) {
      if (cmd->parsed()) {
        pipeline::Pipeline p(config);
        return report({p.run(stage, g.force)});
      }
    }
    if (all->parsed()) {
      pipeline::Pipeline p(config);
      return report(p.run_all(g.force));
    }
    if (annotate->parsed()) {
      pipeline::Pipeline p(config);
      const auto freq = pipeline::load_frequencies(p.frequencies_path());
      const auto sentences = pipeline::load_sentences(p.sentences_path());
      verblex::VerbStore store(config.resolved_verbs_file());
      const auto summary =
          pipeline::annotate_loop(store, freq, sentences, config.require_sample_seed(), std::cin, std::cout, annotator,
                                  sample_n);
      std::cout << summary.classified << " classified, " << summary.skipped << " skipped\n";
      return 0;
    }
    if (serve->parsed()) {
      std::optional<fs::path> webui_dir;
      if (!webui.empty()) webui_dir = fs::path(webui);
      server::ApiService api(config, webui_dir);
      server::HttpServer http(api);
      const int bound = http.bind(host, port);
      if (bound < 0) throw Error(ErrorCode::ConfigError, "cannot bind " + host + ":" + std::to_string(port));
      std::cout << "listening on http://" << host << ":" << bound << "/" << std::endl;
      g_server = &http;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      http.listen_after_bind();
      g_server = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "litnet: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "litnet: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
