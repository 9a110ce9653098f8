// Command-line front end: simulation experiments, the live reading service,
// and a few corpus utilities.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hare/corpus.hpp"
#include "hare/embed.hpp"
#include "hare/errors.hpp"
#include "hare/service.hpp"
#include "hare/simharness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CorpusFlags {
  std::string path;
  std::size_t min_sentences = hare::kDefaultMinSentences;
  std::string provider = "hashed";
  std::size_t dimension = hare::kDefaultEmbeddingDimension;

  void add_to(CLI::App& app) {
    app.add_option("--corpus", path, "Corpus file (one JSON record per line)")->required();
    app.add_option("--min-sentences", min_sentences, "Drop shorter documents")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--provider", provider, "Embedding provider: hashed or file:PATH")
        ->capture_default_str();
    app.add_option("--dim", dimension, "Dimension of the hashed provider")->capture_default_str();
  }
};

std::shared_ptr<const hare::EmbeddingProvider> make_provider(const CorpusFlags& flags,
                                                             const hare::Corpus& corpus) {
  if (flags.provider == "hashed") return hare::make_hashed_provider(corpus, flags.dimension);
  if (flags.provider.rfind("file:", 0) == 0) {
    return hare::make_file_provider(flags.provider.substr(5));
  }
  throw hare::ConfigError("unknown provider '" + flags.provider + "' (hashed or file:PATH)");
}

std::vector<double> parse_noise(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double m = std::stod(item, &used);
      if (used != item.size() || !(m > 0.0)) throw std::invalid_argument(item);
      out.push_back(m);
    } catch (const std::exception&) {
      throw hare::ConfigError("noise level '" + item + "' is not a positive number");
    }
  }
  if (out.size() != 2) {
    throw hare::ConfigError("--noise takes two levels: sharp,noisy (e.g. 0.01,0.1)");
  }
  return out;
}

struct SimFlags {
  CorpusFlags corpus;
  std::vector<std::string> policies;
  std::string grid;
  std::string noise = "0.01,0.1";
  std::size_t trials = 3;
  std::size_t k_user = hare::kDefaultUserConcepts;
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
  bool timing = false;
  std::size_t threads = 0;
};

int run_sim(const SimFlags& f) {
  const auto noise = parse_noise(f.noise);
  if (f.policies.empty() && f.grid.empty()) {
    throw hare::ConfigError("give at least one --policy or a --grid");
  }
  std::vector<hare::PolicySpec> specs;
  for (const auto& p : f.policies) specs.push_back(hare::PolicySpec::parse(p));
  std::vector<std::string> grid;
  if (f.grid == "appendixA") {
    grid = hare::appendix_a_grid();
  } else if (!f.grid.empty()) {
    grid = hare::read_grid_file(f.grid);
  }
  // Expand now so pattern errors surface before the expensive part.
  for (const auto& pattern : grid) {
    for (const auto& s : hare::expand_braces(pattern)) hare::PolicySpec::parse(s);
  }
  const auto format =
      f.format == "markdown" ? hare::ReportFormat::kMarkdown : hare::ReportFormat::kCsv;

  const auto corpus = hare::load_corpus(f.corpus.path, f.corpus.min_sentences);
  const auto provider = make_provider(f.corpus, corpus);

  hare::ExperimentConfig config;
  config.sharp_m = noise[0];
  config.noisy_m = noise[1];
  config.trials = f.trials;
  config.k_user = f.k_user;
  config.seed = f.seed;
  config.threads = f.threads;
  config.timing = f.timing;
  const auto population = hare::make_population(corpus, *provider, config);

  hare::ResultsTable table = hare::run_experiment(population, specs);
  if (!grid.empty()) {
    auto searched = hare::grid_search(population, grid);
    table.rows.insert(table.rows.end(), searched.rows.begin(), searched.rows.end());
  }
  if (f.out.empty() || f.out == "-") {
    if (table.empty()) throw hare::ConfigError("nothing to report");
    hare::write_report(table, format, std::cout);
  } else {
    hare::emit_report(table, format, f.out);
    std::cerr << "wrote " << table.rows.size() << " rows to " << f.out << '\n';
  }
  return kExitOk;
}

struct ServeFlags {
  CorpusFlags corpus;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::uint64_t seed = 42;
  std::string event_log;
  long ttl_hours = 24;
};

hare::service::HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const ServeFlags& f) {
  auto corpus = hare::load_corpus(f.corpus.path, f.corpus.min_sentences);
  auto provider = make_provider(f.corpus, corpus);
  hare::service::ServiceOptions options;
  options.seed = f.seed;
  options.ttl = std::chrono::hours(f.ttl_hours);
  if (!f.event_log.empty()) options.event_log = f.event_log;
  hare::service::SessionManager manager(std::move(corpus), provider, options);
  hare::service::HttpServer server(manager);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "serving " << manager.articles().size() << " articles on http://" << f.host
            << ':' << f.port << '\n';
  const bool ok = server.listen(f.host, f.port);
  g_server = nullptr;
  if (!ok) {
    std::cerr << "error: could not bind " << f.host << ':' << f.port << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run_export(const CorpusFlags& flags, const std::string& out_path) {
  const auto corpus = hare::load_corpus(flags.path, flags.min_sentences);
  const auto provider = make_provider(flags, corpus);
  if (out_path.empty() || out_path == "-") {
    hare::write_embeddings(corpus, *provider, std::cout);
    return kExitOk;
  }
  std::ofstream out(out_path);
  if (!out) throw hare::IoError("cannot write " + out_path);
  hare::write_embeddings(corpus, *provider, out);
  return kExitOk;
}

int run_stats(const CorpusFlags& flags) {
  const auto corpus = hare::load_corpus(flags.path, flags.min_sentences);
  std::size_t lo = corpus.documents.front().size(), hi = lo;
  for (const auto& d : corpus.documents) {
    lo = std::min(lo, d.size());
    hi = std::max(hi, d.size());
  }
  std::printf("documents %zu\ndropped %zu\nmean_sentences %.4f\nmin_sentences %zu\n"
              "max_sentences %zu\n",
              corpus.size(), corpus.dropped, corpus.mean_sentences(), lo, hi);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hare: hone-as-you-read simulation and reading service"};
  app.require_subcommand(1);

  SimFlags sim;
  auto* sim_cmd = app.add_subcommand("sim", "Run policies against simulated readers");
  sim.corpus.add_to(*sim_cmd);
  sim_cmd->add_option("--policy", sim.policies, "Policy spec, e.g. hide_next:n=2 (repeatable)");
  sim_cmd->add_option("--grid", sim.grid, "appendixA or a file of brace patterns");
  sim_cmd->add_option("--noise", sim.noise, "Sharp and noisy feedback levels")
      ->capture_default_str();
  sim_cmd->add_option("--trials", sim.trials, "Trials per stochastic policy")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--k-user", sim.k_user, "Concepts per simulated user")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "Experiment seed")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Report path (stdout when omitted)");
  sim_cmd->add_option("--format", sim.format, "csv or markdown")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "markdown"}));
  sim_cmd->add_flag("--timing", sim.timing, "Fill ms_per_session (makes output non-reproducible)");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();

  ServeFlags serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve live reading sessions over HTTP");
  serve.corpus.add_to(*serve_cmd);
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.port)->capture_default_str();
  serve_cmd->add_option("--seed", serve.seed, "Seed for stochastic policies")
      ->capture_default_str();
  serve_cmd->add_option("--event-log", serve.event_log, "Append study events to this file");
  serve_cmd->add_option("--ttl-hours", serve.ttl_hours, "Idle session lifetime")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  CorpusFlags export_flags;
  std::string export_out;
  auto* export_cmd =
      app.add_subcommand("export-embeddings", "Write sentence vectors in the embedding file format");
  export_flags.add_to(*export_cmd);
  export_cmd->add_option("--out", export_out, "Output path (stdout when omitted)");

  CorpusFlags stats_flags;
  auto* stats_cmd = app.add_subcommand("corpus-stats", "Summarize a corpus file");
  stats_flags.add_to(*stats_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim_cmd) return run_sim(sim);
    if (*serve_cmd) return run_serve(serve);
    if (*export_cmd) return run_export(export_flags, export_out);
    if (*stats_cmd) return run_stats(stats_flags);
  } catch (const hare::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hare::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hare::EmptyCorpus& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hare::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
