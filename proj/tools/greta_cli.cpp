// greta: run nested Kleene pattern aggregation queries over CSV event
// streams, generate synthetic workloads, and benchmark the incremental
// engine against the brute-force two-step baseline.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "greta/greta.hpp"

namespace {

// exit codes: 0 ok, 2 query error, 3 data error, 4 overflow, 1 other
constexpr int kExitQueryError = 2;
constexpr int kExitDataError = 3;
constexpr int kExitOverflow = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw greta::DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<greta::Event> load_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw greta::DataError("cannot open file: " + path);
  return greta::read_events_csv(in);
}

struct RunArgs {
  std::string query_file, input, output;
  std::string engine = "greta";
  std::string count_mode = "checked";
  int threads = 1;
  int min_length = 1;
  bool no_pruning = false;
  std::size_t oracle_cap = 20;
  bool force = false;
};

int cmd_run(const RunArgs& a) {
  greta::Query q = greta::parse_query(read_file(a.query_file));
  std::vector<greta::Event> events = load_events(a.input);

  std::vector<greta::ResultRow> rows;
  std::vector<greta::RunMetrics> metrics;
  if (a.engine == "greta") {
    greta::CompileOptions co;
    co.mode = a.count_mode == "saturating" ? greta::CountMode::Saturating
                                           : greta::CountMode::Checked;
    co.pruning = !a.no_pruning;
    co.min_length = a.min_length;
    greta::CompiledQuery cq = greta::compile(q, co);
    if (a.threads > 1) {
      greta::RunMetrics m;
      m.engine = "greta";
      m.events = events.size();
      const auto t0 = std::chrono::steady_clock::now();
      rows = greta::run_engine_parallel(cq, events, a.threads);
      m.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
      m.rows = rows.size();
      if (m.elapsed_ms > 0 && m.events > 0)
        m.throughput_eps = 1000.0 * double(m.events) / m.elapsed_ms;
      metrics.push_back(m);
    } else {
      greta::RunMetrics m;
      rows = greta::run_engine_instrumented(cq, events, m);
      metrics.push_back(m);
    }
  } else if (a.engine == "oracle") {
    if (!a.force) {
      std::size_t worst = greta::max_window_pool(q, events);
      if (worst > a.oracle_cap)
        throw greta::DataError(
            "oracle run refused: a window holds " + std::to_string(worst) +
            " events (cap " + std::to_string(a.oracle_cap) +
            "); pass --force to override");
    }
    greta::OracleOptions oo;
    oo.max_window_events = a.force ? SIZE_MAX : a.oracle_cap;
    oo.min_length = a.min_length;
    greta::RunMetrics m;
    rows = greta::run_oracle_instrumented(q, events, oo, m);
    metrics.push_back(m);
  } else {
    throw greta::DataError("unknown engine '" + a.engine + "'");
  }

  std::ofstream out(a.output);
  if (!out) throw greta::DataError("cannot write file: " + a.output);
  greta::write_results_csv(out, rows);
  greta::print_metrics_table(std::cout, metrics);
  return 0;
}

struct GenArgs {
  std::string workload, output;
  std::uint64_t events = 1000;
  double rate = 10.0;
  std::uint64_t seed = 1;
};

int cmd_generate(const GenArgs& a) {
  greta::GenerateOptions o;
  o.workload = a.workload;
  o.events = a.events;
  o.rate = a.rate;
  o.seed = a.seed;
  std::vector<greta::Event> events = greta::generate_workload(o);
  std::ofstream out(a.output);
  if (!out) throw greta::DataError("cannot write file: " + a.output);
  greta::write_events_csv(out, events);
  std::cout << "wrote " << events.size() << " events to " << a.output << "\n";
  return 0;
}

struct BenchArgs {
  std::string query_file, workload, report;
  std::string engines = "greta,oracle";
  std::string count_mode = "saturating";
  std::uint64_t events = 1000;
  double rate = 10.0;
  std::uint64_t seed = 1;
  std::uint64_t timeout_ms = 60000;
  std::size_t oracle_cap = 20;
  bool force = false;
};

int cmd_bench(const BenchArgs& a) {
  greta::Query q = greta::parse_query(read_file(a.query_file));
  greta::GenerateOptions go;
  go.workload = a.workload;
  go.events = a.events;
  go.rate = a.rate;
  go.seed = a.seed;
  std::vector<greta::Event> events = greta::generate_workload(go);

  std::vector<greta::RunMetrics> all;
  std::stringstream engines(a.engines);
  std::string engine;
  while (std::getline(engines, engine, ',')) {
    greta::RunMetrics m;
    if (engine == "greta") {
      greta::CompileOptions co;
      co.mode = a.count_mode == "checked" ? greta::CountMode::Checked
                                          : greta::CountMode::Saturating;
      greta::CompiledQuery cq = greta::compile(q, co);
      greta::run_engine_instrumented(cq, events, m);
    } else if (engine == "oracle") {
      if (!a.force && greta::max_window_pool(q, events) > a.oracle_cap) {
        m.engine = "oracle";
        m.events = events.size();
        m.status = "skipped";
      } else {
        greta::OracleOptions oo;
        oo.max_window_events = SIZE_MAX;
        oo.timeout = std::chrono::milliseconds(a.timeout_ms);
        greta::run_oracle_instrumented(q, events, oo, m);
      }
    } else {
      throw greta::DataError("unknown engine '" + engine + "'");
    }
    all.push_back(m);
  }

  if (!a.report.empty()) {
    std::ofstream out(a.report);
    if (!out) throw greta::DataError("cannot write file: " + a.report);
    greta::write_metrics_csv(out, all);
  }
  greta::print_metrics_table(std::cout, all);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"incremental event-trend aggregation over event streams"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "evaluate a query over a CSV stream");
  run->add_option("--query", ra.query_file, "query file")->required();
  run->add_option("--input", ra.input, "input event CSV")->required();
  run->add_option("--output", ra.output, "output results CSV")->required();
  run->add_option("--engine", ra.engine, "greta|oracle");
  run->add_option("--threads", ra.threads, "worker threads (greta engine)");
  run->add_option("--count-mode", ra.count_mode, "checked|saturating");
  run->add_option("--min-length", ra.min_length, "minimal trend length");
  run->add_flag("--no-pruning", ra.no_pruning, "disable graph pruning");
  run->add_option("--oracle-cap", ra.oracle_cap,
                  "per-window event cap for the oracle engine");
  run->add_flag("--force", ra.force, "run the oracle past its event cap");

  GenArgs ga;
  auto* gen = app.add_subcommand("generate", "generate a synthetic workload");
  gen->add_option("--workload", ga.workload, "cluster|road|stock")->required();
  gen->add_option("--events", ga.events, "number of events");
  gen->add_option("--rate", ga.rate, "events per time unit");
  gen->add_option("--seed", ga.seed, "RNG seed");
  gen->add_option("--output", ga.output, "output CSV")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "benchmark engines on a workload");
  bench->add_option("--query", ba.query_file, "query file")->required();
  bench->add_option("--workload", ba.workload, "cluster|road|stock")
      ->required();
  bench->add_option("--engines", ba.engines, "comma-separated engine list");
  bench->add_option("--events", ba.events, "number of events");
  bench->add_option("--rate", ba.rate, "events per time unit");
  bench->add_option("--seed", ba.seed, "RNG seed");
  bench->add_option("--report", ba.report, "metrics report CSV");
  bench->add_option("--timeout-ms", ba.timeout_ms, "oracle time budget");
  bench->add_option("--count-mode", ba.count_mode, "checked|saturating");
  bench->add_option("--oracle-cap", ba.oracle_cap,
                    "per-window event cap for the oracle engine");
  bench->add_flag("--force", ba.force, "run the oracle past its event cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(ra);
    if (*gen) return cmd_generate(ga);
    if (*bench) return cmd_bench(ba);
  } catch (const greta::ParseError& e) {
    std::cerr << "query error: " << e.what() << "\n";
    return kExitQueryError;
  } catch (const greta::QueryError& e) {
    std::cerr << "query error: " << e.what() << "\n";
    return kExitQueryError;
  } catch (const greta::OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const greta::OracleBudgetError& e) {
    std::cerr << "oracle budget exceeded: " << e.what() << "\n";
    return kExitDataError;
  } catch (const greta::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const greta::OutOfOrderError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
