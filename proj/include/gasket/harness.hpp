#pragma once

// Reproducible experiments: configuration, replica-parallel sampling and reports.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gasket/walker.hpp"

namespace gasket {

enum class Command { exact, mc_shapes, mc_length, limit_path, dimension, moments };
enum class OutputFormat { json, csv, svg };

std::string_view to_string(Command c);
std::string_view to_string(OutputFormat f);
Command parse_command(std::string_view s);
OutputFormat parse_format(std::string_view s);

struct RunConfig {
  Command command = Command::exact;
  /// N for mc-shapes and mc-length, K for moments.
  int level = 1;
  /// M for limit-path and dimension.
  int depth = 0;
  int samples = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  Crossing variant = Crossing::direct;
  SampleMethod method = SampleMethod::rejection;
  /// File prefix; empty means standard output.
  std::string output;
  OutputFormat format = OutputFormat::json;
};

/// Throws error(config_invalid) when a field is out of range or the format does
/// not apply to the command.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

/// git-describe identifier of this build.
std::string build_id();

struct RunResult {
  /// Full report; embeds the build id and the configuration.
  nlohmann::json report;
  /// The report or artifact rendered in the configured format.
  std::string document;
  /// False when a statistical check of the run failed.
  bool passed = true;
};

RunResult run(const RunConfig& config);

/// File name for a result: prefix + ".json" / ".csv" / ".svg".
std::string output_filename(const RunConfig& config);

/// Evaluate fn(rng, index) for index = 0..count-1 with replica `index` drawing from
/// make_stream(seed, index), spread over `threads` workers. Results are returned in
/// index order, so they do not depend on the thread count.
template <class T>
std::vector<T> replicate(int count, std::uint64_t seed, int threads, const std::function<T(Rng&, int)>& fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  const int workers = std::max(1, std::min(threads, count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int k = w; k < count; k += workers) {
          Rng rng = make_stream(seed, static_cast<std::uint64_t>(k));
          out[static_cast<std::size_t>(k)] = fn(rng, k);
        }
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace gasket
