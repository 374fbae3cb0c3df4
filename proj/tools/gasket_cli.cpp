// Command-line front end: gasket <command> [N] [options]

#include <chrono>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "gasket/error.hpp"
#include "gasket/harness.hpp"
#include "gasket/io.hpp"

using namespace gasket;

int main(int argc, char** argv) {
  CLI::App app{"Loop-erased random walk on the Sierpinski gasket: exact laws, sampling and scaling limit"};
  app.set_version_flag("--version", build_id());

  std::string command;
  std::optional<int> positional;
  std::optional<int> level;
  std::optional<int> depth;
  RunConfig config;
  config.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string variant = "direct";
  std::string method = "rejection";
  std::string format = "json";

  app.add_option("command", command, "exact | mc-shapes | mc-length | limit-path | dimension | moments")
      ->required()
      ->check(CLI::IsMember({"exact", "mc-shapes", "mc-length", "limit-path", "dimension", "moments"}));
  app.add_option("n", positional, "level N (mc-shapes, mc-length), depth M (limit-path, dimension) or order K (moments)");
  app.add_option("--level", level, "level N, or the moment order K");
  app.add_option("--depth", depth, "refinement depth M");
  app.add_option("--samples", config.samples, "number of replicas")->capture_default_str();
  app.add_option("--seed", config.seed, "master seed")->capture_default_str();
  app.add_option("--threads", config.threads, "worker threads (results do not depend on this)")->capture_default_str();
  app.add_option("--variant", variant, "crossing variant")
      ->check(CLI::IsMember({"direct", "via-corner"}))
      ->capture_default_str();
  app.add_option("--method", method, "crossing sampler")
      ->check(CLI::IsMember({"rejection", "hierarchical"}))
      ->capture_default_str();
  app.add_option("--out", config.output, "write PREFIX.json (report) and PREFIX.<format>");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "svg"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    config.command = parse_command(command);
    config.variant = parse_crossing(variant);
    config.method = parse_method(method);
    config.format = parse_format(format);
    const bool uses_depth = config.command == Command::limit_path || config.command == Command::dimension;
    if (config.command == Command::moments) config.level = 8;
    if (uses_depth) config.depth = positional.value_or(depth.value_or(0));
    else config.level = positional.value_or(level.value_or(config.level));
    if (depth && !uses_depth) config.depth = *depth;
    if (level && uses_depth) config.level = *level;

    const auto start = std::chrono::steady_clock::now();
    const RunResult result = run(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (config.output.empty()) {
      std::cout << result.document;
    } else {
      RunConfig report_config = config;
      report_config.format = OutputFormat::json;
      io::write_file(output_filename(report_config), result.report.dump(2) + "\n");
      if (config.format != OutputFormat::json) io::write_file(output_filename(config), result.document);
    }
    std::cerr << command << ": " << (result.passed ? "pass" : "FAIL") << " (" << seconds << " s)\n";
    return result.passed ? 0 : 2;
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
