// snls <experiment> --config <path> [--output-dir <path>] [--threads N]
// snls plot --series <csv> --columns t,mass --output <path>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snls/snls.h"

namespace {

const char* const kExperiments[] = {"evolve",          "channels", "linear_channels",
                                    "morawetz",        "decay",    "profiles",
                                    "translation_gap", "check_potential", "sweep"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (static_cast<unsigned char>(c) < 0x20) {
      out += ' ';
      continue;
    }
    out += c;
  }
  return out;
}

int config_error(const std::string& message) {
  std::fprintf(stderr, "{\"error\":{\"code\":\"config\",\"exit_code\":2,\"message\":\"%s\"}}\n",
               escape(message).c_str());
  return 2;
}

// SNLS_THREADS must be a positive integer when set.
bool threads_from_env(int& threads) {
  const char* env = std::getenv("SNLS_THREADS");
  if (!env) return true;
  const std::string text(env);
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value <= 0) return false;
  threads = value;
  return true;
}

int report(snls_status status) {
  if (status != SNLS_OK) std::fprintf(stderr, "%s\n", snls_last_error_json());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steplike-potential NLS experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", snls_version());

  std::string config_path;
  std::string output_dir;
  int threads = 1;
  std::string chosen;
  for (const char* name : kExperiments) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--output-dir", output_dir, "output directory (overrides the config)");
    sub->add_option("--threads", threads, "worker threads (default: $SNLS_THREADS, else 1)")
        ->check(CLI::PositiveNumber);
    sub->callback([&chosen, name] { chosen = name; });
  }

  std::string series;
  std::string columns;
  std::string plot_output;
  auto* plot = app.add_subcommand("plot", "extract gnuplot columns from a series.csv");
  plot->add_option("--series", series, "series.csv path")->required();
  plot->add_option("--columns", columns, "comma-separated column names")->required();
  plot->add_option("--output", plot_output, "output path")->required();
  plot->callback([&chosen] { chosen = "plot"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return config_error(e.what());
  }

  if (chosen == "plot") {
    std::vector<std::string> names;
    for (auto& c : CLI::detail::split(columns, ',')) {
      CLI::detail::trim(c);
      if (!c.empty()) names.push_back(c);
    }
    std::vector<const char*> ptrs;
    for (const auto& n : names) ptrs.push_back(n.c_str());
    return report(snls_emit_plot_data(series.c_str(), ptrs.data(), ptrs.size(), plot_output.c_str()));
  }
  const bool explicit_threads = app.get_subcommand(chosen)->count("--threads") > 0;
  if (!explicit_threads && !threads_from_env(threads)) {
    return config_error("SNLS_THREADS must be a positive integer");
  }
  return report(snls_run(chosen.c_str(), config_path.c_str(),
                         output_dir.empty() ? nullptr : output_dir.c_str(), threads));
}
