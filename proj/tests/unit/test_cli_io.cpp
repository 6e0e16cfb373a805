#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "snls/checkpoint.hpp"
#include "snls/config.hpp"
#include "snls/error.hpp"
#include "snls/report.hpp"
#include "snls/run.hpp"

using namespace snls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("snls_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected snls::Error");
  return ErrorCode::kIo;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

RunConfig config_from(const std::string& text) {
  return build_run_config(KeyValueConfig::parse(text), std::nullopt);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("config grammar") {
    const auto kv = KeyValueConfig::parse(
        "experiment = evolve  # trailing\n"
        "[grid]\n"
        "n_points = 256\n"
        "  length = 20\n"
        "\n"
        "[solver]\n"
        "record_times = 0.5, 1.0 ,2\n"
        "linear = true\n");
    CHECK(kv.get_string("experiment", "") == "evolve");
    CHECK(kv.get_int("grid.n_points", 0) == 256);
    CHECK(kv.get_double("grid.length", 0.0) == 20.0);
    CHECK(kv.get_doubles("solver.record_times") == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(kv.get_bool("solver.linear", false));
    CHECK(kv.get_double("solver.missing", 7.0) == 7.0);

    CHECK(code_of([] { KeyValueConfig::parse("[grid]\nlength = 1\nlength = 2\n"); }) == ErrorCode::kConfig);
    CHECK(code_of([] { KeyValueConfig::parse("[grid\n"); }) == ErrorCode::kConfig);
    CHECK(code_of([] { KeyValueConfig::parse("no equals sign\n"); }) == ErrorCode::kConfig);
    const auto bad = KeyValueConfig::parse("[grid]\nlength = 2x\n");
    CHECK(code_of([&] { bad.get_double("grid.length", 0.0); }) == ErrorCode::kConfig);
    const auto bad_bool = KeyValueConfig::parse("flag = maybe\n");
    CHECK(code_of([&] { bad_bool.get_bool("flag", false); }) == ErrorCode::kConfig);
  }

  TEST_CASE("run config validation") {
    const auto c = config_from("experiment = evolve\n[grid]\nn_points = 128\nlength = 30\n");
    CHECK(c.experiment == Experiment::kEvolve);
    CHECK(c.grid.n_points == 128);
    CHECK(c.solver.alpha == 5.0);

    const auto unknown = message_of([] { config_from("experiment = evolve\n[grid]\nnpoints = 128\n"); });
    CHECK(unknown.find("unknown keys: grid.npoints") != std::string::npos);
    CHECK(code_of([] { config_from("experiment = nothing\n"); }) == ErrorCode::kConfig);
    CHECK(code_of([] { config_from("experiment = evolve\n[grid]\nn_points = 100\n"); }) == ErrorCode::kConfig);
    CHECK(code_of([] { config_from("experiment = evolve\n[solver]\ndt = -1\n"); }) == ErrorCode::kConfig);
    // An explicit experiment must agree with the file.
    CHECK(code_of([] {
            build_run_config(KeyValueConfig::parse("experiment = evolve\n"), Experiment::kDecay);
          }) == ErrorCode::kConfig);
    CHECK(build_run_config(KeyValueConfig::parse(""), Experiment::kDecay).experiment == Experiment::kDecay);
    for (Experiment e : {Experiment::kEvolve, Experiment::kChannels, Experiment::kLinearChannels,
                         Experiment::kMorawetz, Experiment::kDecay, Experiment::kProfiles,
                         Experiment::kTranslationGap, Experiment::kCheckPotential, Experiment::kSweep}) {
      CHECK(parse_experiment(to_string(e)) == e);
    }
  }

  TEST_CASE("checkpoint round trip is bit identical") {
    const Grid g(64, 12.5);
    const auto f = ComplexField::sample(g, [](double x) { return std::exp(-x * x) * std::polar(1.0, 3.0 * x); });
    const auto bytes = encode_checkpoint(f, 1.25);
    REQUIRE(bytes.size() == kCheckpointHeaderBytes + 64 * 16);
    CHECK(bytes[0] == 'S');
    CHECK(bytes[3] == 'S');
    CHECK(bytes[4] == 1);  // little-endian version
    CHECK(bytes[8] == 64);

    const auto dir = scratch("checkpoint");
    const auto path = (dir / "a.snls").string();
    write_checkpoint(path, f, 1.25);
    const auto back = read_checkpoint(path);
    CHECK(back.time == 1.25);
    CHECK(back.field.grid() == g);
    for (std::size_t j = 0; j < 64; ++j) CHECK(back.field[j] == f[j]);
    CHECK(encode_checkpoint(back.field, back.time) == bytes);

    auto corrupt = bytes;
    corrupt[0] = 'X';
    CHECK(code_of([&] { decode_checkpoint(corrupt); }) == ErrorCode::kIo);
    auto truncated = bytes;
    truncated.pop_back();
    CHECK(code_of([&] { decode_checkpoint(truncated); }) == ErrorCode::kIo);
    auto version = bytes;
    version[4] = 2;
    CHECK(code_of([&] { decode_checkpoint(version); }) == ErrorCode::kIo);
    CHECK(code_of([&] { read_checkpoint((dir / "missing.snls").string()); }) == ErrorCode::kIo);
  }

  TEST_CASE("number formatting and json") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    Json j;
    j["a"] = 1;
    j["b"] = std::numeric_limits<double>::quiet_NaN();
    const auto text = dump_json(j);
    CHECK(text.find("\"b\": null") != std::string::npos);
    CHECK(text.back() == '\n');
    SeriesTable t{{"t", "x"}, {}};
    t.add_row({0.5, std::numeric_limits<double>::infinity()});
    CHECK(t.to_csv() == "t,x\n0.5,inf\n");
  }

  TEST_CASE("plot data") {
    const std::string csv = "t,mass,energy\n0,1.5,2\n0.5,1.25,3\n";
    CHECK(plot_data_text(csv, {"t", "mass"}) == "# t mass\n0 1.5\n0.5 1.25\n");
    CHECK(plot_data_text(csv, {"energy"}) == "# energy\n2\n3\n");
    CHECK(plot_data_text("t,mass\n", {"t", "mass"}) == "# t mass\n");
    const auto msg = message_of([&] { plot_data_text(csv, {"t", "x"}); });
    CHECK(msg == "unknown column 'x'; available columns: t, mass, energy");

    const auto dir = scratch("plot");
    write_text_file((dir / "series.csv").string(), csv);
    emit_plot_data((dir / "series.csv").string(), {"t", "energy"}, (dir / "p.dat").string());
    CHECK(read_text_file((dir / "p.dat").string()) == "# t energy\n0 2\n0.5 3\n");
    CHECK(code_of([&] { emit_plot_data((dir / "none.csv").string(), {"t"}, (dir / "q.dat").string()); }) ==
          ErrorCode::kIo);
  }

  TEST_CASE("exit codes and error json") {
    CHECK(exit_code_for(ErrorCode::kConfig) == 2);
    CHECK(exit_code_for(ErrorCode::kParameter) == 2);
    CHECK(exit_code_for(ErrorCode::kDomain) == 2);
    CHECK(exit_code_for(ErrorCode::kInstability) == 3);
    CHECK(exit_code_for(ErrorCode::kInvalidField) == 3);
    CHECK(exit_code_for(ErrorCode::kIo) == 4);
    const auto j = Json::parse(error_json(ErrorCode::kIo, "cannot \"open\""));
    CHECK(j["error"]["code"] == "io");
    CHECK(j["error"]["exit_code"] == 4);
    CHECK(j["error"]["message"] == "cannot \"open\"");
  }

  TEST_CASE("check_potential reports the canonical step") {
    const auto a = run_experiment(config_from("experiment = check_potential\n[grid]\nn_points = 1024\nlength = 80\n"));
    CHECK(a.summary["all_hypotheses"] == true);
    CHECK(a.series.columns == std::vector<std::string>{"x", "V", "dV"});
    CHECK(a.series.rows.size() == 1024);
  }

  TEST_CASE("evolve with zero data stays zero") {
    const auto a = run_experiment(config_from(
        "experiment = evolve\n[grid]\nn_points = 128\nlength = 20\n[initial]\nshape = zero\n"
        "[solver]\nt_final = 0.1\ndt = 0.01\nrecord_stride = 0.05\n"));
    REQUIRE(a.series.rows.size() == 3);
    for (const auto& row : a.series.rows) {
      for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] == 0.0);
    }
  }

  TEST_CASE("linear channels for a constant unit potential") {
    const auto a = run_experiment(config_from(
        "experiment = linear_channels\n[grid]\nn_points = 256\nlength = 40\n"
        "[potential]\nfamily = flat\na_minus = 1\na_plus = 1\n"
        "[propagator]\ndt = 0.1\n[channels]\nn = 2\n"));
    const auto& cols = a.series.columns;
    const auto col = [&](const std::string& name) {
      return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
    };
    REQUIRE(a.series.rows.size() == 2);
    for (const auto& row : a.series.rows) {
      CHECK(row[col("eta_norm")] < 1e-12);
      CHECK(row[col("gamma_norm")] == doctest::Approx(std::sqrt(std::sqrt(M_PI / 2.0))).epsilon(1e-12));
      CHECK(row[col("reconstruction_defect")] < 1e-12);
    }
  }

  TEST_CASE("runs are deterministic") {
    const std::string text =
        "experiment = profiles\n[grid]\nn_points = 256\nlength = 80\n"
        "[propagator]\ndt = 0.05\n[profiles]\nfixture = two\nmembers = 4\nj_max = 2\ntime_window = 2\n";
    const auto dir = scratch("determinism");
    auto c = config_from(text);
    c.output_dir = (dir / "a").string();
    run(c, 1);
    c.output_dir = (dir / "b").string();
    run(c, 2);
    for (const char* name : {"summary.json", "series.csv"}) {
      CHECK(read_text_file((dir / "a" / name).string()) == read_text_file((dir / "b" / name).string()));
    }
  }

  TEST_CASE("evolve writes checkpoints that resume the run") {
    const auto dir = scratch("resume");
    auto c = config_from(
        "experiment = evolve\n[grid]\nn_points = 128\nlength = 20\n"
        "[initial]\namplitude = 0.5\n[solver]\nt_final = 0.2\ndt = 0.01\nrecord_times = 0.1, 0.2\n"
        "checkpoints = true\n");
    c.output_dir = dir.string();
    run(c);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"checkpoint_0000.snls", "checkpoint_0001.snls",
                                            "checkpoint_0002.snls", "series.csv", "summary.json"});
    const auto mid = read_checkpoint((dir / "checkpoint_0001.snls").string());
    CHECK(mid.time == 0.1);
    const auto end = read_checkpoint((dir / "checkpoint_0002.snls").string());

    auto resumed = config_from("experiment = evolve\n[grid]\nn_points = 128\nlength = 20\n"
                               "[initial]\nshape = checkpoint\ncheckpoint = " +
                               (dir / "checkpoint_0001.snls").string() +
                               "\n[solver]\nt_final = 0.1\ndt = 0.01\n");
    const auto u = make_initial_field(resumed);
    for (std::size_t j = 0; j < u.size(); ++j) CHECK(u[j] == mid.field[j]);
    const auto traj = solve(make_problem(resumed));
    CHECK(std::sqrt(l2_norm_sq(traj.snapshots.back().field - end.field)) < 1e-12);

    auto wrong = config_from("experiment = evolve\n[grid]\nn_points = 256\nlength = 20\n"
                             "[initial]\nshape = checkpoint\ncheckpoint = " +
                             (dir / "checkpoint_0001.snls").string() + "\n");
    CHECK(code_of([&] { make_initial_field(wrong); }) != ErrorCode::kIo);
  }

  TEST_CASE("sweep writes one directory per value") {
    const auto dir = scratch("sweep");
    auto c = config_from(
        "experiment = sweep\n[grid]\nn_points = 128\nlength = 20\n"
        "[solver]\nt_final = 0.05\ndt = 0.01\n"
        "[sweep]\nexperiment = evolve\nparameter = initial.amplitude\nvalues = 0.1, 0.2\n");
    c.output_dir = dir.string();
    run(c, 2);
    CHECK(fs::exists(dir / "run_000" / "summary.json"));
    CHECK(fs::exists(dir / "run_001" / "series.csv"));
    const auto top = Json::parse(read_text_file((dir / "summary.json").string()));
    CHECK(top.dump().find("0.2") != std::string::npos);
    const auto lines = lines_of(read_text_file((dir / "run_001" / "series.csv").string()));
    CHECK(lines.size() >= 2);
  }
}

TEST_SUITE("cli_io") {
  TEST_CASE("shipped configs validate") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(SNLS_CONFIG_DIR)) {
      if (entry.path().extension() != ".cfg") continue;
      CAPTURE(entry.path().string());
      const auto kv = KeyValueConfig::load(entry.path().string());
      CHECK_NOTHROW(build_run_config(kv, std::nullopt));
      ++count;
    }
    CHECK(count >= 9);
  }
}
