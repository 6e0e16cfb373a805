#include "snls/snls.h"

#include <cmath>
#include <string>

#include "snls/checkpoint.hpp"
#include "snls/diagnostics.hpp"
#include "snls/error.hpp"
#include "snls/propagators.hpp"
#include "snls/report.hpp"
#include "snls/run.hpp"

struct snls_grid {
  snls::Grid grid;
};
struct snls_field {
  snls::ComplexField field;
};
struct snls_propagator {
  snls::PerturbedPropagator prop;
};

namespace {

thread_local std::string last_error;

snls_status fail(snls::ErrorCode code, const std::string& msg) {
  last_error = snls::error_json(code, msg);
  return static_cast<snls_status>(snls::exit_code_for(code));
}

template <class Fn>
snls_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return SNLS_OK;
  } catch (const snls::Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    last_error = R"({"error":{"code":"internal","exit_code":1,"message":)" +
                 snls::Json(std::string(e.what())).dump() + "}}";
    return SNLS_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw snls::Error(snls::ErrorCode::kParameter, what);
}

}  // namespace

extern "C" {

const char* snls_version(void) { return "1.0.0"; }

const char* snls_last_error_json(void) { return last_error.c_str(); }

snls_status snls_run(const char* experiment, const char* config_path, const char* output_dir,
                     int threads) {
  return guarded([&] {
    if (!config_path) throw snls::Error(snls::ErrorCode::kConfig, "missing config path");
    const auto kv = snls::KeyValueConfig::load(config_path);
    std::optional<snls::Experiment> e;
    if (experiment) e = snls::parse_experiment(experiment);
    auto config = snls::build_run_config(kv, e);
    if (output_dir) config.output_dir = output_dir;
    snls::run(config, threads > 0 ? threads : 1);
  });
}

snls_status snls_emit_plot_data(const char* series_csv, const char* const* columns,
                                size_t n_columns, const char* output_path) {
  return guarded([&] {
    if (!series_csv || !output_path || (!columns && n_columns)) {
      throw snls::Error(snls::ErrorCode::kConfig, "missing argument");
    }
    std::vector<std::string> cols(columns, columns + n_columns);
    snls::emit_plot_data(series_csv, cols, output_path);
  });
}

snls_status snls_exponents(double alpha, int permissive, double* r, double* p, double* q,
                           double* q_dual) {
  return guarded([&] {
    const auto e = snls::exponents(alpha, permissive != 0);
    if (r) *r = e.r;
    if (p) *p = e.p;
    if (q) *q = e.q;
    if (q_dual) *q_dual = e.q_dual;
  });
}

snls_status snls_grid_create(size_t n_points, double length, snls_grid** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new snls_grid{snls::Grid(n_points, length)};
  });
}

void snls_grid_destroy(snls_grid* grid) { delete grid; }

snls_status snls_field_create(const snls_grid* grid, const double* values, snls_field** out) {
  return guarded([&] {
    require(grid && values && out, "null argument");
    const std::size_t n = grid->grid.n_points();
    std::vector<snls::Complex> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = {values[2 * j], values[2 * j + 1]};
    snls::ComplexField field(grid->grid, std::move(v));
    field.validate();
    *out = new snls_field{std::move(field)};
  });
}

size_t snls_field_size(const snls_field* field) { return field ? field->field.size() : 0; }

snls_status snls_field_values(const snls_field* field, double* values) {
  return guarded([&] {
    require(field && values, "null argument");
    const auto v = field->field.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
      values[2 * j] = v[j].real();
      values[2 * j + 1] = v[j].imag();
    }
  });
}

void snls_field_destroy(snls_field* field) { delete field; }

snls_status snls_propagator_create_strang(const snls_grid* grid, const double* potential, double dt,
                                          snls_propagator** out) {
  return guarded([&] {
    require(grid && potential && out, "null argument");
    std::vector<double> v(potential, potential + grid->grid.n_points());
    *out = new snls_propagator{snls::PerturbedPropagator::strang(grid->grid, std::move(v), dt)};
  });
}

snls_status snls_propagator_create_eigen(const snls_grid* grid, const double* potential,
                                         snls_propagator** out) {
  return guarded([&] {
    require(grid && potential && out, "null argument");
    std::vector<double> v(potential, potential + grid->grid.n_points());
    *out = new snls_propagator{
        snls::PerturbedPropagator::eigendecomposition(grid->grid, std::move(v))};
  });
}

snls_status snls_propagator_evolve(const snls_propagator* prop, const snls_field* field, double t,
                                   snls_field** out) {
  return guarded([&] {
    require(prop && field && out, "null argument");
    *out = new snls_field{prop->prop.evolve(field->field, t)};
  });
}

void snls_propagator_destroy(snls_propagator* prop) { delete prop; }

snls_status snls_checkpoint_write(const char* path, const snls_field* field, double time) {
  return guarded([&] {
    require(path && field, "null argument");
    snls::write_checkpoint(path, field->field, time);
  });
}

snls_status snls_checkpoint_read(const char* path, snls_field** out, double* time) {
  return guarded([&] {
    require(path && out, "null argument");
    auto cp = snls::read_checkpoint(path);
    if (time) *time = cp.time;
    *out = new snls_field{std::move(cp.field)};
  });
}

}  // extern "C"
