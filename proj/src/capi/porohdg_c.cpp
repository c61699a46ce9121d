// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "porohdg/porohdg.h"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <memory>
#include <new>
#include <ostream>
#include <streambuf>
#include <string>
#include <system_error>
#include <vector>

#include "config.hpp"
#include "driver.hpp"
#include "error.hpp"

struct porohdg_config {
  porohdg::Config cfg;
};

struct porohdg_result {
  porohdg::RunResult run;
  std::string table;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

porohdg_status status_of(porohdg::ErrorKind k) {
  switch (k) {
    case porohdg::ErrorKind::InvalidInput: return POROHDG_ERR_INVALID_ARGUMENT;
    case porohdg::ErrorKind::Config: return POROHDG_ERR_CONFIG;
    case porohdg::ErrorKind::Solver: return POROHDG_ERR_SOLVER;
    case porohdg::ErrorKind::Io: return POROHDG_ERR_IO;
  }
  return POROHDG_ERR_INTERNAL;
}

porohdg_status set_error(porohdg_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
porohdg_status guarded(F&& f) {
  try {
    f();
    return POROHDG_OK;
  } catch (const porohdg::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(POROHDG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(POROHDG_ERR_INTERNAL, e.what());
  }
}

porohdg_status null_arg(const char* what) {
  return set_error(POROHDG_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL");
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    porohdg::fail(porohdg::ErrorKind::Config, key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

// Forwards complete lines to the user callback.
class LineBuf : public std::streambuf {
 public:
  LineBuf(porohdg_log_fn fn, void* user) : fn_(fn), user_(user) {}
  ~LineBuf() override { flush_line(); }

 protected:
  int_type overflow(int_type c) override {
    if (c == traits_type::eof()) return c;
    if (c == '\n') {
      flush_line();
    } else {
      line_.push_back(static_cast<char>(c));
    }
    return c;
  }

 private:
  void flush_line() {
    if (!line_.empty()) fn_(line_.c_str(), user_);
    line_.clear();
  }
  porohdg_log_fn fn_;
  void* user_;
  std::string line_;
};

const std::vector<std::string>& scenario_cache() {
  static const std::vector<std::string> names = porohdg::scenario_names();
  return names;
}

bool field_ok(porohdg_field f) { return f >= POROHDG_FIELD_STRESS && f <= POROHDG_FIELD_PRESSURE; }

}  // namespace

extern "C" {

const char* porohdg_version(void) { return "1.0.0"; }

const char* porohdg_last_error(void) { return g_last_error.c_str(); }

const char* porohdg_status_name(porohdg_status s) {
  switch (s) {
    case POROHDG_OK: return "ok";
    case POROHDG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case POROHDG_ERR_CONFIG: return "configuration error";
    case POROHDG_ERR_SOLVER: return "solver error";
    case POROHDG_ERR_IO: return "i/o error";
    case POROHDG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int porohdg_scenario_count(void) { return static_cast<int>(scenario_cache().size()); }

const char* porohdg_scenario_name(int i) {
  if (i < 0 || i >= porohdg_scenario_count()) return nullptr;
  return scenario_cache()[i].c_str();
}

porohdg_status porohdg_config_from_file(const char* path, porohdg_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new porohdg_config{porohdg::parse_config(path)}; });
}

porohdg_status porohdg_config_from_text(const char* text, porohdg_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new porohdg_config{porohdg::parse_config_text(text)}; });
}

porohdg_status porohdg_config_from_scenario(const char* name, porohdg_config** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new porohdg_config{porohdg::scenario(name)}; });
}

void porohdg_config_free(porohdg_config* cfg) { delete cfg; }

porohdg_status porohdg_config_set(porohdg_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] {
    using porohdg::Dimension;
    porohdg::Config c = cfg->cfg;
    const std::string k = key, v = value;
    if (k == "degree") {
      c.degree = static_cast<int>(parse_int(k, v));
    } else if (k == "seed") {
      const long long s = parse_int(k, v);
      if (s < 0) porohdg::fail(porohdg::ErrorKind::Config, "seed: must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (k == "levels") {
      c.study_levels = static_cast<int>(parse_int(k, v));
    } else if (k == "snapshots") {
      c.snapshots = static_cast<int>(parse_int(k, v));
    } else if (k == "dt") {
      c.dt = v == "auto" ? 0.0 : porohdg::parse_quantity(k, v, Dimension::Time);
    } else if (k == "t_final") {
      c.t_final = porohdg::parse_quantity(k, v, Dimension::Time);
    } else if (k == "output") {
      c.output_dir = v;
    } else if (k == "mode") {
      c.mode = porohdg::parse_mode(v);
    } else {
      porohdg::fail(porohdg::ErrorKind::Config, "unknown override '" + k + "'");
    }
    porohdg::validate_config(c);
    cfg->cfg = std::move(c);
  });
}

porohdg_status porohdg_config_to_text(const porohdg_config* cfg, char* buffer, size_t capacity,
                                      size_t* required) {
  if (!cfg) return null_arg("cfg");
  if (!buffer && capacity > 0) return null_arg("buffer");
  return guarded([&] {
    const std::string text = porohdg::serialize_config(cfg->cfg);
    if (required) *required = text.size() + 1;
    if (capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

porohdg_run_options porohdg_run_options_default(void) {
  porohdg_run_options o;
  o.write_files = 1;
  o.emit_matrix = 0;
  o.log = nullptr;
  o.log_user = nullptr;
  return o;
}

porohdg_status porohdg_run(const porohdg_config* cfg, const porohdg_run_options* options,
                           porohdg_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = nullptr;
  const porohdg_run_options o = options ? *options : porohdg_run_options_default();
  return guarded([&] {
    porohdg::RunOptions ro;
    ro.write_files = o.write_files != 0;
    ro.emit_matrix = o.emit_matrix != 0;
    std::unique_ptr<LineBuf> buf;
    std::unique_ptr<std::ostream> log;
    if (o.log) {
      buf = std::make_unique<LineBuf>(o.log, o.log_user);
      log = std::make_unique<std::ostream>(buf.get());
      ro.log = log.get();
    }
    auto res = std::make_unique<porohdg_result>();
    res->run = porohdg::run(cfg->cfg, ro);
    if (res->run.report) {
      res->table = res->run.report->table();
      res->csv = res->run.report->csv();
    }
    *out = res.release();
  });
}

void porohdg_result_free(porohdg_result* res) { delete res; }

porohdg_mode porohdg_result_mode(const porohdg_result* res) {
  if (!res) return POROHDG_MODE_SIMULATE;
  switch (res->run.mode) {
    case porohdg::RunMode::Simulate: return POROHDG_MODE_SIMULATE;
    case porohdg::RunMode::ConvergenceStudy: return POROHDG_MODE_CONVERGENCE_STUDY;
    case porohdg::RunMode::OracleCheck: return POROHDG_MODE_ORACLE_CHECK;
  }
  return POROHDG_MODE_SIMULATE;
}

int porohdg_result_steps(const porohdg_result* res) { return res ? res->run.steps : 0; }

double porohdg_result_dt(const porohdg_result* res) { return res ? res->run.dt : 0.0; }

int porohdg_result_finite(const porohdg_result* res) { return res && res->run.finite ? 1 : 0; }

double porohdg_result_oracle_difference(const porohdg_result* res) {
  return res ? res->run.oracle_difference : 0.0;
}

int porohdg_result_diagnostic_count(const porohdg_result* res) {
  return res ? static_cast<int>(res->run.diagnostics.size()) : 0;
}

porohdg_status porohdg_result_diagnostic(const porohdg_result* res, int row, double* t,
                                         double* x2, double* y2) {
  if (!res) return null_arg("res");
  if (row < 0 || row >= porohdg_result_diagnostic_count(res)) {
    return set_error(POROHDG_ERR_INVALID_ARGUMENT, "diagnostic row out of range");
  }
  const auto& d = res->run.diagnostics[row];
  if (t) *t = d.t;
  if (x2) *x2 = d.x2;
  if (y2) *y2 = d.y2;
  return POROHDG_OK;
}

porohdg_status porohdg_result_error(const porohdg_result* res, porohdg_field field,
                                    double* error) {
  if (!res) return null_arg("res");
  if (!error) return null_arg("error");
  if (!field_ok(field)) return set_error(POROHDG_ERR_INVALID_ARGUMENT, "unknown field");
  if (res->run.errors) {
    *error = (*res->run.errors)[field];
    return POROHDG_OK;
  }
  if (res->run.report && !res->run.report->divisions.empty()) {
    *error = res->run.report->error(porohdg::kAllFields[field]).back();
    return POROHDG_OK;
  }
  return set_error(POROHDG_ERR_INVALID_ARGUMENT, "run has no exact solution to compare with");
}

porohdg_status porohdg_result_rate(const porohdg_result* res, porohdg_field field, double* rate) {
  if (!res) return null_arg("res");
  if (!rate) return null_arg("rate");
  if (!field_ok(field)) return set_error(POROHDG_ERR_INVALID_ARGUMENT, "unknown field");
  if (!res->run.report) return set_error(POROHDG_ERR_INVALID_ARGUMENT, "not a convergence study");
  return guarded([&] { *rate = res->run.report->asymptotic_rate(porohdg::kAllFields[field]); });
}

const char* porohdg_result_table(const porohdg_result* res) { return res ? res->table.c_str() : ""; }

const char* porohdg_result_csv(const porohdg_result* res) { return res ? res->csv.c_str() : ""; }

int porohdg_result_file_count(const porohdg_result* res) {
  return res ? static_cast<int>(res->run.files.size()) : 0;
}

const char* porohdg_result_file(const porohdg_result* res, int i) {
  if (i < 0 || i >= porohdg_result_file_count(res)) return nullptr;
  return res->run.files[i].c_str();
}

}  // extern "C"
