// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "error.hpp"

namespace porohdg {

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  fail(ErrorKind::Config, "config: " + where + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const std::map<std::string, double>& units(Dimension d) {
  static const std::map<Dimension, std::map<std::string, double>> table{
      {Dimension::None, {}},
      {Dimension::Pressure, {{"Pa", 1.0}, {"kPa", 1e3}, {"MPa", 1e6}, {"GPa", 1e9}}},
      {Dimension::InversePressure,
       {{"1/Pa", 1.0}, {"1/kPa", 1e-3}, {"1/MPa", 1e-6}, {"1/GPa", 1e-9}}},
      {Dimension::Density, {{"kg/m^3", 1.0}, {"g/cm^3", 1e3}}},
      {Dimension::Length, {{"m", 1.0}, {"km", 1e3}, {"cm", 1e-2}, {"mm", 1e-3}}},
      {Dimension::Time, {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}}},
      {Dimension::Area, {{"m^2", 1.0}, {"D", 9.869233e-13}, {"mD", 9.869233e-16}}},
      {Dimension::Viscosity, {{"Pa*s", 1.0}, {"kg/(m*s)", 1.0}, {"cP", 1e-3}}},
  };
  return table.at(d);
}

// Converts "n1 n2 ... [unit]" to SI numbers.
std::vector<double> parse_numbers(const std::string& key, const std::string& text,
                                  Dimension dim) {
  std::vector<std::string> w = words(text);
  if (w.empty()) config_error(key, "missing value");
  double scale = 1.0;
  std::size_t pos = 0;
  double probe = 0.0;
  try {
    probe = std::stod(w.back(), &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  (void)probe;
  if (pos != w.back().size()) {
    const auto& table = units(dim);
    const auto it = table.find(w.back());
    if (it == table.end()) {
      config_error(key, "unit '" + w.back() + "' does not match the expected dimension");
    }
    scale = it->second;
    w.pop_back();
    if (w.empty()) config_error(key, "missing number before unit");
  }
  std::vector<double> out;
  for (const std::string& s : w) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) config_error(key, "'" + s + "' is not a number");
    out.push_back(v * scale);
  }
  return out;
}

struct Entry {
  std::string value;
  bool used = false;
};

struct Section {
  std::string name;
  std::map<std::string, Entry> keys;
};

// Typed access to one section; every key must be consumed.
class Reader {
 public:
  explicit Reader(Section* s) : s_(s) {}

  bool has(const std::string& k) const { return s_ && s_->keys.count(k); }
  std::string path(const std::string& k) const { return s_->name + "." + k; }

  std::optional<std::string> take(const std::string& k) {
    if (!has(k)) return std::nullopt;
    Entry& e = s_->keys.at(k);
    e.used = true;
    return e.value;
  }
  std::string require(const std::string& k) {
    auto v = take(k);
    if (!v) config_error((s_ ? s_->name : std::string("?")) + "." + k, "required key missing");
    return *v;
  }
  double number(const std::string& k, Dimension d, double fallback) {
    auto v = take(k);
    return v ? scalar(k, *v, d) : fallback;
  }
  double require_number(const std::string& k, Dimension d) {
    return scalar(k, require(k), d);
  }
  Eigen::Vector2d pair(const std::string& k, Dimension d) {
    const auto v = parse_numbers(path(k), require(k), d);
    if (v.size() != 2) config_error(path(k), "expected two numbers");
    return {v[0], v[1]};
  }
  long long integer(const std::string& k, long long fallback) {
    auto v = take(k);
    if (!v) return fallback;
    std::size_t used = 0;
    long long out = 0;
    try {
      out = std::stoll(*v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v->size() || v->empty()) config_error(path(k), "'" + *v + "' is not an integer");
    return out;
  }
  bool boolean(const std::string& k, bool fallback) {
    auto v = take(k);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    config_error(path(k), "expected true or false");
  }
  void finish() const {
    if (!s_) return;
    for (const auto& [k, e] : s_->keys) {
      if (!e.used) config_error(s_->name + "." + k, "unknown key");
    }
  }

 private:
  double scalar(const std::string& k, const std::string& text, Dimension d) {
    const auto v = parse_numbers(path(k), text, d);
    if (v.size() != 1) config_error(path(k), "expected one number");
    return v[0];
  }
  Section* s_;
};

BoundaryTags parse_tags(const std::string& where, const std::vector<std::string>& w) {
  if (w.size() != 2) config_error(where, "expected '<dirichlet|traction> <pressure|flux>'");
  BoundaryTags t;
  if (w[0] == "dirichlet") t.elastic = ElasticBc::Dirichlet;
  else if (w[0] == "traction") t.elastic = ElasticBc::Traction;
  else config_error(where, "unknown elastic condition '" + w[0] + "'");
  if (w[1] == "pressure") t.flow = FlowBc::Pressure;
  else if (w[1] == "flux") t.flow = FlowBc::Flux;
  else config_error(where, "unknown flow condition '" + w[1] + "'");
  return t;
}

std::string tags_text(const BoundaryTags& t) {
  return std::string(t.elastic == ElasticBc::Dirichlet ? "dirichlet" : "traction") + " " +
         (t.flow == FlowBc::Pressure ? "pressure" : "flux");
}

const char* side_name(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
  }
  return "?";
}

Side parse_side(const std::string& where, const std::string& s) {
  for (Side v : {Side::Left, Side::Right, Side::Bottom, Side::Top}) {
    if (s == side_name(v)) return v;
  }
  config_error(where, "unknown side '" + s + "'");
}

const std::vector<std::string>& pulse_targets() {
  static const std::vector<std::string> t{"sxx", "syy", "sxy", "vs1", "vs2", "vf1", "vf2", "p"};
  return t;
}

RegionPredicate parse_where(const std::string& where, const std::string& text) {
  const auto w = words(text);
  RegionPredicate p;
  if (w.size() == 1 && w[0] == "all") return p;
  auto num = [&](const std::string& s) {
    return parse_numbers(where, s, Dimension::Length).at(0);
  };
  if (w.size() == 2 && (w[0] == "below" || w[0] == "above")) {
    p.kind = w[0] == "below" ? RegionPredicate::Kind::Below : RegionPredicate::Kind::Above;
    p.a = num(w[1]);
    return p;
  }
  if (w.size() == 5 && w[0] == "box") {
    p.kind = RegionPredicate::Kind::Box;
    p.a = num(w[1]);
    p.b = num(w[2]);
    p.c = num(w[3]);
    p.d = num(w[4]);
    return p;
  }
  config_error(where, "expected 'all', 'below Y', 'above Y' or 'box X0 X1 Y0 Y1'");
}

std::string where_text(const RegionPredicate& p) {
  switch (p.kind) {
    case RegionPredicate::Kind::All: return "all";
    case RegionPredicate::Kind::Below: return "below " + fmt(p.a);
    case RegionPredicate::Kind::Above: return "above " + fmt(p.a);
    case RegionPredicate::Kind::Box:
      return "box " + fmt(p.a) + " " + fmt(p.b) + " " + fmt(p.c) + " " + fmt(p.d);
  }
  return "all";
}

MaterialSpec parse_material(Reader& r) {
  MaterialSpec m;
  if (auto lib = r.take("library")) {
    m.library = *lib;
    return m;
  }
  if (r.has("young") || r.has("poisson")) {
    m.isotropic = true;
    m.young = r.require_number("young", Dimension::Pressure);
    m.poisson = r.require_number("poisson", Dimension::None);
  } else {
    m.isotropic = false;
    m.c11 = r.require_number("c11", Dimension::Pressure);
    m.c13 = r.require_number("c13", Dimension::Pressure);
    m.c33 = r.require_number("c33", Dimension::Pressure);
    m.c55 = r.require_number("c55", Dimension::Pressure);
  }
  m.alpha = r.require_number("alpha", Dimension::None);
  m.s0 = r.require_number("s0", Dimension::InversePressure);
  m.rho11 = r.require_number("rho11", Dimension::Density);
  m.rho12 = r.require_number("rho12", Dimension::Density);
  m.rho22 = r.pair("rho22", Dimension::Density);
  m.eta = r.number("eta", Dimension::Viscosity, 0.0);
  if (r.has("kappa")) {
    m.kappa = r.pair("kappa", Dimension::Area);
  } else if (m.eta > 0.0) {
    config_error(r.path("kappa"), "required when eta > 0");
  }
  return m;
}

}  // namespace

bool RegionPredicate::contains(const Point2& x) const {
  switch (kind) {
    case Kind::All: return true;
    case Kind::Below: return x.y() < a;
    case Kind::Above: return x.y() > a;
    case Kind::Box: return x.x() >= a && x.x() <= b && x.y() >= c && x.y() <= d;
  }
  return false;
}

MaterialParams MaterialSpec::resolve(const std::string& name) const {
  if (!library.empty()) {
    auto m = library_material(library);
    if (!m) {
      std::string known;
      for (const auto& n : library_material_names()) known += " " + n;
      fail(ErrorKind::Config, "unknown library material '" + library + "' (known:" + known + ")");
    }
    m->name = name;
    return *m;
  }
  const VoigtMatrix c = isotropic ? isotropic_stiffness(young, poisson)
                                  : anisotropic_stiffness(c11, c13, c33, c55);
  return make_material(name, c, alpha, s0, rho11, rho12, rho22, eta, kappa);
}

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::Simulate: return "simulate";
    case RunMode::ConvergenceStudy: return "convergence-study";
    case RunMode::OracleCheck: return "oracle-check";
  }
  return "?";
}

RunMode parse_mode(const std::string& s) {
  for (RunMode m : {RunMode::Simulate, RunMode::ConvergenceStudy, RunMode::OracleCheck}) {
    if (s == mode_name(m)) return m;
  }
  fail(ErrorKind::Config,
       "unknown mode '" + s + "' (expected simulate, convergence-study or oracle-check)");
}

double parse_quantity(const std::string& key, const std::string& text, Dimension dim) {
  const auto v = parse_numbers(key, text, dim);
  if (v.size() != 1) config_error(key, "expected one number");
  return v[0];
}

void validate_config(const Config& c) {
  if (c.degree < 1 || c.degree > 6) config_error("run.degree", "must be in 1..6");
  if (c.mesh.file.empty()) {
    if (!(c.mesh.xmax > c.mesh.xmin) || !(c.mesh.ymax > c.mesh.ymin)) {
      config_error("mesh", "empty rectangle");
    }
    if (c.mesh.nx < 1 || c.mesh.ny < 1) config_error("mesh.nx", "divisions must be positive");
  }
  for (const auto& r : c.mesh.refine) {
    if (!(r.radius > 0.0) || r.levels < 0) config_error("mesh.refine", "need radius > 0, levels >= 0");
  }
  if (!(c.c_s > 0.0)) config_error("stabilization.c_s", "must be positive");
  if (!(c.c_f > 0.0)) config_error("stabilization.c_f", "must be positive");
  const bool manufactured =
      c.initial == InitialKind::Manufactured || c.source == SourceKind::Manufactured;
  if (manufactured) {
    if (!c.regions.empty()) {
      config_error("material", "the manufactured benchmark defines its own material");
    }
    try {
      (void)isotropic_stiffness(c.young, c.poisson);
    } catch (const Error& e) {
      config_error("manufactured", e.what());
    }
  } else if (c.regions.empty()) {
    config_error("material", "at least one material region is required");
  }
  for (const auto& r : c.regions) {
    try {
      (void)r.material.resolve(r.name);
    } catch (const Error& e) {
      config_error("material." + r.name, e.what());
    }
  }
  if (c.initial == InitialKind::Pulse) {
    if (c.pulse.targets.empty()) config_error("pulse.targets", "no target field");
    for (const auto& t : c.pulse.targets) {
      if (std::find(pulse_targets().begin(), pulse_targets().end(), t) == pulse_targets().end()) {
        config_error("pulse.targets", "unknown field '" + t + "'");
      }
    }
    if (!(c.pulse.lx > 0.0) || !(c.pulse.ly > 0.0)) {
      config_error("pulse", "widths lx, ly must be positive");
    }
  }
  if (c.mode == RunMode::ConvergenceStudy) {
    if (!manufactured) config_error("run.mode", "convergence-study needs the manufactured benchmark");
    if (c.study_levels < 2) config_error("study.levels", "need at least two levels");
  }
  if (!(c.t_final > 0.0)) config_error("time.t_final", "must be positive");
  if (!(c.dt >= 0.0)) config_error("time.dt", "must be positive or auto");
  if (c.snapshots < 0) config_error("output.snapshots", "must be non-negative");
}

Config parse_config_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Section> sections;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (!header) {
      if (line != "poro-hdg-config 1") {
        config_error(where, "expected header 'poro-hdg-config 1'");
      }
      header = true;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') config_error(where, "malformed section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      for (const auto& s : sections) {
        if (s.name == name) config_error(where, "duplicate section [" + name + "]");
      }
      sections.push_back({name, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(where, "expected 'key = value'");
    if (sections.empty()) config_error(where, "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    Section& s = sections.back();
    if (s.keys.count(key)) config_error(s.name + "." + key, "duplicate key");
    s.keys[key] = {trim(line.substr(eq + 1)), false};
  }
  if (!header) config_error("line 1", "expected header 'poro-hdg-config 1'");

  static const std::vector<std::string> known{"run",    "mesh",    "boundary",     "stabilization",
                                              "initial", "pulse",  "manufactured", "source",
                                              "time",   "output", "study"};
  auto find = [&](const std::string& n) -> Section* {
    for (auto& s : sections) {
      if (s.name == n) return &s;
    }
    return nullptr;
  };
  for (const auto& s : sections) {
    if (s.name.rfind("material.", 0) == 0 && s.name.size() > 9) continue;
    if (std::find(known.begin(), known.end(), s.name) == known.end()) {
      config_error("[" + s.name + "]", "unknown section");
    }
  }

  Config c;
  {
    Reader r(find("run"));
    if (auto m = r.take("mode")) {
      try {
        c.mode = parse_mode(*m);
      } catch (const Error& e) {
        config_error("run.mode", e.what());
      }
    }
    c.degree = static_cast<int>(r.integer("degree", c.degree));
    const long long seed = r.integer("seed", static_cast<long long>(c.seed));
    if (seed < 0) config_error("run.seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    r.finish();
  }
  {
    Reader r(find("mesh"));
    if (auto f = r.take("file")) c.mesh.file = *f;
    c.mesh.xmin = r.number("xmin", Dimension::Length, c.mesh.xmin);
    c.mesh.xmax = r.number("xmax", Dimension::Length, c.mesh.xmax);
    c.mesh.ymin = r.number("ymin", Dimension::Length, c.mesh.ymin);
    c.mesh.ymax = r.number("ymax", Dimension::Length, c.mesh.ymax);
    c.mesh.nx = static_cast<int>(r.integer("nx", c.mesh.nx));
    c.mesh.ny = static_cast<int>(r.integer("ny", c.mesh.ny));
    if (auto ref = r.take("refine")) {
      for (const std::string& item : split(*ref, ';')) {
        if (item.empty()) continue;
        const auto w = words(item);
        if (w.size() != 4) config_error("mesh.refine", "expected 'x y radius levels'");
        RefineDirective d;
        d.center = {parse_quantity("mesh.refine", w[0], Dimension::Length),
                    parse_quantity("mesh.refine", w[1], Dimension::Length)};
        d.radius = parse_quantity("mesh.refine", w[2], Dimension::Length);
        d.levels = static_cast<int>(parse_quantity("mesh.refine", w[3], Dimension::None));
        c.mesh.refine.push_back(d);
      }
    }
    r.finish();
  }
  {
    Reader r(find("boundary"));
    if (auto d = r.take("default")) c.mesh.boundary.fallback = parse_tags("boundary.default", words(*d));
    if (auto sides = r.take("sides")) {
      for (const std::string& item : split(*sides, ';')) {
        if (item.empty()) continue;
        auto w = words(item);
        if (w.size() != 3) config_error("boundary.sides", "expected 'side elastic flow'");
        const Side s = parse_side("boundary.sides", w[0]);
        c.mesh.boundary.rules.push_back({s, parse_tags("boundary.sides", {w[1], w[2]})});
      }
    }
    r.finish();
  }
  {
    Reader r(find("stabilization"));
    c.c_s = r.number("c_s", Dimension::None, c.c_s);
    c.c_f = r.number("c_f", Dimension::None, c.c_f);
    r.finish();
  }
  for (auto& s : sections) {
    if (s.name.rfind("material.", 0) != 0) continue;
    Reader r(&s);
    RegionConfig reg;
    reg.name = s.name.substr(9);
    reg.where = parse_where(s.name + ".region", r.take("region").value_or("all"));
    reg.material = parse_material(r);
    r.finish();
    c.regions.push_back(std::move(reg));
  }
  {
    Reader r(find("initial"));
    const std::string kind = r.take("kind").value_or("zero");
    if (kind == "zero") c.initial = InitialKind::Zero;
    else if (kind == "manufactured") c.initial = InitialKind::Manufactured;
    else if (kind == "pulse") c.initial = InitialKind::Pulse;
    else config_error("initial.kind", "expected zero, manufactured or pulse");
    const std::string method = r.take("method").value_or("compatible");
    if (method == "compatible") c.init_method = InitMethod::Compatible;
    else if (method == "projection") c.init_method = InitMethod::Projection;
    else config_error("initial.method", "expected compatible or projection");
    r.finish();
  }
  if (Section* s = find("pulse")) {
    Reader r(s);
    c.pulse.targets = words(r.require("targets"));
    c.pulse.amplitude = r.number("amplitude", Dimension::None, 1.0);
    c.pulse.lx = r.require_number("lx", Dimension::Length);
    c.pulse.ly = r.require_number("ly", Dimension::Length);
    const Eigen::Vector2d ctr = r.pair("center", Dimension::Length);
    c.pulse.center = ctr;
    r.finish();
  } else if (c.initial == InitialKind::Pulse) {
    config_error("pulse", "section required for initial.kind = pulse");
  }
  if (Section* s = find("manufactured")) {
    Reader r(s);
    c.young = r.require_number("young", Dimension::Pressure);
    c.poisson = r.require_number("poisson", Dimension::None);
    r.finish();
  }
  {
    Reader r(find("source"));
    const std::string kind = r.take("kind").value_or("none");
    if (kind == "none") c.source = SourceKind::None;
    else if (kind == "manufactured") c.source = SourceKind::Manufactured;
    else config_error("source.kind", "expected none or manufactured");
    r.finish();
  }
  {
    Reader r(find("time"));
    const std::string dt = r.take("dt").value_or("auto");
    c.dt = dt == "auto" ? 0.0 : parse_quantity("time.dt", dt, Dimension::Time);
    c.t_final = r.require_number("t_final", Dimension::Time);
    r.finish();
  }
  {
    Reader r(find("output"));
    if (auto d = r.take("directory")) c.output_dir = *d;
    c.snapshots = static_cast<int>(r.integer("snapshots", c.snapshots));
    c.write_vtk = r.boolean("vtk", c.write_vtk);
    r.finish();
  }
  {
    Reader r(find("study"));
    c.study_levels = static_cast<int>(r.integer("levels", c.study_levels));
    r.finish();
  }
  validate_config(c);
  return c;
}

Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const Config& c) {
  std::ostringstream os;
  os << "poro-hdg-config 1\n\n";
  os << "[run]\nmode = " << mode_name(c.mode) << "\ndegree = " << c.degree
     << "\nseed = " << c.seed << "\n\n";
  os << "[mesh]\n";
  if (!c.mesh.file.empty()) os << "file = " << c.mesh.file << '\n';
  os << "xmin = " << fmt(c.mesh.xmin) << "\nxmax = " << fmt(c.mesh.xmax)
     << "\nymin = " << fmt(c.mesh.ymin) << "\nymax = " << fmt(c.mesh.ymax)
     << "\nnx = " << c.mesh.nx << "\nny = " << c.mesh.ny << '\n';
  if (!c.mesh.refine.empty()) {
    os << "refine =";
    for (std::size_t i = 0; i < c.mesh.refine.size(); ++i) {
      const auto& r = c.mesh.refine[i];
      os << (i ? "; " : " ") << fmt(r.center.x()) << ' ' << fmt(r.center.y()) << ' '
         << fmt(r.radius) << ' ' << r.levels;
    }
    os << '\n';
  }
  os << "\n[boundary]\ndefault = " << tags_text(c.mesh.boundary.fallback) << '\n';
  if (!c.mesh.boundary.rules.empty()) {
    os << "sides =";
    for (std::size_t i = 0; i < c.mesh.boundary.rules.size(); ++i) {
      const auto& r = c.mesh.boundary.rules[i];
      os << (i ? "; " : " ") << side_name(r.side) << ' ' << tags_text(r.tags);
    }
    os << '\n';
  }
  os << "\n[stabilization]\nc_s = " << fmt(c.c_s) << "\nc_f = " << fmt(c.c_f) << "\n";
  for (const auto& reg : c.regions) {
    const MaterialSpec& m = reg.material;
    os << "\n[material." << reg.name << "]\nregion = " << where_text(reg.where) << '\n';
    if (!m.library.empty()) {
      os << "library = " << m.library << '\n';
      continue;
    }
    if (m.isotropic) {
      os << "young = " << fmt(m.young) << "\npoisson = " << fmt(m.poisson) << '\n';
    } else {
      os << "c11 = " << fmt(m.c11) << "\nc13 = " << fmt(m.c13) << "\nc33 = " << fmt(m.c33)
         << "\nc55 = " << fmt(m.c55) << '\n';
    }
    os << "alpha = " << fmt(m.alpha) << "\ns0 = " << fmt(m.s0) << "\nrho11 = " << fmt(m.rho11)
       << "\nrho12 = " << fmt(m.rho12) << "\nrho22 = " << fmt(m.rho22[0]) << ' '
       << fmt(m.rho22[1]) << "\neta = " << fmt(m.eta) << "\nkappa = " << fmt(m.kappa[0])
       << ' ' << fmt(m.kappa[1]) << '\n';
  }
  os << "\n[initial]\nkind = "
     << (c.initial == InitialKind::Zero ? "zero"
         : c.initial == InitialKind::Manufactured ? "manufactured"
                                                   : "pulse")
     << "\nmethod = " << (c.init_method == InitMethod::Compatible ? "compatible" : "projection")
     << '\n';
  if (c.initial == InitialKind::Pulse) {
    os << "\n[pulse]\ntargets =";
    for (const auto& t : c.pulse.targets) os << ' ' << t;
    os << "\namplitude = " << fmt(c.pulse.amplitude) << "\nlx = " << fmt(c.pulse.lx)
       << "\nly = " << fmt(c.pulse.ly) << "\ncenter = " << fmt(c.pulse.center.x()) << ' '
       << fmt(c.pulse.center.y()) << '\n';
  }
  os << "\n[manufactured]\nyoung = " << fmt(c.young) << "\npoisson = " << fmt(c.poisson)
     << '\n';
  os << "\n[source]\nkind = " << (c.source == SourceKind::None ? "none" : "manufactured")
     << '\n';
  os << "\n[time]\ndt = " << (c.dt > 0.0 ? fmt(c.dt) : std::string("auto"))
     << "\nt_final = " << fmt(c.t_final) << '\n';
  os << "\n[output]\ndirectory = " << c.output_dir << "\nsnapshots = " << c.snapshots
     << "\nvtk = " << (c.write_vtk ? "true" : "false") << '\n';
  os << "\n[study]\nlevels = " << c.study_levels << '\n';
  return os.str();
}

std::vector<std::string> scenario_names() {
  return {"example1-compressible", "example1-nearly-incompressible", "example2-isotropic",
          "example2-anisotropic", "example3-heterogeneous"};
}

namespace {

Config benchmark_preset(double poisson) {
  Config c;
  c.mode = RunMode::ConvergenceStudy;
  c.initial = InitialKind::Manufactured;
  c.source = SourceKind::Manufactured;
  c.young = 3.0;
  c.poisson = poisson;
  c.t_final = 1.0;
  c.dt = 0.0;
  c.study_levels = 5;
  return c;
}

// Stabilization sized from the material: tau_s near the solid impedance and
// tau_f near its inverse on the base mesh.
void impedance_stabilization(Config& c, const MaterialParams& m, double h) {
  const double z = m.rho11 * fast_wave_speed(m);
  c.c_s = z * h;
  c.c_f = 1.0 / z;
}

// End time for the fast wave to cover `distance`, split into steps of about
// one base cell crossing.
void wave_time(Config& c, const MaterialParams& m, double distance, double h) {
  const double speed = fast_wave_speed(m);
  c.t_final = distance / speed;
  c.dt = c.t_final / std::ceil(distance / h - 1e-9);
}

Config pulse_preset(const std::string& material, double half_width, int n,
                    std::vector<std::string> targets) {
  Config c;
  c.mode = RunMode::Simulate;
  c.mesh.xmin = c.mesh.ymin = -half_width;
  c.mesh.xmax = c.mesh.ymax = half_width;
  c.mesh.nx = c.mesh.ny = n;
  c.mesh.refine.push_back({Point2::Zero(), 0.25, 1});
  c.regions.push_back({material, MaterialSpec{material}, {}});
  c.initial = InitialKind::Pulse;
  c.pulse = {std::move(targets), 1.0, 0.08, 0.08, Point2::Zero()};
  const MaterialParams m = *library_material(material);
  const double h = 2.0 * half_width / n;
  impedance_stabilization(c, m, h);
  wave_time(c, m, half_width, h);
  return c;
}

}  // namespace

Config scenario(const std::string& name) {
  if (name == "example1-compressible") return benchmark_preset(0.3);
  if (name == "example1-nearly-incompressible") return benchmark_preset(0.499);
  if (name == "example2-isotropic") return pulse_preset("sandstone-iso", 4.675, 200, {"vs2"});
  if (name == "example2-anisotropic") {
    return pulse_preset("glass-epoxy", 4.675, 200, {"syy", "p"});
  }
  if (name == "example3-heterogeneous") {
    Config c;
    c.mode = RunMode::Simulate;
    c.mesh.xmin = 0.0;
    c.mesh.xmax = 1500.0;
    c.mesh.ymin = 0.0;
    c.mesh.ymax = 1400.0;
    c.mesh.nx = 150;
    c.mesh.ny = 140;
    RegionConfig shale{"shale", MaterialSpec{"shale"}, {}};
    shale.where = {RegionPredicate::Kind::Below, 700.0};
    RegionConfig sand{"sandstone", MaterialSpec{"sandstone-het"}, {}};
    sand.where = {RegionPredicate::Kind::Above, 700.0};
    c.regions = {shale, sand};
    c.initial = InitialKind::Pulse;
    c.pulse = {{"vs2"}, 1.0, 50.0, 50.0, Point2(750.0, 900.0)};
    const MaterialParams m = *library_material("sandstone-het");
    impedance_stabilization(c, m, 10.0);
    wave_time(c, m, 750.0, 10.0);
    return c;
  }
  std::string known;
  for (const auto& n : scenario_names()) known += " " + n;
  fail(ErrorKind::Config, "unknown scenario '" + name + "' (presets:" + known + ")");
}

}  // namespace porohdg
