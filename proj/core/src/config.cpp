#include "pqed/config.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pqed/system.hpp"
#include "pqed/units.hpp"

namespace pqed {

namespace {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
  int col = 0;
};

struct Block {
  std::string name;
  int line = 0;
  int col = 0;
  std::vector<KeyValue> entries;
};

[[noreturn]] void fail_at(const std::string& path, int line, int col, const std::string& msg) {
  throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

std::string trim(const std::string& s) {
  const std::size_t first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const std::size_t last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string nearest(const std::string& word, const std::vector<std::string>& options) {
  std::string best;
  int best_d = INT_MAX;
  for (const auto& opt : options) {
    const int d = levenshtein(word, opt);
    if (d < best_d) {
      best_d = d;
      best = opt;
    }
  }
  return best;
}

// Validates a block's keys (known, no duplicates) and locates entries.
class BlockReader {
 public:
  BlockReader(const std::string& path, const Block& block, std::vector<std::string> valid_keys)
      : path_(path), block_(block) {
    for (std::size_t i = 0; i < block.entries.size(); ++i) {
      const KeyValue& kv = block.entries[i];
      if (std::find(valid_keys.begin(), valid_keys.end(), kv.key) == valid_keys.end()) {
        fail_at(path_, kv.line, kv.col,
                "unknown key '" + kv.key + "' in [" + block.name +
                    "] (nearest valid key: '" + nearest(kv.key, valid_keys) + "')");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (block.entries[j].key == kv.key) {
          fail_at(path_, kv.line, kv.col,
                  "duplicate key '" + kv.key + "' in [" + block.name + "]");
        }
      }
    }
  }

  const KeyValue* find(const std::string& key) const {
    for (const auto& kv : block_.entries) {
      if (kv.key == key) return &kv;
    }
    return nullptr;
  }

 private:
  const std::string& path_;
  const Block& block_;
};

double str_to_double(const std::string& path, int line, int col, const std::string& text,
                     const std::string& what) {
  const std::string s = trim(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    fail_at(path, line, col, "expected a finite number for " + what + ", got '" + text + "'");
  }
  return v;
}

long str_to_long(const std::string& path, int line, int col, const std::string& text,
                 const std::string& what) {
  const std::string s = trim(text);
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    fail_at(path, line, col, "expected an integer for " + what + ", got '" + text + "'");
  }
  return v;
}

double to_double(const std::string& path, const KeyValue& kv) {
  return str_to_double(path, kv.line, kv.col, kv.value, "'" + kv.key + "'");
}

long to_long(const std::string& path, const KeyValue& kv) {
  return str_to_long(path, kv.line, kv.col, kv.value, "'" + kv.key + "'");
}

int to_int(const std::string& path, const KeyValue& kv) {
  const long v = to_long(path, kv);
  if (v < INT_MIN || v > INT_MAX) {
    fail_at(path, kv.line, kv.col, "'" + kv.key + "' is out of integer range");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& path, const KeyValue& kv) {
  if (kv.value == "true") return true;
  if (kv.value == "false") return false;
  fail_at(path, kv.line, kv.col, "expected true or false for '" + kv.key + "'");
}

// Amplitude values are "re" or "re,im".
void to_complex_parts(const std::string& path, const KeyValue& kv, double* re, double* im) {
  const std::size_t comma = kv.value.find(',');
  if (comma == std::string::npos) {
    *re = to_double(path, kv);
    *im = 0.0;
    return;
  }
  if (kv.value.find(',', comma + 1) != std::string::npos) {
    fail_at(path, kv.line, kv.col, "expected 're' or 're,im' for '" + kv.key + "'");
  }
  *re = str_to_double(path, kv.line, kv.col, kv.value.substr(0, comma), "'" + kv.key + "'");
  *im = str_to_double(path, kv.line, kv.col, kv.value.substr(comma + 1), "'" + kv.key + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Axis syntax: name:start:stop:count
SweepAxis to_axis(const std::string& path, const KeyValue& kv) {
  const std::vector<std::string> parts = split(kv.value, ':');
  if (parts.size() != 4) {
    fail_at(path, kv.line, kv.col,
            "expected 'name:start:stop:count' for '" + kv.key + "', got '" + kv.value + "'");
  }
  SweepAxis ax;
  try {
    ax.name = axis_name_from_string(trim(parts[0]));
  } catch (const std::exception& e) {
    fail_at(path, kv.line, kv.col, e.what());
  }
  ax.start = str_to_double(path, kv.line, kv.col, parts[1], "axis start");
  ax.stop = str_to_double(path, kv.line, kv.col, parts[2], "axis stop");
  const long count = str_to_long(path, kv.line, kv.col, parts[3], "axis count");
  if (count < 2 || count > INT_MAX) {
    fail_at(path, kv.line, kv.col, "axis count must be an integer >= 2");
  }
  ax.count = static_cast<int>(count);
  if (!(ax.start < ax.stop)) {
    fail_at(path, kv.line, kv.col, "axis start must be strictly below stop");
  }
  return ax;
}

void check_positive(const std::string& path, const KeyValue& kv, double v) {
  if (!(v > 0.0)) fail_at(path, kv.line, kv.col, "'" + kv.key + "' must be > 0");
}

void check_nonnegative(const std::string& path, const KeyValue& kv, double v) {
  if (!(v >= 0.0)) fail_at(path, kv.line, kv.col, "'" + kv.key + "' must be >= 0");
}

void read_model(const std::string& path, const Block& b, ModelBlock* out) {
  BlockReader r(path, b, {"n_max", "sector_cap", "dephasing_convention", "convergence_guard"});
  if (const KeyValue* kv = r.find("n_max")) {
    out->n_max = to_int(path, *kv);
    if (out->n_max < 0 || out->n_max > 100000) {
      fail_at(path, kv->line, kv->col, "'n_max' must be between 0 and 100000");
    }
  }
  if (const KeyValue* kv = r.find("sector_cap")) {
    const int cap = to_int(path, *kv);
    if (cap < 0) fail_at(path, kv->line, kv->col, "'sector_cap' must be >= 0");
    out->sector_cap = cap;
  }
  if (const KeyValue* kv = r.find("dephasing_convention")) {
    if (kv->value == "as_written") {
      out->convention = DephasingConvention::as_written;
    } else if (kv->value == "half_rate") {
      out->convention = DephasingConvention::half_rate;
    } else {
      fail_at(path, kv->line, kv->col,
              "'dephasing_convention' must be as_written or half_rate");
    }
  }
  if (const KeyValue* kv = r.find("convergence_guard")) {
    out->convergence_guard = to_bool(path, *kv);
  }
}

void read_cavity(const std::string& path, const Block& b, NanocavityParams* out) {
  BlockReader r(path, b,
                {"omega_mev", "omega_thz", "kappa_out_mev", "kappa_out_thz", "mode_volume_re_nm3",
                 "mode_volume_im_nm3", "epsilon", "sigma_ext_nm2"});
  const KeyValue* omega_mev = r.find("omega_mev");
  const KeyValue* omega_thz = r.find("omega_thz");
  if (omega_mev && omega_thz) {
    fail_at(path, omega_thz->line, omega_thz->col, "give omega_mev or omega_thz, not both");
  }
  if (omega_mev) out->omega_cav = to_double(path, *omega_mev);
  if (omega_thz) out->omega_cav = to_double(path, *omega_thz) * units::mev_per_thz;
  const KeyValue* kappa_mev = r.find("kappa_out_mev");
  const KeyValue* kappa_thz = r.find("kappa_out_thz");
  if (kappa_mev && kappa_thz) {
    fail_at(path, kappa_thz->line, kappa_thz->col, "give kappa_out_mev or kappa_out_thz, not both");
  }
  if (kappa_mev) out->kappa_out = to_double(path, *kappa_mev);
  if (kappa_thz) out->kappa_out = to_double(path, *kappa_thz) * units::mev_per_thz;
  if (const KeyValue* kv = r.find("mode_volume_re_nm3")) {
    out->mode_volume_re = to_double(path, *kv);
    check_positive(path, *kv, out->mode_volume_re);
  }
  if (const KeyValue* kv = r.find("mode_volume_im_nm3")) {
    out->mode_volume_im = to_double(path, *kv);
  }
  if (const KeyValue* kv = r.find("epsilon")) {
    out->epsilon = to_double(path, *kv);
    if (!(out->epsilon >= 1.0)) fail_at(path, kv->line, kv->col, "'epsilon' must be >= 1");
  }
  if (const KeyValue* kv = r.find("sigma_ext_nm2")) {
    out->sigma_ext_classical = to_double(path, *kv);
    check_positive(path, *kv, out->sigma_ext_classical);
  }
  if (!(out->omega_cav > 0.0)) {
    fail_at(path, b.line, b.col, "[cavity] resonance must be > 0");
  }
  if (!(out->kappa_out > 0.0)) {
    fail_at(path, b.line, b.col, "[cavity] kappa_out must be > 0");
  }
}

void read_profile(const std::string& path, const Block& b, ProfileBlock* out) {
  BlockReader r(path, b, {"kind", "width_nm", "file"});
  if (const KeyValue* kv = r.find("kind")) {
    if (kv->value == "analytic") {
      out->kind = ProfileKind::analytic;
    } else if (kv->value == "tabulated") {
      out->kind = ProfileKind::tabulated;
    } else {
      fail_at(path, kv->line, kv->col, "'kind' must be analytic or tabulated");
    }
  }
  const KeyValue* width = r.find("width_nm");
  const KeyValue* file = r.find("file");
  if (out->kind == ProfileKind::analytic) {
    if (file) fail_at(path, file->line, file->col, "'file' applies to the tabulated profile only");
    if (width) {
      out->width_nm = to_double(path, *width);
      check_positive(path, *width, out->width_nm);
    }
  } else {
    if (width) {
      fail_at(path, width->line, width->col, "'width_nm' applies to the analytic profile only");
    }
    if (!file) fail_at(path, b.line, b.col, "[profile] kind = tabulated requires 'file'");
    out->file = file->value;
    std::ifstream probe(out->file);
    if (!probe) {
      fail_at(path, file->line, file->col, "cannot open mode-profile file '" + out->file + "'");
    }
  }
}

EmitterSpec read_emitter(const std::string& path, const Block& b, const NanocavityParams& cavity) {
  BlockReader r(path, b, {"omega_mev", "kappa_vib_mev", "dipole_debye", "x_nm", "y_nm"});
  EmitterSpec em = default_emitter(cavity);
  if (const KeyValue* kv = r.find("omega_mev")) {
    em.omega_qe = to_double(path, *kv);
    check_positive(path, *kv, em.omega_qe);
  }
  if (const KeyValue* kv = r.find("kappa_vib_mev")) {
    em.kappa_vib = to_double(path, *kv);
    check_nonnegative(path, *kv, em.kappa_vib);
  }
  if (const KeyValue* kv = r.find("dipole_debye")) {
    em.dipole = to_double(path, *kv);
    check_positive(path, *kv, em.dipole);
  }
  if (const KeyValue* kv = r.find("x_nm")) em.x = to_double(path, *kv);
  if (const KeyValue* kv = r.find("y_nm")) em.y = to_double(path, *kv);
  return em;
}

void read_drive(const std::string& path, const Block& b, DriveBlock* out) {
  BlockReader r(path, b, {"omega_p_mev", "delta_p_mev", "alpha", "photon_number"});
  const KeyValue* omega = r.find("omega_p_mev");
  const KeyValue* delta = r.find("delta_p_mev");
  if (omega && delta) {
    fail_at(path, delta->line, delta->col, "give omega_p_mev or delta_p_mev, not both");
  }
  if (omega) {
    out->omega_p_mev = to_double(path, *omega);
    check_positive(path, *omega, *out->omega_p_mev);
  } else if (delta) {
    out->delta_p_mev = to_double(path, *delta);
  } else {
    out->delta_p_mev = 0.0;  // resonant with the cavity
  }
  const KeyValue* alpha = r.find("alpha");
  const KeyValue* nph = r.find("photon_number");
  if (alpha && nph) {
    fail_at(path, nph->line, nph->col, "give alpha or photon_number, not both");
  }
  if (alpha) {
    out->alpha = to_double(path, *alpha);
    check_nonnegative(path, *alpha, *out->alpha);
  } else if (nph) {
    out->photon_number = to_double(path, *nph);
    check_nonnegative(path, *nph, *out->photon_number);
  } else {
    out->photon_number = 1e-6;
  }
}

void read_initial(const std::string& path, const Block& b, int n_emitters,
                  InitialStateSpec* out) {
  std::vector<std::string> keys = {"state", "amp_ground", "amp_photon"};
  for (int j = 1; j <= n_emitters; ++j) keys.push_back("amp_emitter_" + std::to_string(j));
  BlockReader r(path, b, keys);
  const KeyValue* state = r.find("state");
  if (!state) fail_at(path, b.line, b.col, "[initial] requires a 'state' key");
  const std::string& v = state->value;
  if (v == "ground") {
    out->kind = InitialStateKind::ground;
  } else if (v == "photon") {
    out->kind = InitialStateKind::photon;
  } else if (v.rfind("emitter:", 0) == 0) {
    out->kind = InitialStateKind::emitter;
    const long j = str_to_long(path, state->line, state->col, v.substr(8), "emitter index");
    if (n_emitters == 0) {
      fail_at(path, state->line, state->col,
              "initial state 'emitter:<j>' requires at least one [emitter] block");
    }
    if (j < 1 || j > n_emitters) {
      fail_at(path, state->line, state->col,
              "emitter index must be between 1 and " + std::to_string(n_emitters));
    }
    out->emitter = static_cast<int>(j);
  } else if (v == "custom") {
    out->kind = InitialStateKind::custom;
  } else {
    fail_at(path, state->line, state->col,
            "'state' must be ground, photon, emitter:<j>, or custom");
  }

  const KeyValue* first_amp = nullptr;
  for (std::size_t k = 1; k < keys.size(); ++k) {
    if (const KeyValue* kv = r.find(keys[k])) {
      first_amp = kv;
      break;
    }
  }
  if (out->kind != InitialStateKind::custom) {
    if (first_amp) {
      fail_at(path, first_amp->line, first_amp->col,
              "amplitude keys apply only to state = custom");
    }
    return;
  }
  out->amplitudes_re.assign(static_cast<std::size_t>(n_emitters) + 2, 0.0);
  out->amplitudes_im.assign(static_cast<std::size_t>(n_emitters) + 2, 0.0);
  double norm2 = 0.0;
  auto set_amp = [&](const std::string& key, std::size_t index) {
    if (const KeyValue* kv = r.find(key)) {
      double re = 0.0, im = 0.0;
      to_complex_parts(path, *kv, &re, &im);
      out->amplitudes_re[index] = re;
      out->amplitudes_im[index] = im;
      norm2 += re * re + im * im;
    }
  };
  set_amp("amp_ground", 0);
  set_amp("amp_photon", 1);
  for (int j = 1; j <= n_emitters; ++j) {
    set_amp("amp_emitter_" + std::to_string(j), static_cast<std::size_t>(j) + 1);
  }
  if (!(norm2 > 0.0)) {
    fail_at(path, b.line, b.col, "custom state needs at least one nonzero amplitude");
  }
}

void read_evolution(const std::string& path, const Block& b, EvolutionConfig* out) {
  BlockReader r(path, b, {"t_max_fs", "dt_fs", "method", "rel_tol", "abs_tol", "record_stride"});
  if (const KeyValue* kv = r.find("t_max_fs")) {
    out->t_max = to_double(path, *kv);
    check_positive(path, *kv, out->t_max);
  }
  if (const KeyValue* kv = r.find("dt_fs")) {
    out->dt_initial = to_double(path, *kv);
    check_positive(path, *kv, out->dt_initial);
  }
  if (const KeyValue* kv = r.find("method")) {
    if (kv->value == "rk4") {
      out->method = Method::rk4_fixed;
    } else if (kv->value == "rk45") {
      out->method = Method::rk45_adaptive;
    } else if (kv->value == "expm") {
      out->method = Method::expm_propagator;
    } else {
      fail_at(path, kv->line, kv->col, "'method' must be rk4, rk45, or expm");
    }
  }
  if (const KeyValue* kv = r.find("rel_tol")) {
    out->rel_tol = to_double(path, *kv);
    check_positive(path, *kv, out->rel_tol);
  }
  if (const KeyValue* kv = r.find("abs_tol")) {
    out->abs_tol = to_double(path, *kv);
    check_nonnegative(path, *kv, out->abs_tol);
  }
  if (const KeyValue* kv = r.find("record_stride")) {
    out->record_stride = to_int(path, *kv);
    if (out->record_stride < 1) fail_at(path, kv->line, kv->col, "'record_stride' must be >= 1");
  }
}

void read_sweep(const std::string& path, const Block& b, SweepBlock* out) {
  BlockReader r(path, b, {"type", "axis", "axis1", "axis2", "placement", "max_cells"});
  if (const KeyValue* kv = r.find("type")) {
    if (kv->value == "map") {
      out->type = SweepType::map;
    } else if (kv->value == "position") {
      out->type = SweepType::position;
    } else {
      fail_at(path, kv->line, kv->col, "'type' must be map or position");
    }
  }
  const KeyValue* axis = r.find("axis");
  const KeyValue* axis1 = r.find("axis1");
  const KeyValue* axis2 = r.find("axis2");
  const KeyValue* placement = r.find("placement");
  if (out->type == SweepType::map) {
    if (axis) {
      fail_at(path, axis->line, axis->col, "'axis' applies to position sweeps; use axis1/axis2");
    }
    if (placement) {
      fail_at(path, placement->line, placement->col, "'placement' applies to position sweeps");
    }
    if (!axis1 || !axis2) {
      fail_at(path, b.line, b.col, "[sweep] type = map requires 'axis1' and 'axis2'");
    }
    out->axes = {to_axis(path, *axis1), to_axis(path, *axis2)};
  } else {
    if (axis1 || axis2) {
      const KeyValue* kv = axis1 ? axis1 : axis2;
      fail_at(path, kv->line, kv->col, "'axis1'/'axis2' apply to map sweeps; use 'axis'");
    }
    if (!axis) fail_at(path, b.line, b.col, "[sweep] type = position requires 'axis'");
    if (!placement) {
      fail_at(path, b.line, b.col, "[sweep] type = position requires 'placement'");
    }
    out->axes = {to_axis(path, *axis)};
    try {
      out->placement = placement_from_string(placement->value);
    } catch (const std::exception& e) {
      fail_at(path, placement->line, placement->col, e.what());
    }
  }
  if (const KeyValue* kv = r.find("max_cells")) {
    out->max_cells = to_long(path, *kv);
    if (out->max_cells < 1) fail_at(path, kv->line, kv->col, "'max_cells' must be >= 1");
  }
}

void validate_config(const std::string& path, const RunConfig& c) {
  auto fail = [&](const std::string& msg) { throw ConfigError(path + ": " + msg); };
  if (!c.drive && c.initial.kind == InitialStateKind::ground) {
    fail("nothing to simulate: add a [drive] block or a non-ground [initial] state");
  }
  if (c.drive && c.model.n_max < 1) fail("a [drive] block requires n_max >= 1");
  if (c.initial.kind == InitialStateKind::photon && c.model.n_max < 1) {
    fail("initial state 'photon' requires n_max >= 1");
  }
  if (c.initial.kind == InitialStateKind::emitter && c.emitters.empty()) {
    fail("initial state 'emitter:<j>' requires at least one [emitter] block");
  }
  if (c.initial.kind == InitialStateKind::custom && c.model.n_max < 1 &&
      (c.initial.amplitudes_re[1] != 0.0 || c.initial.amplitudes_im[1] != 0.0)) {
    fail("a nonzero amp_photon requires n_max >= 1");
  }
  if (c.sweep) {
    for (const SweepAxis& ax : c.sweep->axes) {
      if (ax.name == AxisName::delta_p && !c.drive) {
        fail("a delta_p sweep axis requires a [drive] block");
      }
    }
    if (c.sweep->placement) {
      const std::size_t n = c.emitters.size();
      switch (*c.sweep->placement) {
        case Placement::symmetric_pair:
        case Placement::asymmetric_pair:
          if (n != 2) fail("pair placements require exactly 2 [emitter] blocks");
          break;
        case Placement::ring:
          if (n < 1) fail("ring placement requires at least one [emitter] block");
          break;
        case Placement::encircled:
          if (n < 2) fail("encircled placement requires at least 2 [emitter] blocks");
          break;
      }
    }
  }
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string axis_text(const SweepAxis& ax) {
  return to_string(ax.name) + ":" + num(ax.start) + ":" + num(ax.stop) + ":" +
         std::to_string(ax.count);
}

std::string amp_text(double re, double im) { return num(re) + "," + num(im); }

}  // namespace

NanocavityParams default_cavity() {
  NanocavityParams cav;
  cav.omega_cav = 338.9 * units::mev_per_thz;
  cav.kappa_out = 9.8 * units::mev_per_thz;
  cav.mode_volume_re = 60.01;
  cav.mode_volume_im = 0.0;
  cav.epsilon = 6.25;
  cav.sigma_ext_classical = 5000.0;
  return cav;
}

EmitterSpec default_emitter(const NanocavityParams& cavity) {
  EmitterSpec em;
  em.omega_qe = cavity.omega_cav;
  em.kappa_vib = 25.0;
  em.dipole = 10.1;
  em.x = 0.0;
  em.y = 0.0;
  return em;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

RunConfig parse_config_text(const std::string& text, const std::string& path_label) {
  const std::string& path = path_label;
  std::vector<Block> blocks;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const int col = static_cast<int>(first) + 1;
    const std::string body = trim(line);
    if (body.front() == '[') {
      if (body.back() != ']') fail_at(path, lineno, col, "unterminated [block] header");
      const std::string name = trim(body.substr(1, body.size() - 2));
      if (name.empty()) fail_at(path, lineno, col, "empty block name");
      blocks.push_back(Block{name, lineno, col, {}});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail_at(path, lineno, col, "expected 'key = value' or a [block] header");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(path, lineno, col, "missing key before '='");
    if (value.empty()) fail_at(path, lineno, col, "missing value for key '" + key + "'");
    if (blocks.empty()) fail_at(path, lineno, col, "key '" + key + "' outside of any [block]");
    blocks.back().entries.push_back(KeyValue{key, value, lineno, col});
  }

  static const std::vector<std::string> kBlockNames = {
      "model", "cavity", "profile", "emitter", "drive", "initial", "evolution", "sweep"};
  const Block* model_b = nullptr;
  const Block* cavity_b = nullptr;
  const Block* profile_b = nullptr;
  const Block* drive_b = nullptr;
  const Block* initial_b = nullptr;
  const Block* evolution_b = nullptr;
  const Block* sweep_b = nullptr;
  std::vector<const Block*> emitter_bs;
  for (const Block& b : blocks) {
    if (std::find(kBlockNames.begin(), kBlockNames.end(), b.name) == kBlockNames.end()) {
      fail_at(path, b.line, b.col,
              "unknown block [" + b.name + "] (nearest valid block: [" +
                  nearest(b.name, kBlockNames) + "])");
    }
    if (b.name == "emitter") {
      emitter_bs.push_back(&b);
      continue;
    }
    const Block** slot = nullptr;
    if (b.name == "model") slot = &model_b;
    if (b.name == "cavity") slot = &cavity_b;
    if (b.name == "profile") slot = &profile_b;
    if (b.name == "drive") slot = &drive_b;
    if (b.name == "initial") slot = &initial_b;
    if (b.name == "evolution") slot = &evolution_b;
    if (b.name == "sweep") slot = &sweep_b;
    if (*slot) fail_at(path, b.line, b.col, "duplicate [" + b.name + "] block");
    *slot = &b;
  }
  if (emitter_bs.size() > 8) {
    fail_at(path, emitter_bs[8]->line, emitter_bs[8]->col, "at most 8 [emitter] blocks supported");
  }

  RunConfig cfg;
  cfg.cavity = default_cavity();
  if (model_b) read_model(path, *model_b, &cfg.model);
  if (cavity_b) read_cavity(path, *cavity_b, &cfg.cavity);
  if (profile_b) read_profile(path, *profile_b, &cfg.profile);
  for (const Block* b : emitter_bs) cfg.emitters.push_back(read_emitter(path, *b, cfg.cavity));
  if (drive_b) {
    DriveBlock d;
    read_drive(path, *drive_b, &d);
    cfg.drive = d;
  }
  if (initial_b) {
    read_initial(path, *initial_b, static_cast<int>(cfg.emitters.size()), &cfg.initial);
  }
  if (evolution_b) read_evolution(path, *evolution_b, &cfg.evolution);
  if (sweep_b) {
    SweepBlock s;
    read_sweep(path, *sweep_b, &s);
    cfg.sweep = s;
  }

  validate_config(path, cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[model]\n";
  out << "n_max = " << c.model.n_max << "\n";
  if (c.model.sector_cap) out << "sector_cap = " << *c.model.sector_cap << "\n";
  out << "dephasing_convention = "
      << (c.model.convention == DephasingConvention::as_written ? "as_written" : "half_rate")
      << "\n";
  out << "convergence_guard = " << (c.model.convergence_guard ? "true" : "false") << "\n";

  out << "\n[cavity]\n";
  out << "omega_mev = " << num(c.cavity.omega_cav) << "\n";
  out << "kappa_out_mev = " << num(c.cavity.kappa_out) << "\n";
  out << "mode_volume_re_nm3 = " << num(c.cavity.mode_volume_re) << "\n";
  out << "mode_volume_im_nm3 = " << num(c.cavity.mode_volume_im) << "\n";
  out << "epsilon = " << num(c.cavity.epsilon) << "\n";
  out << "sigma_ext_nm2 = " << num(c.cavity.sigma_ext_classical) << "\n";

  out << "\n[profile]\n";
  if (c.profile.kind == ProfileKind::analytic) {
    out << "kind = analytic\n";
    out << "width_nm = " << num(c.profile.width_nm) << "\n";
  } else {
    out << "kind = tabulated\n";
    out << "file = " << c.profile.file << "\n";
  }

  for (const EmitterSpec& em : c.emitters) {
    out << "\n[emitter]\n";
    out << "omega_mev = " << num(em.omega_qe) << "\n";
    out << "kappa_vib_mev = " << num(em.kappa_vib) << "\n";
    out << "dipole_debye = " << num(em.dipole) << "\n";
    out << "x_nm = " << num(em.x) << "\n";
    out << "y_nm = " << num(em.y) << "\n";
  }

  if (c.drive) {
    out << "\n[drive]\n";
    if (c.drive->omega_p_mev) out << "omega_p_mev = " << num(*c.drive->omega_p_mev) << "\n";
    if (c.drive->delta_p_mev) out << "delta_p_mev = " << num(*c.drive->delta_p_mev) << "\n";
    if (c.drive->alpha) out << "alpha = " << num(*c.drive->alpha) << "\n";
    if (c.drive->photon_number) out << "photon_number = " << num(*c.drive->photon_number) << "\n";
  }

  out << "\n[initial]\n";
  switch (c.initial.kind) {
    case InitialStateKind::ground:
      out << "state = ground\n";
      break;
    case InitialStateKind::photon:
      out << "state = photon\n";
      break;
    case InitialStateKind::emitter:
      out << "state = emitter:" << c.initial.emitter << "\n";
      break;
    case InitialStateKind::custom: {
      out << "state = custom\n";
      const std::size_t n = c.initial.amplitudes_re.size();
      for (std::size_t k = 0; k < n; ++k) {
        const double re = c.initial.amplitudes_re[k];
        const double im = c.initial.amplitudes_im[k];
        if (re == 0.0 && im == 0.0) continue;
        if (k == 0) {
          out << "amp_ground = " << amp_text(re, im) << "\n";
        } else if (k == 1) {
          out << "amp_photon = " << amp_text(re, im) << "\n";
        } else {
          out << "amp_emitter_" << (k - 1) << " = " << amp_text(re, im) << "\n";
        }
      }
      break;
    }
  }

  out << "\n[evolution]\n";
  out << "t_max_fs = " << num(c.evolution.t_max) << "\n";
  out << "dt_fs = " << num(c.evolution.dt_initial) << "\n";
  const char* method = "rk45";
  if (c.evolution.method == Method::rk4_fixed) method = "rk4";
  if (c.evolution.method == Method::expm_propagator) method = "expm";
  out << "method = " << method << "\n";
  out << "rel_tol = " << num(c.evolution.rel_tol) << "\n";
  out << "abs_tol = " << num(c.evolution.abs_tol) << "\n";
  out << "record_stride = " << c.evolution.record_stride << "\n";

  if (c.sweep) {
    out << "\n[sweep]\n";
    out << "type = " << (c.sweep->type == SweepType::map ? "map" : "position") << "\n";
    if (c.sweep->type == SweepType::map) {
      out << "axis1 = " << axis_text(c.sweep->axes[0]) << "\n";
      out << "axis2 = " << axis_text(c.sweep->axes[1]) << "\n";
    } else {
      out << "axis = " << axis_text(c.sweep->axes[0]) << "\n";
      out << "placement = " << to_string(*c.sweep->placement) << "\n";
    }
    out << "max_cells = " << c.sweep->max_cells << "\n";
  }
  return out.str();
}

ResolvedSystem resolve(const RunConfig& config) {
  return resolve_with_n_max(config, config.model.n_max);
}

ResolvedSystem resolve_with_n_max(const RunConfig& config, int n_max) {
  try {
    HilbertSpec spec;
    spec.n_max = n_max;
    spec.n_emitters = static_cast<int>(config.emitters.size());
    spec.sector_cap = config.model.sector_cap;
    SpacePtr space = make_space(spec);
    ModeProfile profile = config.profile.kind == ProfileKind::analytic
                              ? ModeProfile::analytic(config.profile.width_nm)
                              : ModeProfile::load(config.profile.file);
    const double kappa_in = in_coupling(config.cavity);
    std::optional<DriveSpec> drive;
    if (config.drive) {
      DriveSpec d;
      d.omega_p = config.drive->omega_p_mev
                      ? *config.drive->omega_p_mev
                      : config.cavity.omega_cav + *config.drive->delta_p_mev;
      if (config.drive->alpha) {
        d.alpha = *config.drive->alpha;
      } else {
        const double delta_cav = config.cavity.omega_cav - d.omega_p;
        d.alpha = drive_for_photon_number(config.cavity, delta_cav, *config.drive->photon_number);
      }
      drive = d;
    }
    std::vector<double> couplings;
    couplings.reserve(config.emitters.size());
    for (const EmitterSpec& em : config.emitters) {
      couplings.push_back(coupling_strength(config.cavity, em, profile));
    }
    const double enhancement =
        config.emitters.empty() ? 0.0 : effective_coupling(config.emitters, profile);
    DensityMatrix init = initial_state(space, config.initial);
    return ResolvedSystem{std::move(space),
                          config.cavity,
                          config.emitters,
                          std::move(profile),
                          drive,
                          config.model.convention,
                          std::move(init),
                          std::move(couplings),
                          kappa_in,
                          enhancement,
                          config.evolution,
                          config.model.convergence_guard && !config.model.sector_cap};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("configuration rejected: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("configuration rejected: ") + e.what());
  }
}

SweepBase make_sweep_base(const RunConfig& config) {
  ResolvedSystem sys = resolve(config);
  SweepBase base;
  base.space_spec = sys.space->spec();
  base.cavity = sys.cavity;
  base.emitters = sys.emitters;
  base.profile = sys.profile;
  base.drive = sys.drive;
  base.convention = sys.convention;
  base.initial = config.initial;
  base.evolution = config.evolution;
  return base;
}

}  // namespace pqed
