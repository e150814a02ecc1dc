// Copyright 2026 The catqudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catqudit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "catqudit/cat_algebra.hpp"
#include "catqudit/config.hpp"
#include "catqudit/text.hpp"
#include "catqudit/units.hpp"

namespace fs = std::filesystem;

namespace catqudit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

double kappa_inv_us(const NoiseParams& noise) {
  if (noise.kappa1 <= 0.0) return std::numeric_limits<double>::infinity();
  return to_microseconds(1.0 / noise.kappa1);
}

// Options shared by derive, simulate and sweep.
struct ConfigOptions {
  std::string config_path;
  std::string preset;
  std::vector<std::string> sets;
  std::string level;
  std::string T_us;
  std::string kappa_inv_us;
  std::string x;
  std::string dtau_frac;
  std::string gcr;
  std::string method;
  int samples = -1;

  void attach(CLI::App& app, bool protocol_knobs) {
    app.add_option("--config", config_path, "key = value run configuration");
    app.add_option("--preset", preset,
                   "bundled parameter set (default table1)");
    app.add_option("--set", sets, "extra 'key=value' line, applied last");
    app.add_option("--T", T_us, "qutrit decoherence scale in us (inf: none)");
    app.add_option("--kappa-inv", kappa_inv_us,
                   "cavity lifetime in us (inf: lossless)");
    if (!protocol_knobs) return;
    app.add_option("--level", level, "full, intermediate or effective");
    app.add_option("--x", x, "skew of the d = 3 superposition");
    app.add_option("--dtau-frac", dtau_frac, "step-time error dtau/tau");
    app.add_option("--gcr", gcr, "crosstalk as a fraction of g_max");
    app.add_option("--method", method, "rk4 or adaptive");
    app.add_option("--samples", samples, "trajectory samples per step");
  }

  ProtocolConfig build() const {
    ProtocolConfig cfg;
    if (!preset.empty() || config_path.empty()) {
      cfg = load_preset(preset.empty() ? "table1" : preset);
    }
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    std::string extra;
    auto line = [&](const std::string& key, const std::string& value,
                    const std::string& unit) {
      if (!value.empty()) extra += key + " = " + value + unit + "\n";
    };
    auto time_line = [&](const std::string& key, const std::string& value) {
      if (value.empty()) return;
      const double v = parse_double(value);
      extra += key + " = " + ((v > 0.0 && std::isfinite(v)) ? value + " us\n" : "inf\n");
    };
    time_line("T", T_us);
    time_line("kappa_inv", kappa_inv_us);
    line("level", level, "");
    line("x", x, "");
    line("dtau_frac", dtau_frac, "");
    line("gcr_frac", gcr, "");
    line("integrator.method", method, "");
    if (samples >= 0) extra += "integrator.samples = " + std::to_string(samples) + "\n";
    for (const auto& s : sets) extra += s + "\n";
    apply_config_text(extra, cfg, "<command line>");
    // Non-positive or infinite T means no qutrit noise.
    if (!(cfg.noise.T > 0.0)) cfg.noise.T = std::numeric_limits<double>::infinity();
    cfg.validate();
    return cfg;
  }
};

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "catqudit_out";
}

RunManifest make_manifest(const std::string& command,
                          const std::vector<std::string>& args,
                          const ConfigOptions* opts, const fs::path& dir) {
  RunManifest m;
  m.command = command;
  m.arguments = args;
  if (opts) {
    m.config_path = opts->config_path;
    m.preset = opts->preset.empty() && opts->config_path.empty()
                   ? "table1"
                   : opts->preset;
  }
  m.output_dir = dir.string();
  return m;
}

std::string fmt(double v) { return format_double(v, 6); }

class Heartbeat {
 public:
  explicit Heartbeat(std::ostream& err) : err_(err), start_(clock::now()) {}

  void operator()(double fraction) {
    const double elapsed =
        std::chrono::duration<double>(clock::now() - start_).count();
    if (fraction - last_fraction_ < 0.05 && elapsed - last_time_ < 30.0 &&
        fraction < 1.0) {
      return;
    }
    last_fraction_ = fraction;
    last_time_ = elapsed;
    err_ << "progress " << static_cast<int>(std::round(100.0 * fraction))
         << "% elapsed " << format_double(elapsed, 3) << " s" << std::endl;
  }

 private:
  using clock = std::chrono::steady_clock;
  std::ostream& err_;
  clock::time_point start_;
  double last_fraction_ = 0.0;
  double last_time_ = 0.0;
};

std::string diagnostics_text(const FidelityResult& r) {
  const Diagnostics& d = r.diagnostics;
  std::ostringstream out;
  out << "ok = " << (r.ok ? "true" : "false") << "\n";
  if (!r.error.empty()) out << "error = " << r.error << "\n";
  out << "F = " << format_double(r.F) << "\n";
  out << "tau_us = " << format_double(to_microseconds(r.tau)) << "\n";
  out << "integrated_dim = " << r.integrated_dim << "\n";
  out << "steps = " << d.steps << "\n";
  out << "last_step_s = " << format_double(d.last_step) << "\n";
  out << "min_trace = " << format_double(d.min_trace) << "\n";
  out << "max_trace_error = " << format_double(d.max_trace_error) << "\n";
  out << "max_hermiticity_defect = " << format_double(d.max_hermiticity_defect)
      << "\n";
  out << "min_eigenvalue = " << format_double(d.min_eigenvalue) << "\n";
  out << "max_excited_population = "
      << format_double(d.max_excited_population) << "\n";
  out << "flagged = " << (d.flagged ? "true" : "false") << "\n";
  if (!d.message.empty()) out << "message = " << d.message << "\n";
  out << "runtime_s = " << format_double(r.runtime_s, 4) << "\n";
  return out.str();
}

std::string trajectory_csv(const std::vector<Sample>& samples) {
  std::ostringstream out;
  out << "t_us,fidelity_to_target,trace,qutrit_g_pop,qutrit_e_pop,"
         "qutrit_f_pop,cav1_n,cav2_n\n";
  for (const Sample& s : samples) {
    out << format_double(to_microseconds(s.t)) << ','
        << format_double(s.fidelity) << ',' << format_double(s.trace) << ','
        << format_double(s.qutrit_g_pop) << ','
        << format_double(s.qutrit_e_pop) << ','
        << format_double(s.qutrit_f_pop) << ',' << format_double(s.cav1_n)
        << ',' << format_double(s.cav2_n) << '\n';
  }
  return out.str();
}

std::string derive_report(const SystemParams& p, const NoiseParams& noise) {
  const DerivedParams r = derived_params(p, noise);
  std::ostringstream out;
  auto ghz_line = [&](const std::string& name, double v) {
    out << name << "_GHz = " << fmt(to_ghz(v)) << "\n";
  };
  auto mhz_line = [&](const std::string& name, double v) {
    out << name << "_MHz = " << fmt(to_mhz(v)) << "\n";
  };
  out << "# detunings (omega/2pi)\n";
  ghz_line("Delta1", r.Delta1);
  ghz_line("Delta2", r.Delta2);
  ghz_line("delta", r.delta);
  ghz_line("Delta1_tilde", r.Delta1_tilde);
  ghz_line("Delta1_prime", r.Delta1_prime);
  ghz_line("Delta2_tilde", r.Delta2_tilde);
  ghz_line("Delta2_prime", r.Delta2_prime);
  ghz_line("Delta12", r.Delta12);
  ghz_line("Delta12_tilde", r.Delta12_tilde);
  ghz_line("delta1", r.delta1);
  ghz_line("delta1_tilde", r.delta1_tilde);
  ghz_line("delta1_prime", r.delta1_prime);
  ghz_line("delta2", r.delta2);
  ghz_line("delta2_tilde", r.delta2_tilde);
  ghz_line("delta2_prime", r.delta2_prime);
  out << "# second step\n";
  out << "matching = "
      << (p.matching == Matching::kExact ? "exact" : "as_printed") << "\n";
  ghz_line("omega_c1_tilde", r.omega_c1_tilde);
  mhz_line("mu1", r.mu1);
  mhz_line("mu2", r.mu2);
  out << "# dispersive rates (omega/2pi)\n";
  mhz_line("lambda1", r.lambda1);
  mhz_line("lambda2", r.lambda2);
  mhz_line("lambda", r.lambda);
  mhz_line("chi", r.chi);
  mhz_line("lambda1_plus_chi", r.lambda1 + r.chi);
  mhz_line("lambda1_tilde", r.lambda1_tilde);
  out << "matching_residual = " << fmt(r.matching_residual) << "\n";
  out << "# matching solve\n";
  try {
    ghz_line("omega_c1_tilde_scaled_coupling",
             matched_cavity_frequency(p, MatchScaling::kScaled));
  } catch (const std::domain_error& e) {
    out << "omega_c1_tilde_scaled_coupling = none (" << e.what() << ")\n";
  }
  try {
    ghz_line("omega_c1_tilde_fixed_coupling",
             matched_cavity_frequency(p, MatchScaling::kFixedCoupling));
  } catch (const std::domain_error& e) {
    out << "omega_c1_tilde_fixed_coupling = none (" << e.what() << ")\n";
  }
  if (p.omega_c1_tilde && p.mu1) {
    out << "matching_residual_configured = "
        << fmt(matching_residual(p, *p.omega_c1_tilde, *p.mu1)) << "\n";
  }
  out << "# timing\n";
  out << "tau_us = " << fmt(to_microseconds(r.tau)) << "\n";
  out << "two_tau_us = " << fmt(to_microseconds(2.0 * r.tau)) << "\n";
  out << "# validity (small is good)\n";
  out << "g1_over_Delta1 = " << fmt(r.validity.g1_over_delta1) << "\n";
  out << "g2_over_Delta2 = " << fmt(r.validity.g2_over_delta2) << "\n";
  out << "lambda_over_delta = " << fmt(r.validity.lambda_over_delta) << "\n";
  out << "max_shift_over_delta = " << fmt(r.validity.max_shift_over_delta)
      << "\n";
  out << "mu1_over_delta1 = " << fmt(r.validity.mu1_over_delta1) << "\n";
  out << "# quality factors\n";
  out << "Q1 = " << fmt(r.Q1) << "\n";
  out << "Q2 = " << fmt(r.Q2) << "\n";
  out << "Q1_tilde = " << fmt(r.Q1_tilde) << "\n";
  out << "Q2_tilde = " << fmt(r.Q2_tilde) << "\n";
  if (!r.printed_mismatch.empty()) {
    out << "# recomputed vs tabulated (name computed tabulated rel_diff)\n";
    for (const auto& m : r.printed_mismatch) {
      const bool coupling = m.name.rfind("mu", 0) == 0;
      const double scale = coupling ? 1.0 / (kTwoPi * 1e6) : 1.0 / (kTwoPi * 1e9);
      out << "table." << m.name << " = " << fmt(m.computed * scale) << " "
          << fmt(m.printed * scale) << (coupling ? " MHz " : " GHz ")
          << fmt(m.relative_difference) << "\n";
    }
  }
  return out.str();
}

int cmd_certify(int d, double s, const std::optional<double>& alpha,
                const std::optional<double>& phi, const fs::path& dir,
                const RunManifest& manifest, std::ostream& out) {
  CatParams params = choose_parameters(d, s);
  if (alpha) params.alpha = *alpha;
  if (phi) params.phi = *phi;
  params.validate();
  const OverlapReport report = certify_quasiorthogonality(params);
  fs::create_directories(dir);
  write_file(dir / "overlaps.csv", to_csv(report));
  write_file(dir / "certify.txt", to_key_value(report));
  write_file(dir / "manifest.txt", to_text(manifest));
  out << to_key_value(report);
  return report.passed ? kExitOk : kExitScience;
}

}  // namespace

std::string to_text(const RunManifest& m) {
  std::ostringstream out;
  out << "command = " << m.command << "\n";
  out << "arguments =";
  for (const auto& a : m.arguments) out << " " << a;
  out << "\n";
  out << "config_path = " << m.config_path << "\n";
  out << "preset = " << m.preset << "\n";
  out << "output_dir = " << m.output_dir << "\n";
  out << "deterministic = " << (m.deterministic ? "true" : "false") << "\n";
  out << "tool_version = " << m.tool_version << "\n";
  if (!m.replay.empty()) out << "replay = " << m.replay << "\n";
  return out.str();
}

std::vector<double> parse_points(const std::string& text, int default_count) {
  const auto range = text.find("..");
  if (range == std::string::npos) {
    std::vector<double> points;
    for (const auto& piece : split(text, ',')) points.push_back(parse_double(piece));
    if (points.empty()) throw std::invalid_argument("no points given");
    return points;
  }
  const double lo = parse_double(text.substr(0, range));
  std::string rest = text.substr(range + 2);
  int count = default_count;
  if (const auto colon = rest.find(':'); colon != std::string::npos) {
    count = parse_int(rest.substr(colon + 1));
    rest = rest.substr(0, colon);
  }
  const double hi = parse_double(rest);
  if (count < 1) throw std::invalid_argument("point count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> points(count);
  for (int i = 0; i < count; ++i) {
    points[i] = lo + (hi - lo) * i / (count - 1);
  }
  points.back() = hi;
  return points;
}

std::string result_csv_header() {
  return "axis_value,F,model_level,T_us,kappa_inv_us,x,dtau_frac,g_cr_frac,"
         "runtime_s,axis,tau_us,integrated_dim,steps,min_trace,"
         "max_trace_error,max_hermiticity_defect,min_eigenvalue,"
         "max_excited_population,flagged,ok,error\n";
}

std::string result_csv_row(const std::string& axis, double axis_value,
                           const FidelityResult& r) {
  const ProtocolConfig& c = r.config;
  const Diagnostics& d = r.diagnostics;
  std::ostringstream out;
  out << format_double(axis_value) << ',' << format_double(r.F) << ','
      << to_string(c.level) << ','
      << format_double(to_microseconds(c.noise.T)) << ','
      << format_double(kappa_inv_us(c.noise)) << ',' << format_double(c.x)
      << ',' << format_double(c.dtau_frac) << ','
      << format_double(c.gcr_frac) << ',' << format_double(r.runtime_s, 4)
      << ',' << axis << ',' << format_double(to_microseconds(r.tau)) << ','
      << r.integrated_dim << ',' << d.steps << ','
      << format_double(d.min_trace) << ',' << format_double(d.max_trace_error)
      << ',' << format_double(d.max_hermiticity_defect) << ','
      << format_double(d.min_eigenvalue) << ','
      << format_double(d.max_excited_population) << ','
      << (d.flagged ? "true" : "false") << ',' << (r.ok ? "true" : "false")
      << ',' << csv_quote(r.error) << '\n';
  return out.str();
}

std::vector<ResultRow> parse_result_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty result table");
  const auto header = csv_fields(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"axis_value", "F", "model_level", "T_us",
                           "kappa_inv_us", "x", "dtau_frac", "g_cr_frac", "axis",
                           "ok"}) {
    if (!col.count(need)) {
      throw std::invalid_argument(std::string("result table lacks column ") + need);
    }
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = csv_fields(line);
    if (f.size() != header.size()) {
      throw std::invalid_argument("result row has " + std::to_string(f.size()) +
                                  " fields, header has " +
                                  std::to_string(header.size()));
    }
    ResultRow r;
    r.axis_value = parse_double(f[col["axis_value"]]);
    r.F = parse_double(f[col["F"]]);
    r.model_level = f[col["model_level"]];
    r.T_us = parse_double(f[col["T_us"]]);
    r.kappa_inv_us = parse_double(f[col["kappa_inv_us"]]);
    r.x = parse_double(f[col["x"]]);
    r.dtau_frac = parse_double(f[col["dtau_frac"]]);
    r.g_cr_frac = parse_double(f[col["g_cr_frac"]]);
    r.axis = f[col["axis"]];
    r.ok = f[col["ok"]] == "true";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_svg(const std::vector<ResultRow>& rows) {
  constexpr double kW = 720, kH = 480, kLeft = 80, kRight = 200, kTop = 30,
                   kBottom = 60;
  const std::vector<std::string> colors = {"#1f77b4", "#d62728", "#2ca02c",
                                           "#9467bd", "#ff7f0e", "#8c564b",
                                           "#e377c2", "#17becf"};

  // Knobs other than the swept one identify a series.
  auto knobs = [](const ResultRow& r) {
    std::vector<std::pair<std::string, std::string>> k = {
        {"level", r.model_level},
        {"T", format_double(r.T_us, 4) + " us"},
        {"kappa_inv", format_double(r.kappa_inv_us, 4) + " us"},
        {"x", format_double(r.x, 4)},
        {"dtau_frac", format_double(r.dtau_frac, 4)},
        {"gcr", format_double(r.g_cr_frac, 4)}};
    std::erase_if(k, [&](const auto& p) { return p.first == r.axis; });
    return k;
  };

  std::map<std::vector<std::pair<std::string, std::string>>,
           std::vector<std::pair<double, double>>>
      series;
  std::string axis = rows.empty() ? "" : rows.front().axis;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& r : rows) {
    auto& pts = series[knobs(r)];
    if (!r.ok || !std::isfinite(r.F) || !std::isfinite(r.axis_value)) continue;
    pts.emplace_back(r.axis_value, r.F);
    xmin = std::min(xmin, r.axis_value);
    xmax = std::max(xmax, r.axis_value);
    ymin = std::min(ymin, r.F);
    ymax = std::max(ymax, r.F);
  }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1;
  if (!(ymin <= ymax)) ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-300) xmin -= 0.5, xmax += 0.5;
  const double ypad = std::max(0.05 * (ymax - ymin), 1e-3);
  ymin -= ypad;
  ymax += ypad;

  // Legend labels show only the knobs that differ between series.
  std::set<std::string> varying;
  if (series.size() > 1) {
    const auto& first = series.begin()->first;
    for (const auto& [key, pts] : series) {
      for (std::size_t i = 0; i < key.size(); ++i) {
        if (key[i].second != first[i].second) varying.insert(key[i].first);
      }
    }
  }

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << sx(xv) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\">" << format_double(xv, 4) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\">" << format_double(yv, 5) << "</text>\n";
    out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\""
        << sy(yv) << "\" y2=\"" << sy(yv) << "\" stroke=\"#ddd\"/>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 15
      << "\" text-anchor=\"middle\">" << (axis.empty() ? "axis" : axis)
      << "</text>\n";
  out << "<text x=\"20\" y=\"" << kTop + ph / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << kTop + ph / 2
      << ")\">F</text>\n";

  std::size_t index = 0;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const std::string& color = colors[index % colors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [xv, yv] : pts) out << sx(xv) << ',' << sy(yv) << ' ';
    out << "\"/>\n";
    for (const auto& [xv, yv] : pts) {
      out << "<circle cx=\"" << sx(xv) << "\" cy=\"" << sy(yv)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    std::string label;
    for (const auto& [name, value] : key) {
      if (!varying.count(name)) continue;
      if (!label.empty()) label += ", ";
      label += name + " = " + value;
    }
    if (label.empty()) label = "F";
    const double ly = kTop + 16 + 18 * static_cast<double>(index);
    out << "<line x1=\"" << kLeft + pw + 12 << "\" x2=\"" << kLeft + pw + 32
        << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4 << "\" stroke=\""
        << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << ly << "\">" << label
        << "</text>\n";
    ++index;
  }
  out << "</svg>\n";
  return out.str();
}

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Cat-qudit transfer between two cavities via a flux qutrit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::vector<std::string> args(argv + 1, argv + argc);

  // certify
  auto* certify = app.add_subcommand("certify", "cat-state overlap certificate");
  int cert_d = 3;
  double cert_s = 1.0;
  std::optional<double> cert_alpha, cert_phi;
  std::string cert_out;
  certify->add_option("--d", cert_d, "qudit dimension")->required();
  certify->add_option("--s", cert_s, "phase spacing factor (>= 1)");
  certify->add_option("--alpha", cert_alpha, "override |alpha|");
  certify->add_option("--phi", cert_phi, "override phase step");
  certify->add_option("--out", cert_out, "output directory");

  // derive
  auto* derive = app.add_subcommand("derive", "derived parameters and checks");
  ConfigOptions derive_opts;
  std::string derive_out;
  derive_opts.attach(*derive, false);
  derive->add_option("--out", derive_out, "output directory");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "one protocol run");
  ConfigOptions sim_opts;
  std::string sim_out;
  bool quiet = false;
  sim_opts.attach(*simulate, true);
  simulate->add_option("--out", sim_out, "output directory");
  simulate->add_flag("--quiet", quiet, "no progress lines");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "fidelity along one knob");
  ConfigOptions sweep_opts;
  std::string sweep_out, sweep_axis, sweep_points, series_axis, series_points;
  int jobs = 1;
  sweep_opts.attach(*sweep_cmd, true);
  sweep_cmd->add_option("--axis", sweep_axis, "T, kappa_inv, x, dtau_frac, gcr")
      ->required();
  sweep_cmd
      ->add_option("--points", sweep_points,
                   "a,b,c or lo..hi[:n] (T and kappa_inv in us)")
      ->required();
  sweep_cmd->add_option("--series-axis", series_axis,
                        "second knob, one curve per value");
  sweep_cmd->add_option("--series-points", series_points,
                        "values of the second knob");
  sweep_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep_out, "output directory");

  // plot
  auto* plot = app.add_subcommand("plot", "redraw an SVG from a result CSV");
  std::string plot_csv, plot_svg;
  plot->add_option("--csv", plot_csv, "result table")->required();
  plot->add_option("--svg", plot_svg, "output file (default: alongside)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (certify->parsed()) {
      const fs::path dir = output_dir(cert_out);
      RunManifest m = make_manifest("certify", args, nullptr, dir);
      m.replay = "catqudit";
      for (const auto& a : args) m.replay += " " + a;
      return cmd_certify(cert_d, cert_s, cert_alpha, cert_phi, dir, m, out);
    }

    if (derive->parsed()) {
      const ProtocolConfig cfg = derive_opts.build();
      const std::string report = derive_report(cfg.params, cfg.noise);
      const fs::path dir = output_dir(derive_out);
      fs::create_directories(dir);
      write_file(dir / "derived.txt", report);
      write_file(dir / "config_used.cfg", to_config_text(cfg));
      RunManifest m = make_manifest("derive", args, &derive_opts, dir);
      m.replay = "catqudit derive --config config_used.cfg";
      write_file(dir / "manifest.txt", to_text(m));
      out << report;
      return kExitOk;
    }

    if (simulate->parsed()) {
      const ProtocolConfig cfg = sim_opts.build();
      const fs::path dir = output_dir(sim_out);
      fs::create_directories(dir);
      write_file(dir / "config_used.cfg", to_config_text(cfg));
      RunManifest m = make_manifest("simulate", args, &sim_opts, dir);
      m.replay = "catqudit simulate --config config_used.cfg";
      write_file(dir / "manifest.txt", to_text(m));

      Heartbeat beat(err);
      Observers obs;
      if (!quiet) obs.progress = [&](double f) { beat(f); };
      FidelityResult r;
      try {
        r = run(cfg, obs);
      } catch (const std::exception& e) {
        r.config = cfg;
        r.ok = false;
        r.error = e.what();
        r.F = kNaN;
      }
      write_file(dir / "result.csv",
                 result_csv_header() + result_csv_row("none", kNaN, r));
      write_file(dir / "trajectory.csv", trajectory_csv(r.trajectory));
      write_file(dir / "diagnostics.txt", diagnostics_text(r));
      out << diagnostics_text(r);
      if (!r.ok) {
        err << "simulation failed: " << r.error << "\n";
        return kExitScience;
      }
      if (r.diagnostics.flagged) {
        err << "diagnostics flagged: " << r.diagnostics.message << "\n";
        return kExitScience;
      }
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      const ProtocolConfig base = sweep_opts.build();
      const SweepAxis axis = parse_sweep_axis(sweep_axis);
      const std::vector<double> points = parse_points(sweep_points);
      std::vector<double> series_values = {kNaN};
      std::optional<SweepAxis> second;
      if (!series_axis.empty()) {
        second = parse_sweep_axis(series_axis);
        if (*second == axis) {
          throw std::invalid_argument("--series-axis must differ from --axis");
        }
        if (series_points.empty()) {
          throw std::invalid_argument("--series-axis needs --series-points");
        }
        series_values = parse_points(series_points);
      } else if (!series_points.empty()) {
        throw std::invalid_argument("--series-points needs --series-axis");
      }

      const fs::path dir = output_dir(sweep_out);
      fs::create_directories(dir);
      write_file(dir / "config_used.cfg", to_config_text(base));
      RunManifest m = make_manifest("sweep", args, &sweep_opts, dir);
      m.replay = "catqudit sweep --config config_used.cfg --axis " + sweep_axis +
                 " --points " + sweep_points + " --jobs " + std::to_string(jobs);
      if (second) {
        m.replay += " --series-axis " + series_axis + " --series-points " +
                    series_points;
      }
      write_file(dir / "manifest.txt", to_text(m));

      std::string table = result_csv_header();
      bool any_failed = false;
      const std::size_t total = points.size() * series_values.size();
      std::size_t done = 0;
      for (double sv : series_values) {
        const ProtocolConfig cfg =
            second ? with_axis_value(base, *second, sv) : base;
        const auto results = sweep(
            cfg, axis, points, jobs, [&](std::size_t i, const FidelityResult& r) {
              ++done;
              err << "[" << done << "/" << total << "] " << sweep_axis << " = "
                  << format_double(points[i]) << " F = " << format_double(r.F, 6)
                  << (r.ok ? "" : " FAILED: " + r.error) << std::endl;
            });
        for (std::size_t i = 0; i < points.size(); ++i) {
          table += result_csv_row(to_string(axis), points[i], results[i]);
          any_failed = any_failed || !results[i].ok ||
                       results[i].diagnostics.flagged;
        }
      }
      write_file(dir / "sweep.csv", table);
      write_file(dir / "sweep.svg", render_svg(parse_result_csv(table)));
      out << table;
      return any_failed ? kExitScience : kExitOk;
    }

    if (plot->parsed()) {
      std::ifstream in(plot_csv);
      if (!in) throw std::invalid_argument("cannot open " + plot_csv);
      std::ostringstream text;
      text << in.rdbuf();
      const fs::path target =
          plot_svg.empty() ? fs::path(plot_csv).replace_extension(".svg")
                           : fs::path(plot_svg);
      write_file(target, render_svg(parse_result_csv(text.str())));
      out << "wrote " << target.string() << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitScience;
  }
  return kExitUsage;
}

}  // namespace catqudit
