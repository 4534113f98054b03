#include "ftc/record_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace ftc {

namespace {

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string vec_text(const Vec4& v)
{
  std::string s = "[";
  for (int i = 0; i < 4; ++i) {
    s += (i ? ", " : "") + num(v(i));
  }
  return s + "]";
}

std::string opt_num(const std::optional<double>& v)
{
  return v ? num(*v) : std::string("none");
}

}  // namespace

const std::vector<std::string>& csv_columns()
{
  static const std::vector<std::string> cols = {
      "t",       "x",       "y",       "psi",       "u",      "v",      "r",      "x_d",
      "y_d",     "psi_d",   "e_x",     "e_y",       "e_psi",  "residual", "threshold",
      "b_trig",  "fault_num", "W1",    "W2",        "W3",     "W4",     "W_hat1", "W_hat2",
      "W_hat3",  "W_hat4",  "u1",      "u2",        "u3",     "u4",     "tau_c_u", "tau_c_v",
      "tau_c_r", "tau_u",   "tau_v",   "tau_r",     "V2",     "saturated"};
  return cols;
}

void CsvWriter::write_header()
{
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out_ << (i ? "," : "") << cols[i];
  }
  out_ << '\n';
}

std::vector<double> row_values(const SimRow& r)
{
  std::vector<double> v;
  v.reserve(csv_columns().size());
  v.insert(v.end(), {r.t, r.state.x, r.state.y, r.state.psi, r.state.u, r.state.v, r.state.r});
  v.insert(v.end(), r.eta_d.begin(), r.eta_d.end());
  v.insert(v.end(), r.e_eta.begin(), r.e_eta.end());
  v.insert(v.end(), {r.residual, r.threshold, r.b_trig ? 1.0 : 0.0,
                     static_cast<double>(r.fault_num)});
  v.insert(v.end(), r.W.begin(), r.W.end());
  v.insert(v.end(), r.W_hat.begin(), r.W_hat.end());
  v.insert(v.end(), r.u_cmd.begin(), r.u_cmd.end());
  v.insert(v.end(), {r.tau_c.tau_u, r.tau_c.tau_v, r.tau_c.tau_r, r.tau.tau_u, r.tau.tau_v,
                     r.tau.tau_r, r.V2, r.saturated ? 1.0 : 0.0});
  return v;
}

void CsvWriter::write(const SimRow& r)
{
  std::string line;
  line.reserve(512);
  for (double v : row_values(r)) {
    if (!line.empty()) {
      line += ',';
    }
    line += num(v);
  }
  line += '\n';
  out_ << line;
}

void CsvWriter::mark_truncated(double t, const std::string& reason)
{
  out_ << "# TRUNCATED at t=" << num(t) << ": " << reason << '\n';
  out_.flush();
}

std::string fault_verdict(const FaultOutcome& o, double tolerance)
{
  if (!o.detection_time && !o.identified) {
    return "undetected";
  }
  if (!o.identified) {
    return "unidentified";
  }
  if (*o.identified != o.event.thruster) {
    return "misidentified";
  }
  if (!o.reconverged) {
    return "not-reconverged";
  }
  if (o.estimate_error > tolerance + 1e-9) {
    return "estimate-off";
  }
  return "ok";
}

std::string summary_text(const RunSummary& s, const Scenario& sc, const SummaryContext& ctx)
{
  const double tol = 2.0 * sc.fdi.delta_w;
  std::ostringstream o;
  o << "scenario: " << s.name << '\n';
  o << "status: " << ctx.status << '\n';
  if (!ctx.abort_reason.empty()) {
    o << "abort_reason: " << ctx.abort_reason << '\n';
  }
  o << "dt: " << num(s.dt) << '\n';
  o << "duration: " << num(s.duration) << '\n';
  o << "steps: " << s.steps << '\n';
  o << "wall_seconds: " << num(s.wall_seconds) << '\n';
  o << "convergence_time: " << opt_num(s.convergence_time) << '\n';
  o << "max_residual: " << num(s.max_residual) << " at t=" << num(s.max_residual_time) << '\n';
  o << "threshold: " << num(sc.fdi.c2 + sc.fdi.f_smooth) << '\n';
  o << "saturation_steps: " << s.saturation_steps << '\n';
  o << "false_triggers: " << s.false_triggers << '\n';
  o << "premature_identifications: " << s.premature_identifications << '\n';

  o << "detections: " << s.detections.size() << '\n';
  for (const auto& [t, r] : s.detections) {
    o << "  - t=" << num(t) << " residual=" << num(r) << '\n';
  }
  o << "identifications: " << s.identifications.size() << '\n';
  for (const auto& [t, i] : s.identifications) {
    o << "  - t=" << num(t) << " thruster=" << i << '\n';
  }

  o << "faults: " << s.faults.size() << '\n';
  for (const FaultOutcome& f : s.faults) {
    o << "  - time: " << num(f.event.time) << '\n';
    o << "    thruster: " << f.event.thruster << '\n';
    o << "    true_weight: " << num(f.event.weight) << '\n';
    o << "    detection_latency: "
      << (f.detection_time ? num(*f.detection_time - f.event.time) : std::string("none")) << '\n';
    o << "    identified: " << (f.identified ? std::to_string(*f.identified) : "none") << '\n';
    o << "    reconverge_time: " << opt_num(f.reconverge_time) << '\n';
    o << "    estimate: " << num(f.w_hat_at_end) << '\n';
    o << "    estimate_error: " << num(f.estimate_error) << '\n';
    o << "    verdict: " << fault_verdict(f, tol) << '\n';
  }
  o << "final_W: " << vec_text(s.final_w) << '\n';
  o << "final_W_hat: " << vec_text(s.final_w_hat) << '\n';
  o << "weight_error: " << vec_text((s.final_w_hat - s.final_w).cwiseAbs()) << '\n';
  o << "reconfiguration: "
    << (s.reconfiguration_failures == 0
            ? std::string("ok")
            : "FAILED (" + std::to_string(s.reconfiguration_failures) + " of " +
                  std::to_string(s.faults.size()) + " faults)")
    << '\n';

  o << "provenance:\n";
  o << "  source: " << (ctx.source.empty() ? "-" : ctx.source) << '\n';
  if (!ctx.csv_file.empty()) {
    o << "  csv: " << ctx.csv_file << '\n';
  }
  o << "  T_s: " << num(sc.fdi.T_s) << '\n';
  o << "  delta_w: " << num(sc.fdi.delta_w) << '\n';
  o << "  decimation: " << sc.sim.decimation << '\n';
  o << "  overrides:";
  if (s.overrides.empty()) {
    o << " []\n";
  } else {
    o << '\n';
    for (const auto& ov : s.overrides) {
      o << "    - " << ov << '\n';
    }
  }
  return o.str();
}

std::string summary_json(const RunSummary& s, const Scenario& sc, const SummaryContext& ctx)
{
  using Json = nlohmann::ordered_json;
  const double tol = 2.0 * sc.fdi.delta_w;
  auto vec = [](const Vec4& v) { return Json::array({v(0), v(1), v(2), v(3)}); };
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };

  Json j;
  j["scenario"] = s.name;
  j["status"] = ctx.status;
  if (!ctx.abort_reason.empty()) {
    j["abort_reason"] = ctx.abort_reason;
  }
  j["dt"] = s.dt;
  j["duration"] = s.duration;
  j["steps"] = s.steps;
  j["wall_seconds"] = s.wall_seconds;
  j["convergence_time"] = opt(s.convergence_time);
  j["max_residual"] = s.max_residual;
  j["max_residual_time"] = s.max_residual_time;
  j["threshold"] = sc.fdi.c2 + sc.fdi.f_smooth;
  j["saturation_steps"] = s.saturation_steps;
  j["false_triggers"] = s.false_triggers;
  j["premature_identifications"] = s.premature_identifications;
  Json det = Json::array();
  for (const auto& [t, r] : s.detections) {
    det.push_back({{"time", t}, {"residual", r}});
  }
  j["detections"] = det;
  Json ids = Json::array();
  for (const auto& [t, i] : s.identifications) {
    ids.push_back({{"time", t}, {"thruster", i}});
  }
  j["identifications"] = ids;
  Json faults = Json::array();
  for (const FaultOutcome& f : s.faults) {
    Json fo;
    fo["time"] = f.event.time;
    fo["thruster"] = f.event.thruster;
    fo["true_weight"] = f.event.weight;
    fo["detection_time"] = opt(f.detection_time);
    fo["identified"] = f.identified ? Json(*f.identified) : Json(nullptr);
    fo["identification_time"] = opt(f.identification_time);
    fo["reconverged"] = f.reconverged;
    fo["reconverge_time"] = opt(f.reconverge_time);
    fo["estimate"] = f.w_hat_at_end;
    fo["estimate_error"] = f.estimate_error;
    fo["reconfiguration_ok"] = f.reconfiguration_ok;
    fo["verdict"] = fault_verdict(f, tol);
    faults.push_back(fo);
  }
  j["faults"] = faults;
  j["final_W"] = vec(s.final_w);
  j["final_W_hat"] = vec(s.final_w_hat);
  j["reconfiguration_failures"] = s.reconfiguration_failures;
  j["provenance"] = {{"source", ctx.source},
                     {"csv", ctx.csv_file},
                     {"T_s", sc.fdi.T_s},
                     {"delta_w", sc.fdi.delta_w},
                     {"decimation", sc.sim.decimation},
                     {"overrides", s.overrides}};
  return j.dump(2);
}

}  // namespace ftc
