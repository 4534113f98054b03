#include "ftc/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ftc {

using Json = nlohmann::ordered_json;

const char* kind_name(ValidationIssue::Kind kind)
{
  switch (kind) {
    case ValidationIssue::Kind::Parse:
      return "parse-error";
    case ValidationIssue::Kind::Schema:
      return "schema-error";
    case ValidationIssue::Kind::UnknownKey:
      return "unknown-key";
    case ValidationIssue::Kind::Range:
      return "range-error";
    case ValidationIssue::Kind::Assumption:
      return "assumption-violation";
    case ValidationIssue::Kind::Rank:
      return "rank-deficiency";
    case ValidationIssue::Kind::Override:
      return "bad-override";
    case ValidationIssue::Kind::Io:
      return "io-error";
  }
  return "error";
}

bool ValidationReport::io_failure() const
{
  for (const auto& i : issues) {
    if (i.kind == ValidationIssue::Kind::Io) {
      return true;
    }
  }
  return false;
}

std::string ValidationReport::format() const
{
  std::ostringstream out;
  for (const auto& i : issues) {
    out << file;
    if (i.line > 0) {
      out << ':' << i.line;
    }
    out << ": [" << kind_name(i.kind) << "] ";
    if (!i.path.empty()) {
      out << i.path << ": ";
    }
    out << i.message << '\n';
  }
  return out.str();
}

ScenarioError::ScenarioError(ValidationReport report)
    : ValidationError(report.issues.empty() ? std::string("invalid scenario")
                                            : report.format()),
      report_(std::move(report))
{
}

namespace {

std::vector<std::string> split_path(const std::string& path)
{
  std::vector<std::string> out;
  std::string cur;
  for (char ch : path) {
    if (ch == '.') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool is_index(const std::string& s)
{
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

/// Best-effort line of a dotted path inside the raw text: walks the keys in
/// order, and counts opening braces for array indices.
int locate_line(const std::string& text, const std::string& path)
{
  if (text.empty() || path.empty()) {
    return 0;
  }
  std::size_t pos = 0;
  for (const std::string& tok : split_path(path)) {
    if (is_index(tok)) {
      const std::size_t open = text.find('[', pos);
      if (open == std::string::npos) {
        return 0;
      }
      pos = open + 1;
      long n = std::stol(tok);
      int depth = 0;
      // Skip n top-level elements.
      for (std::size_t k = pos; k < text.size() && n > 0; ++k) {
        const char ch = text[k];
        if (ch == '{' || ch == '[') {
          ++depth;
        } else if (ch == '}' || ch == ']') {
          --depth;
        } else if (ch == ',' && depth == 0) {
          --n;
          pos = k + 1;
        }
      }
      continue;
    }
    const std::size_t hit = text.find('"' + tok + '"', pos);
    if (hit == std::string::npos) {
      return 0;
    }
    pos = hit;
  }
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

int line_of_offset(const std::string& text, std::size_t byte)
{
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

Json vec_json(const Eigen::VectorXd& v)
{
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v(i));
  }
  return a;
}

Json mat_json(const Mat3& m)
{
  Json a = Json::array();
  for (int r = 0; r < 3; ++r) {
    a.push_back(vec_json(m.row(r).transpose()));
  }
  return a;
}

const char* mode_name(Segment::Mode m)
{
  switch (m) {
    case Segment::Mode::Hold:
      return "hold";
    case Segment::Mode::Straight:
      return "straight";
    case Segment::Mode::Turn:
      return "turn";
  }
  return "hold";
}

Json default_document()
{
  return Json::parse(scenario_to_json(Scenario{}));
}

/// Collects issues while converting a document into a Scenario.
class Reader {
 public:
  Reader(const std::string& text, std::vector<ValidationIssue>& issues)
      : text_(text), issues_(issues)
  {
  }

  void issue(ValidationIssue::Kind kind, const std::string& path, const std::string& msg)
  {
    issues_.push_back({kind, path, overridden_.count(path) ? 0 : locate_line(text_, path), msg});
  }

  void mark_overridden(const std::string& path) { overridden_.insert(path); }

  double number(const Json& j, const std::string& path)
  {
    if (!j.is_number()) {
      issue(ValidationIssue::Kind::Schema, path, "expected a number");
      return 0.0;
    }
    return j.get<double>();
  }

  int integer(const Json& j, const std::string& path)
  {
    if (!j.is_number_integer()) {
      issue(ValidationIssue::Kind::Schema, path, "expected an integer");
      return 0;
    }
    return j.get<int>();
  }

  bool boolean(const Json& j, const std::string& path)
  {
    if (!j.is_boolean()) {
      issue(ValidationIssue::Kind::Schema, path, "expected true or false");
      return false;
    }
    return j.get<bool>();
  }

  std::string string(const Json& j, const std::string& path)
  {
    if (!j.is_string()) {
      issue(ValidationIssue::Kind::Schema, path, "expected a string");
      return {};
    }
    return j.get<std::string>();
  }

  Eigen::VectorXd vector(const Json& j, const std::string& path, int n)
  {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
      issue(ValidationIssue::Kind::Schema, path,
            "expected an array of " + std::to_string(n) + " numbers");
      return v;
    }
    for (int i = 0; i < n; ++i) {
      v(i) = number(j[static_cast<std::size_t>(i)], path + "." + std::to_string(i));
    }
    return v;
  }

  /// Scalar broadcast or 4-array.
  Vec4 per_thruster(const Json& j, const std::string& path)
  {
    if (j.is_number()) {
      return Vec4::Constant(j.get<double>());
    }
    return vector(j, path, 4);
  }

  /// 3-array diagonal or 3x3 nested array.
  Mat3 matrix(const Json& j, const std::string& path)
  {
    if (j.is_array() && j.size() == 3 && j[0].is_array()) {
      Mat3 m;
      for (int r = 0; r < 3; ++r) {
        m.row(r) = vector(j[static_cast<std::size_t>(r)], path + "." + std::to_string(r), 3)
                       .transpose();
      }
      return m;
    }
    if (j.is_array() && j.size() == 3) {
      return Vec3(vector(j, path, 3)).asDiagonal();
    }
    issue(ValidationIssue::Kind::Schema, path,
          "expected a 3-element diagonal or a 3x3 nested array");
    return Mat3::Identity();
  }

  /// Reports keys of `obj` that are absent from `allowed`.
  void known_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& path)
  {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) {
        std::string list;
        for (const auto& a : allowed) {
          list += (list.empty() ? "" : ", ") + a;
        }
        issue(ValidationIssue::Kind::UnknownKey, path.empty() ? it.key() : path + "." + it.key(),
              "unknown key (expected one of: " + list + ")");
      }
    }
  }

  bool object(const Json& j, const std::string& path)
  {
    if (!j.is_object()) {
      issue(ValidationIssue::Kind::Schema, path, "expected an object");
      return false;
    }
    return true;
  }

 private:
  const std::string& text_;
  std::vector<ValidationIssue>& issues_;
  std::set<std::string> overridden_;
};

std::set<std::string> keys_of(const Json& obj)
{
  std::set<std::string> out;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    out.insert(it.key());
  }
  return out;
}

/// Collects dotted paths of every leaf (non-object) value.
void leaf_paths(const Json& j, const std::string& prefix, std::vector<std::string>& out)
{
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      leaf_paths(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  out.push_back(prefix);
}

Json::json_pointer pointer_of(const std::string& dotted)
{
  std::string p;
  for (const auto& tok : split_path(dotted)) {
    p += "/" + tok;
  }
  return Json::json_pointer(p);
}

/// Applies "key=value" overrides. Returns the resolved dotted paths.
std::vector<std::string> apply_overrides(Json& doc, const std::vector<std::string>& overrides,
                                         std::vector<ValidationIssue>& issues)
{
  std::vector<std::string> resolved;
  // Schema view: defaults with the document layered on top.
  Json schema = default_document();
  schema.merge_patch(doc);
  std::vector<std::string> leaves;
  leaf_paths(schema, "", leaves);

  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      issues.push_back({ValidationIssue::Kind::Override, "", 0,
                        "override '" + ov + "' is not of the form key=value"});
      continue;
    }
    const std::string key = ov.substr(0, eq);
    const std::string raw = ov.substr(eq + 1);

    std::string path;
    if (key.find('.') != std::string::npos) {
      bool exists = false;
      try {
        exists = schema.contains(pointer_of(key));
      } catch (const std::exception&) {
        exists = false;
      }
      if (exists) {
        path = key;
      }
    } else {
      std::vector<std::string> hits;
      for (const auto& leaf : leaves) {
        const std::size_t dot = leaf.rfind('.');
        if ((dot == std::string::npos ? leaf : leaf.substr(dot + 1)) == key) {
          hits.push_back(leaf);
        }
      }
      if (hits.size() > 1) {
        std::string list;
        for (const auto& h : hits) {
          list += (list.empty() ? "" : ", ") + h;
        }
        issues.push_back({ValidationIssue::Kind::Override, key, 0,
                          "override key is ambiguous; use one of: " + list});
        continue;
      }
      if (hits.size() == 1) {
        path = hits.front();
      }
    }
    if (path.empty()) {
      issues.push_back({ValidationIssue::Kind::Override, key, 0,
                        "override key does not name an existing configuration key"});
      continue;
    }

    Json value;
    try {
      value = Json::parse(raw);
    } catch (const Json::parse_error&) {
      value = raw;
    }
    try {
      doc[pointer_of(path)] = value;
    } catch (const std::exception& e) {
      issues.push_back({ValidationIssue::Kind::Override, path, 0,
                        std::string("cannot apply override: ") + e.what()});
      continue;
    }
    resolved.push_back(path);
  }
  return resolved;
}

bool read_file(const std::filesystem::path& path, std::string& out)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return !in.bad();
}

template <class F>
void guarded(Reader& rd, ValidationIssue::Kind kind, const std::string& path, F&& fn)
{
  try {
    fn();
  } catch (const std::exception& e) {
    rd.issue(kind, path, e.what());
  }
}

void read_vehicle(Reader& rd, const Json& j, VehicleParams& vp)
{
  if (!rd.object(j, "vehicle")) {
    return;
  }
  rd.known_keys(j, {"name", "inertia", "linear_damping", "quadratic_damping", "control_gain"},
                "vehicle");
  if (j.contains("inertia")) {
    vp.inertia = rd.matrix(j["inertia"], "vehicle.inertia");
  }
  if (j.contains("linear_damping")) {
    vp.lin_damping = rd.matrix(j["linear_damping"], "vehicle.linear_damping");
  }
  if (j.contains("quadratic_damping")) {
    vp.quad_damping = rd.vector(j["quadratic_damping"], "vehicle.quadratic_damping", 3);
  }
  vp.control_gain = vp.inertia.inverse();
  if (j.contains("control_gain")) {
    const Json& b = j["control_gain"];
    if (b.is_string()) {
      if (b.get<std::string>() != "inverse_inertia") {
        rd.issue(ValidationIssue::Kind::Schema, "vehicle.control_gain",
                 "expected \"inverse_inertia\" or a matrix");
      }
    } else {
      vp.control_gain = rd.matrix(b, "vehicle.control_gain");
    }
  }
  guarded(rd, ValidationIssue::Kind::Range, "vehicle", [&] { vp.validate(); });
}

void read_trajectory(Reader& rd, const Json& j, TrajectoryPlan& plan)
{
  if (j.is_string()) {
    if (j.get<std::string>() != "default") {
      rd.issue(ValidationIssue::Kind::Schema, "trajectory",
               "expected \"default\" or an object with initial_pose and segments");
    }
    return;
  }
  if (!rd.object(j, "trajectory")) {
    return;
  }
  rd.known_keys(j, {"initial_pose", "segments"}, "trajectory");
  Vec3 pose = plan.initial_pose();
  if (j.contains("initial_pose")) {
    pose = rd.vector(j["initial_pose"], "trajectory.initial_pose", 3);
  }
  std::vector<Segment> segs = plan.segments();
  if (j.contains("segments")) {
    const Json& arr = j["segments"];
    if (!arr.is_array() || arr.empty()) {
      rd.issue(ValidationIssue::Kind::Schema, "trajectory.segments",
               "expected a non-empty array of segments");
      return;
    }
    segs.clear();
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string p = "trajectory.segments." + std::to_string(k);
      const Json& s = arr[k];
      if (!rd.object(s, p)) {
        continue;
      }
      rd.known_keys(s, {"mode", "duration", "speed", "heading", "yaw_rate"}, p);
      Segment seg;
      const std::string mode = s.contains("mode") ? rd.string(s["mode"], p + ".mode") : "";
      if (mode == "hold") {
        seg.mode = Segment::Mode::Hold;
      } else if (mode == "straight") {
        seg.mode = Segment::Mode::Straight;
      } else if (mode == "turn") {
        seg.mode = Segment::Mode::Turn;
      } else {
        rd.issue(ValidationIssue::Kind::Schema, p + ".mode",
                 "mode must be \"hold\", \"straight\" or \"turn\"");
      }
      if (!s.contains("duration")) {
        rd.issue(ValidationIssue::Kind::Schema, p + ".duration", "missing required key");
      } else {
        seg.duration = rd.number(s["duration"], p + ".duration");
      }
      if (s.contains("speed")) {
        seg.speed = rd.number(s["speed"], p + ".speed");
      }
      if (s.contains("heading")) {
        seg.heading = rd.number(s["heading"], p + ".heading");
        seg.has_heading = true;
      }
      if (s.contains("yaw_rate")) {
        seg.yaw_rate = rd.number(s["yaw_rate"], p + ".yaw_rate");
      }
      if (!(seg.duration > 0.0)) {
        rd.issue(ValidationIssue::Kind::Range, p + ".duration", "duration must be > 0");
        seg.duration = 1.0;
      }
      segs.push_back(seg);
    }
  }
  guarded(rd, ValidationIssue::Kind::Range, "trajectory", [&] { plan = TrajectoryPlan(pose, segs); });
}

void read_faults(Reader& rd, const Json& j, std::vector<FaultEvent>& events)
{
  if (!j.is_array()) {
    rd.issue(ValidationIssue::Kind::Schema, "faults", "expected an array of fault events");
    return;
  }
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = "faults." + std::to_string(k);
    const Json& e = j[k];
    if (!rd.object(e, p)) {
      continue;
    }
    rd.known_keys(e, {"time", "thruster", "weight"}, p);
    FaultEvent ev;
    for (const char* req : {"time", "thruster", "weight"}) {
      if (!e.contains(req)) {
        rd.issue(ValidationIssue::Kind::Schema, p + "." + req, "missing required key");
      }
    }
    if (e.contains("time")) {
      ev.time = rd.number(e["time"], p + ".time");
    }
    if (e.contains("thruster")) {
      ev.thruster = rd.integer(e["thruster"], p + ".thruster");
    }
    if (e.contains("weight")) {
      ev.weight = rd.number(e["weight"], p + ".weight");
    }
    events.push_back(ev);
  }
}

Scenario read_document(Reader& rd, const Json& doc)
{
  Scenario sc;
  const Json defaults = default_document();
  rd.known_keys(doc, keys_of(defaults), "");

  if (doc.contains("name")) {
    sc.name = rd.string(doc["name"], "name");
  }
  if (doc.contains("description")) {
    sc.description = rd.string(doc["description"], "description");
  }
  if (doc.contains("vehicle")) {
    read_vehicle(rd, doc["vehicle"], sc.vehicle);
  }

  double alpha = sc.geometry.alpha;
  double arm = sc.geometry.l;
  if (doc.contains("thrusters") && rd.object(doc["thrusters"], "thrusters")) {
    const Json& t = doc["thrusters"];
    rd.known_keys(t, keys_of(defaults["thrusters"]), "thrusters");
    if (t.contains("alpha")) {
      alpha = rd.number(t["alpha"], "thrusters.alpha");
    }
    if (t.contains("arm")) {
      arm = rd.number(t["arm"], "thrusters.arm");
    }
    if (t.contains("gain")) {
      sc.K = rd.per_thruster(t["gain"], "thrusters.gain");
    }
    if (t.contains("u_max")) {
      sc.u_max = rd.number(t["u_max"], "thrusters.u_max");
    }
  }
  guarded(rd, ValidationIssue::Kind::Rank, "thrusters",
          [&] { sc.geometry = ThrusterGeometry::make(alpha, arm); });
  guarded(rd, ValidationIssue::Kind::Rank, "thrusters",
          [&] { (void)pseudo_inverse(config_matrix(alpha, arm)); });

  if (doc.contains("controller") && rd.object(doc["controller"], "controller")) {
    const Json& c = doc["controller"];
    rd.known_keys(c, keys_of(defaults["controller"]), "controller");
    Vec3 g1 = sc.gains.gamma1, g2 = sc.gains.gamma2, a1 = sc.gains.a1, a2 = sc.gains.a2;
    if (c.contains("gamma1")) {
      g1 = rd.vector(c["gamma1"], "controller.gamma1", 3);
    }
    if (c.contains("gamma2")) {
      g2 = rd.vector(c["gamma2"], "controller.gamma2", 3);
    }
    if (c.contains("a1")) {
      a1 = rd.vector(c["a1"], "controller.a1", 3);
    }
    if (c.contains("a2")) {
      a2 = rd.vector(c["a2"], "controller.a2", 3);
    }
    guarded(rd, ValidationIssue::Kind::Range, "controller",
            [&] { sc.gains = ControllerGains::make(g1, g2, a1, a2); });
  }

  if (doc.contains("fdi") && rd.object(doc["fdi"], "fdi")) {
    const Json& f = doc["fdi"];
    rd.known_keys(f, keys_of(defaults["fdi"]), "fdi");
    FdiConfig& c = sc.fdi;
    const std::pair<const char*, double*> reals[] = {
        {"c1", &c.c1},           {"c2", &c.c2},         {"f_smooth", &c.f_smooth},
        {"hold_window", &c.hold_window}, {"hold_widen", &c.hold_widen},
        {"delta1", &c.delta1},   {"delta2", &c.delta2}, {"T_s", &c.T_s},
        {"delta_w", &c.delta_w}, {"eps_u", &c.eps_u},   {"eps_g", &c.eps_g},
        {"w_min", &c.w_min},     {"arm_time", &c.arm_time}};
    for (const auto& [key, dst] : reals) {
      if (f.contains(key)) {
        *dst = rd.number(f[key], std::string("fdi.") + key);
      }
    }
    if (f.contains("n_consec")) {
      c.n_consec = rd.integer(f["n_consec"], "fdi.n_consec");
    }
    guarded(rd, ValidationIssue::Kind::Range, "fdi", [&] { c.validate(); });
  }

  if (doc.contains("allocation") && rd.object(doc["allocation"], "allocation")) {
    const Json& a = doc["allocation"];
    rd.known_keys(a, keys_of(defaults["allocation"]), "allocation");
    if (a.contains("drop_failed")) {
      sc.allocation.drop_failed = rd.boolean(a["drop_failed"], "allocation.drop_failed");
    }
  }

  if (doc.contains("trajectory")) {
    read_trajectory(rd, doc["trajectory"], sc.plan);
  }

  if (doc.contains("sim") && rd.object(doc["sim"], "sim")) {
    const Json& s = doc["sim"];
    rd.known_keys(s, keys_of(defaults["sim"]), "sim");
    SimConfig& c = sc.sim;
    const std::pair<const char*, double*> reals[] = {
        {"dt", &c.dt},
        {"duration", &c.duration},
        {"reconverge_window", &c.reconverge_window},
        {"convergence_delta", &c.convergence_delta},
        {"divergence_limit", &c.divergence_limit}};
    for (const auto& [key, dst] : reals) {
      if (s.contains(key)) {
        *dst = rd.number(s[key], std::string("sim.") + key);
      }
    }
    if (s.contains("decimation")) {
      c.decimation = rd.integer(s["decimation"], "sim.decimation");
    }
    if (s.contains("initial_state")) {
      const Eigen::VectorXd x = rd.vector(s["initial_state"], "sim.initial_state", 6);
      c.initial_state = VehicleState{x(0), x(1), x(2), x(3), x(4), x(5)};
    }
    for (const auto& [key, dst] : reals) {
      if (!(*dst > 0.0)) {
        rd.issue(ValidationIssue::Kind::Range, std::string("sim.") + key, "must be > 0");
      }
    }
    if (c.decimation < 1) {
      rd.issue(ValidationIssue::Kind::Range, "sim.decimation", "must be >= 1");
    }
    if (c.dt > 0.0 && sc.fdi.T_s < c.dt) {
      rd.issue(ValidationIssue::Kind::Range, "fdi.T_s", "must be at least one step (sim.dt)");
    }
  }

  std::vector<FaultEvent> events;
  if (doc.contains("faults")) {
    read_faults(rd, doc["faults"], events);
  }
  sc.faults = FaultSchedule(events);
  const auto problems = sc.faults.check(sc.fdi.arm_time);
  for (const std::string& msg : problems) {
    // Messages are prefixed "faults[k]: ".
    std::string path = "faults";
    std::string text = msg;
    const std::size_t close = msg.find("]: ");
    if (msg.rfind("faults[", 0) == 0 && close != std::string::npos) {
      path = "faults." + msg.substr(7, close - 7);
      text = msg.substr(close + 3);
    }
    const bool range = text.find("Assumption") == std::string::npos;
    rd.issue(range ? ValidationIssue::Kind::Range : ValidationIssue::Kind::Assumption, path, text);
  }
  for (const FaultEvent& e : events) {
    if (e.time >= sc.sim.duration) {
      rd.issue(ValidationIssue::Kind::Range, "faults",
               "fault at t=" + std::to_string(e.time) + " s lies beyond sim.duration");
      break;
    }
  }
  return sc;
}

}  // namespace

LoadResult check_scenario_text(const std::string& text, const std::filesystem::path& base_dir,
                               const std::vector<std::string>& overrides, const std::string& label)
{
  LoadResult res;
  res.report.file = label;
  auto& issues = res.report.issues;

  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    issues.push_back({ValidationIssue::Kind::Parse, "", line_of_offset(text, e.byte), e.what()});
    return res;
  }
  if (!doc.is_object()) {
    issues.push_back({ValidationIssue::Kind::Schema, "", 1, "top level must be a JSON object"});
    return res;
  }

  // Inline a vehicle referenced by file name.
  if (doc.contains("vehicle") && doc["vehicle"].is_string()) {
    const std::filesystem::path vpath = base_dir / doc["vehicle"].get<std::string>();
    std::string vtext;
    if (!read_file(vpath, vtext)) {
      issues.push_back({ValidationIssue::Kind::Io, "vehicle", locate_line(text, "vehicle"),
                        "cannot read vehicle file " + vpath.string()});
      return res;
    }
    try {
      doc["vehicle"] = Json::parse(vtext);
    } catch (const Json::parse_error& e) {
      issues.push_back({ValidationIssue::Kind::Parse, "vehicle", 0,
                        vpath.string() + ":" + std::to_string(line_of_offset(vtext, e.byte)) +
                            ": " + e.what()});
      return res;
    }
  }

  const std::vector<std::string> applied = apply_overrides(doc, overrides, issues);

  Reader rd(text, issues);
  for (const auto& p : applied) {
    rd.mark_overridden(p);
  }
  res.scenario = read_document(rd, doc);
  res.scenario.overrides = overrides;
  return res;
}

LoadResult check_scenario_file(const std::filesystem::path& path,
                               const std::vector<std::string>& overrides)
{
  std::string text;
  if (!read_file(path, text)) {
    LoadResult res;
    res.report.file = path.string();
    res.report.issues.push_back(
        {ValidationIssue::Kind::Io, "", 0, "cannot read scenario file " + path.string()});
    return res;
  }
  return check_scenario_text(text, path.parent_path(), overrides, path.string());
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
  LoadResult res = check_scenario_file(path, overrides);
  if (!res.report.ok()) {
    throw ScenarioError(std::move(res.report));
  }
  return std::move(res.scenario);
}

std::string scenario_to_json(const Scenario& sc, int indent)
{
  Json j;
  j["name"] = sc.name;
  j["description"] = sc.description;

  Json v;
  v["inertia"] = mat_json(sc.vehicle.inertia);
  v["linear_damping"] = mat_json(sc.vehicle.lin_damping);
  v["quadratic_damping"] = vec_json(sc.vehicle.quad_damping);
  if (sc.vehicle.control_gain.isApprox(sc.vehicle.inertia.inverse(), 1e-12)) {
    v["control_gain"] = "inverse_inertia";
  } else {
    v["control_gain"] = mat_json(sc.vehicle.control_gain);
  }
  j["vehicle"] = v;

  j["thrusters"] = {{"alpha", sc.geometry.alpha},
                    {"arm", sc.geometry.l},
                    {"gain", vec_json(sc.K)},
                    {"u_max", sc.u_max}};
  j["controller"] = {{"gamma1", vec_json(sc.gains.gamma1)},
                     {"gamma2", vec_json(sc.gains.gamma2)},
                     {"a1", vec_json(sc.gains.a1)},
                     {"a2", vec_json(sc.gains.a2)}};
  const FdiConfig& f = sc.fdi;
  j["fdi"] = {{"c1", f.c1},
              {"c2", f.c2},
              {"f_smooth", f.f_smooth},
              {"hold_window", f.hold_window},
              {"hold_widen", f.hold_widen},
              {"delta1", f.delta1},
              {"delta2", f.delta2},
              {"T_s", f.T_s},
              {"delta_w", f.delta_w},
              {"eps_u", f.eps_u},
              {"eps_g", f.eps_g},
              {"w_min", f.w_min},
              {"n_consec", f.n_consec},
              {"arm_time", f.arm_time}};
  j["allocation"] = {{"drop_failed", sc.allocation.drop_failed}};

  Json segs = Json::array();
  for (const Segment& s : sc.plan.segments()) {
    Json o;
    o["mode"] = mode_name(s.mode);
    o["duration"] = s.duration;
    if (s.mode != Segment::Mode::Hold) {
      o["speed"] = s.speed;
    }
    if (s.mode == Segment::Mode::Straight && s.has_heading) {
      o["heading"] = s.heading;
    }
    if (s.mode == Segment::Mode::Turn) {
      o["yaw_rate"] = s.yaw_rate;
    }
    segs.push_back(o);
  }
  j["trajectory"] = {{"initial_pose", vec_json(sc.plan.initial_pose())}, {"segments", segs}};

  Json faults = Json::array();
  for (const FaultEvent& e : sc.faults.events()) {
    faults.push_back({{"time", e.time}, {"thruster", e.thruster}, {"weight", e.weight}});
  }
  j["faults"] = faults;

  const SimConfig& s = sc.sim;
  const VehicleState& x0 = s.initial_state;
  j["sim"] = {{"dt", s.dt},
              {"duration", s.duration},
              {"decimation", s.decimation},
              {"initial_state", {x0.x, x0.y, x0.psi, x0.u, x0.v, x0.r}},
              {"reconverge_window", s.reconverge_window},
              {"convergence_delta", s.convergence_delta},
              {"divergence_limit", s.divergence_limit}};
  return j.dump(indent);
}

}  // namespace ftc
