#include "semiflow/io.hpp"

#include <fstream>
#include <sstream>

#include "semiflow/errors.hpp"

namespace semiflow::io {

namespace {

Point point_from(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of numbers");
  Point p;
  p.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(std::string(what) + ": expected numbers");
    p.push_back(v.get<double>());
  }
  return p;
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

double number(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number()) throw ParseError(std::string("field \"") + name + "\" must be a number");
  return v.get<double>();
}

template <typename Fn>
auto wrap_domain(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

Json to_json(const Trajectory& phi) {
  Json segments = Json::array();
  Json right_limits = Json::array();
  const auto& segs = phi.segments();
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const Segment& s = segs[j];
    if (s.kind == SegmentKind::kConstant) {
      segments.push_back({{"kind", "const"}, {"v", s.start}});
    } else {
      segments.push_back({{"kind", "linear"}, {"v0", s.start}, {"v1", s.end}});
    }
    right_limits.push_back(j + 1 < segs.size() ? segs[j + 1].start : phi.tail());
  }
  Json out;
  out["dim"] = phi.dim();
  out["initial_value"] = phi.initial_value();
  out["right_limit_0"] = segs.empty() ? phi.tail() : segs.front().start;
  out["breakpoints"] = phi.breakpoints();
  out["segments"] = std::move(segments);
  out["right_limits"] = std::move(right_limits);
  out["tail"] = phi.tail();
  return out;
}

Trajectory trajectory_from_json(const Json& j) {
  const Json& dim_field = field(j, "dim");
  if (!dim_field.is_number_unsigned() || dim_field.get<std::size_t>() == 0) {
    throw ParseError("\"dim\" must be a positive integer");
  }
  const std::size_t dim = dim_field.get<std::size_t>();
  Point initial = point_from(field(j, "initial_value"), "initial_value");
  Point right0 = point_from(field(j, "right_limit_0"), "right_limit_0");
  Point tail = point_from(field(j, "tail"), "tail");
  std::vector<double> breakpoints = point_from(field(j, "breakpoints"), "breakpoints");
  const Json& segs_json = field(j, "segments");
  const Json& rl_json = field(j, "right_limits");
  if (!segs_json.is_array() || !rl_json.is_array()) {
    throw ParseError("\"segments\" and \"right_limits\" must be arrays");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) throw ParseError("breakpoints must be strictly increasing");
  }
  std::vector<Segment> segments;
  for (const auto& s : segs_json) {
    const Json& kind = field(s, "kind");
    if (kind == "const") {
      segments.push_back(Segment::constant(point_from(field(s, "v"), "v")));
    } else if (kind == "linear") {
      segments.push_back(Segment::linear(point_from(field(s, "v0"), "v0"), point_from(field(s, "v1"), "v1")));
    } else {
      throw ParseError("segment kind must be \"const\" or \"linear\"");
    }
  }
  Trajectory phi = wrap_domain([&] {
    return Trajectory(std::move(initial), std::move(breakpoints), std::move(segments), std::move(tail));
  });
  if (phi.dim() != dim) throw ParseError("\"dim\" disagrees with the stored values");
  if (rl_json.size() != phi.segments().size()) {
    throw ParseError("one right limit per breakpoint after t_0 expected");
  }
  const auto& segs = phi.segments();
  if (right0 != (segs.empty() ? phi.tail() : segs.front().start)) {
    throw ParseError("right_limit_0 disagrees with the first segment");
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Point& expected = i + 1 < segs.size() ? segs[i + 1].start : phi.tail();
    if (point_from(rl_json[i], "right_limits") != expected) {
      throw ParseError("right_limits disagree with the segments");
    }
  }
  return phi;
}

Json to_json(const Bundle& bundle) {
  Json entries = Json::array();
  for (const auto& e : bundle.entries()) {
    Json trajectories = Json::array();
    for (const auto& phi : e.trajectories) trajectories.push_back(to_json(phi));
    entries.push_back({{"key", e.key}, {"trajectories", std::move(trajectories)}});
  }
  Json out;
  out["dim"] = bundle.dim();
  out["quantum"] = bundle.quantum();
  out["time_grid"] = bundle.time_grid();
  out["energy_index"] = bundle.energy_index() ? Json(*bundle.energy_index()) : Json(nullptr);
  out["horizon"] = bundle.horizon() ? Json(*bundle.horizon()) : Json(nullptr);
  out["entries"] = std::move(entries);
  return out;
}

Bundle bundle_from_json(const Json& j) {
  const Json& dim_field = field(j, "dim");
  if (!dim_field.is_number_unsigned()) throw ParseError("\"dim\" must be a positive integer");
  std::optional<std::size_t> energy;
  if (auto it = j.find("energy_index"); it != j.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) throw ParseError("\"energy_index\" must be a positive integer");
    energy = it->get<std::size_t>();
  }
  std::optional<double> horizon;
  if (auto it = j.find("horizon"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) throw ParseError("\"horizon\" must be a number");
    horizon = it->get<double>();
  }
  Bundle bundle = wrap_domain([&] {
    return Bundle(dim_field.get<std::size_t>(), number(j, "quantum"),
                  point_from(field(j, "time_grid"), "time_grid"), energy, horizon);
  });
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) throw ParseError("\"entries\" must be an array");
  for (const auto& e : entries) {
    const Point key = point_from(field(e, "key"), "key");
    const auto lattice = wrap_domain([&] { return bundle.quantize(key); });
    const Json& trajectories = field(e, "trajectories");
    if (!trajectories.is_array() || trajectories.empty()) {
      throw ParseError("every bundle entry needs a non-empty trajectory list");
    }
    for (const auto& tj : trajectories) {
      Trajectory phi = trajectory_from_json(tj);
      if (phi.dim() != bundle.dim()) throw ParseError("trajectory dimension does not match the bundle");
      const Point start = phi.initial_value();
      for (std::size_t i = 0; i < start.size(); ++i) {
        if (std::abs(start[i] - key[i]) > 0.5 * bundle.quantum()) {
          throw ParseError("trajectory does not start at its key");
        }
      }
      if (bundle.quantize(start) != lattice) throw ParseError("trajectory does not start at its key");
      bundle.insert(std::move(phi));
    }
  }
  return bundle;
}

Json to_json(const MetricReport& report) {
  Json terms = Json::array();
  for (const auto& t : report.terms) terms.push_back({{"M", t.M}, {"k", t.k}, {"dM", t.dM}});
  Json out;
  out["value"] = report.value;
  out["N"] = report.truncation_N;
  out["tail_bound"] = report.tail_bound;
  out["terms"] = std::move(terms);
  return out;
}

Json to_json(const TraceRecord& r) {
  Json out;
  out["i"] = r.i;
  out["lambda"] = r.lambda;
  out["k"] = r.k;
  out["survivors"] = r.survivors;
  out["min_value"] = r.min_value;
  return out;
}

Json to_json(const Violation& v) {
  Json out;
  out["property"] = v.property;
  out["key"] = v.key;
  out["T"] = v.T;
  out["distance"] = v.distance ? Json(*v.distance) : Json(nullptr);
  return out;
}

std::pair<FluidState, PressureLaw> fluid_from_json(const Json& j) {
  FluidState state;
  state.length = number(j, "L");
  state.rho = point_from(field(j, "rho"), "rho");
  state.m = point_from(field(j, "m"), "m");
  state.energy = number(j, "E");
  if (auto it = j.find("trace_constant"); it != j.end()) {
    if (!it->is_number()) throw ParseError("\"trace_constant\" must be a number");
    state.trace_constant = it->get<double>();
  }
  const Json& cells = field(j, "cells");
  if (!cells.is_number_unsigned() || cells.get<std::size_t>() != state.rho.size()) {
    throw ParseError("\"cells\" must equal the length of \"rho\"");
  }
  PressureLaw law{number(j, "a"), number(j, "gamma")};
  wrap_domain([&] {
    state.validate();
    law.validate();
    return 0;
  });
  return {std::move(state), law};
}

Json to_json(const FluidState& state, const PressureLaw& law) {
  Json out;
  out["L"] = state.length;
  out["cells"] = state.cells();
  out["rho"] = state.rho;
  out["m"] = state.m;
  out["E"] = state.energy;
  out["a"] = law.a;
  out["gamma"] = law.gamma;
  out["trace_constant"] = state.trace_constant;
  return out;
}

std::string dump(const Json& j) { return j.dump(); }

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace semiflow::io
