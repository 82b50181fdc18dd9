#include "sgp/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "sgp/errors.hpp"
#include "sgp/experiments.hpp"

namespace sgp {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

std::array<Vec3, 6> points(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("geometry is missing field '") + key + "'");
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != 6) throw InputError(std::string("field '") + key + "' must be a 6 x 3 array");
  std::array<Vec3, 6> out;
  for (int i = 0; i < 6; ++i) {
    if (!a[i].is_array() || a[i].size() != 3) throw InputError(std::string("field '") + key + "' must be a 6 x 3 array");
    for (int k = 0; k < 3; ++k) {
      if (!a[i][k].is_number()) throw InputError(std::string("field '") + key + "' holds a non-number");
      out[i](k) = a[i][k].get<double>();
    }
  }
  return out;
}

LegMeasurements lengths(const json& a) {
  if (!a.is_array() || a.size() != 6) throw InputError("'L' must be an array of 6 squared lengths");
  LegMeasurements L;
  for (int i = 0; i < 6; ++i) {
    if (!a[i].is_number()) throw InputError("'L' holds a non-number");
    L.L[i] = a[i].get<double>();
  }
  L.validate();
  return L;
}

std::string c3(const Vec3c& v) {
  return fmt::format("[[{},{}],[{},{}],[{},{}]]", fmt_double(v(0).real()), fmt_double(v(0).imag()),
                     fmt_double(v(1).real()), fmt_double(v(1).imag()), fmt_double(v(2).real()),
                     fmt_double(v(2).imag()));
}

}  // namespace

std::string fmt_double(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
  return fmt::format("{:.17g}", x);
}

GeometryInput parse_geometry_json(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) throw InputError("geometry must be a JSON object");
  GeometryInput in;
  in.geometry.top = points(j, "top");
  in.geometry.base = points(j, "base");
  if (j.contains("variant")) in.geometry.variant = parse_variant(j.at("variant").get<std::string>());
  in.geometry.validate();
  if (j.contains("L")) in.lengths = lengths(j.at("L"));
  return in;
}

GeometryInput read_geometry_file(const std::string& path) { return parse_geometry_json(slurp(path)); }

LegMeasurements parse_lengths_json(const std::string& text) {
  json j = parse_json(text);
  if (j.is_object()) {
    if (!j.contains("L")) throw InputError("lengths file is missing field 'L'");
    return lengths(j.at("L"));
  }
  return lengths(j);
}

LegMeasurements read_lengths_file(const std::string& path) { return parse_lengths_json(slurp(path)); }

std::string geometry_to_json(const PlatformGeometry& geom, const std::optional<LegMeasurements>& L) {
  auto pts = [](const std::array<Vec3, 6>& p) {
    std::string s = "[";
    for (int i = 0; i < 6; ++i)
      s += fmt::format("{}[{},{},{}]", i ? "," : "", fmt_double(p[i](0)), fmt_double(p[i](1)), fmt_double(p[i](2)));
    return s + "]";
  };
  std::string s = fmt::format("{{\"variant\":\"{}\",\"top\":{},\"base\":{}", variant_name(geom.variant),
                              pts(geom.top), pts(geom.base));
  if (L) {
    s += ",\"L\":[";
    for (int i = 0; i < 6; ++i) s += (i ? "," : "") + fmt_double(L->L[i]);
    s += "]";
  }
  return s + "}";
}

void write_solution_json(std::ostream& os, const SolutionSet& sol, bool all_candidates, bool real_only) {
  auto root = [&](int idx, int partner) {
    const Candidate& c = sol.candidates[idx];
    return fmt::format("{{\"index\":{},\"p\":{},\"t\":{},\"residual\":{},\"real\":{},\"conjugate\":{}}}", idx,
                       c3(c.pose.p), c3(c.pose.t), fmt_double(c.residual), c.real ? "true" : "false", partner);
  };
  fmt::print(os, "{{\n  \"real_count\": {},\n  \"error_metric\": {},\n  \"gap\": {},\n  \"rcond_AR\": {},\n",
             sol.real_count(), fmt_double(error_metric(sol)), fmt_double(sol.gap), fmt_double(sol.rcond));
  fmt::print(os, "  \"timings_ms\": {{\"template\": {}, \"plu\": {}, \"qz\": {}, \"filter\": {}, \"total\": {}}},\n",
             fmt_double(sol.timings.template_ms), fmt_double(sol.timings.plu_ms), fmt_double(sol.timings.qz_ms),
             fmt_double(sol.timings.filter_ms), fmt_double(sol.timings.total_ms));
  os << "  \"roots\": [";
  bool first = true;
  for (std::size_t k = 0; k < sol.accepted.size(); ++k) {
    if (real_only && !sol.candidates[sol.accepted[k]].real) continue;
    int partner = sol.partner[k] >= 0 ? sol.accepted[sol.partner[k]] : -1;
    os << (first ? "\n    " : ",\n    ") << root(sol.accepted[k], partner);
    first = false;
  }
  os << (first ? "]" : "\n  ]");
  if (all_candidates) {
    os << ",\n  \"candidates\": [\n";
    for (std::size_t k = 0; k < sol.candidates.size(); ++k) {
      const Candidate& c = sol.candidates[k];
      if (c.valid)
        os << "    " << root(static_cast<int>(k), -1);
      else
        os << "    {\"index\":" << k << ",\"valid\":false}";
      os << (k + 1 < sol.candidates.size() ? ",\n" : "\n");
    }
    os << "  ]";
  }
  os << "\n}\n";
}

void write_solution_csv(std::ostream& os, const SolutionSet& sol, bool all_candidates, bool real_only) {
  os << "index,accepted,valid,real,residual,u_re,u_im,v_re,v_im,w_re,w_im,x_re,x_im,y_re,y_im,z_re,z_im\n";
  std::vector<char> acc(sol.candidates.size(), 0);
  for (int a : sol.accepted) acc[a] = 1;
  auto line = [&](int idx) {
    const Candidate& c = sol.candidates[idx];
    fmt::print(os, "{},{},{},{},{}", idx, int(acc[idx]), int(c.valid), int(c.real), fmt_double(c.residual));
    for (const auto& z : c.pose.variables()) fmt::print(os, ",{},{}", fmt_double(z.real()), fmt_double(z.imag()));
    os << "\n";
  };
  if (all_candidates) {
    for (std::size_t k = 0; k < sol.candidates.size(); ++k) line(static_cast<int>(k));
  } else {
    for (int a : sol.accepted)
      if (!real_only || sol.candidates[a].real) line(a);
  }
}

void write_structure_json(std::ostream& os, const TemplateStructure& s) {
  json j;
  const char* names[4] = {"eliminated", "excessive", "reducible", "basic"};
  for (int b = 0; b < 4; ++b) {
    json arr = json::array();
    int off = s.block_offset(static_cast<ColumnBlock>(b));
    for (int k = 0; k < s.sizes[b]; ++k) arr.push_back(s.columns[off + k].to_string());
    j["columns"][names[b]] = arr;
  }
  json dz = json::array(), dd = json::array();
  for (std::size_t k = 0; k < s.dropped.size(); ++k)
    (static_cast<int>(k) < s.dropped_zero ? dz : dd).push_back(s.dropped[k].to_string());
  j["dropped"]["zero_after_schur"] = dz;
  j["dropped"]["dependent_excessive"] = dd;
  for (int a = 0; a < 6; ++a) {
    json arr = json::array();
    for (const auto& m : s.tables.shifts[a]) arr.push_back(m.to_string());
    j["shift_sets"]["A_" + std::to_string(a + 1)] = arr;
  }
  json rows = json::array();
  for (const auto& r : s.row_plan) rows.push_back({r.shift.to_string(), r.poly + 1});
  j["row_plan"] = rows;
  json amap = json::array();
  for (std::size_t i = 0; i < s.action_map.size(); ++i) {
    const auto& a = s.action_map[i];
    amap.push_back({{"b", s.tables.basic[i].to_string()}, {"block", a.in_basic ? "B" : "R"}, {"index", a.index}});
  }
  j["action_map"] = amap;
  j["counts"] = {{"rows", s.num_rows()},
                 {"columns", s.num_template_cols()},
                 {"full_universe", s.full_universe_size()},
                 {"dropped", s.dropped.size()},
                 {"reduced_rows", s.num_rows() - s.sizes[0]},
                 {"reduced_cols", s.num_template_cols() - s.sizes[0]},
                 {"series_degree", s.series_degree}};
  os << j.dump(1) << "\n";
}

}  // namespace sgp
