#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "cpnlab/report.hpp"
#include "json.hpp"

namespace cpnlab {

namespace {

using json = nlohmann::ordered_json;

// JSON has no NaN or infinity; they are written as null and read back as NaN.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json to_json(const ExperimentReport& r, bool with_timing) {
  json in;
  in["maps"] = r.inputs.maps;
  in["seeds"] = r.inputs.seeds;
  in["resolutions"] = r.inputs.resolutions;
  in["parameters"] = json::object();
  for (const auto& [k, v] : r.inputs.parameters) in["parameters"][k] = number(v);
  json j;
  j["name"] = r.name;
  j["inputs"] = in;
  j["estimate"] = number(r.estimate);
  j["reference"] = number(r.reference);
  j["abs_error"] = number(r.abs_error);
  j["rel_error"] = number(r.rel_error);
  j["tolerance"] = number(r.tolerance);
  j["tolerance_kind"] = to_string(r.kind);
  j["pass"] = r.pass;
  if (with_timing) j["wall_time"] = r.wall_time;
  j["note"] = r.note;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_reports_json(const std::vector<ExperimentReport>& reports, std::ostream& out, bool with_timing) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r, with_timing));
  out << std::setw(2) << arr << '\n';
}

void write_reports_csv(const std::vector<ExperimentReport>& reports, std::ostream& out) {
  out << "name,estimate,reference,abs_error,rel_error,tolerance,tolerance_kind,pass,wall_time,note\n";
  out << std::setprecision(17);
  for (const auto& r : reports)
    out << csv_field(r.name) << ',' << r.estimate << ',' << r.reference << ',' << r.abs_error << ',' << r.rel_error
        << ',' << r.tolerance << ',' << to_string(r.kind) << ',' << (r.pass ? "true" : "false") << ',' << r.wall_time
        << ',' << csv_field(r.note) << '\n';
}

std::vector<ExperimentReport> read_reports_json(std::istream& in) {
  const json arr = json::parse(in);
  std::vector<ExperimentReport> out;
  for (const auto& j : arr) {
    ExperimentReport r;
    r.name = j.at("name").get<std::string>();
    const json& i = j.at("inputs");
    r.inputs.maps = i.at("maps").get<std::vector<std::string>>();
    r.inputs.seeds = i.at("seeds").get<std::vector<std::uint64_t>>();
    r.inputs.resolutions = i.at("resolutions").get<std::vector<int>>();
    for (const auto& [k, v] : i.at("parameters").items()) r.inputs.parameters[k] = number_from(v);
    r.estimate = number_from(j.at("estimate"));
    r.reference = number_from(j.at("reference"));
    r.abs_error = number_from(j.at("abs_error"));
    r.rel_error = number_from(j.at("rel_error"));
    r.tolerance = number_from(j.at("tolerance"));
    r.kind = tolerance_kind_from_string(j.at("tolerance_kind").get<std::string>());
    r.pass = j.at("pass").get<bool>();
    r.wall_time = j.value("wall_time", 0.0);
    r.note = j.value("note", "");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SuiteEntry> parse_suite(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("suite: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("suite: expected a JSON object of experiments");
  std::vector<SuiteEntry> out;
  for (const auto& [name, params] : doc.items()) {
    SuiteEntry e;
    e.name = name;
    if (!params.is_object()) throw UsageError("suite: parameters of '" + name + "' must be an object");
    try {
      for (const auto& [key, v] : params.items()) {
        if (key == "seed") e.config.seed = v.get<std::uint64_t>();
        else if (key == "resolution") e.config.resolution = v.get<int>();
        else if (key == "p") e.config.p = v.get<double>();
        else if (key == "tolerances")
          for (const auto& [c, t] : v.items()) e.config.tolerances[c] = t.get<double>();
        else if (key == "parameters")
          for (const auto& [c, t] : v.items()) e.config.parameters[c] = t.get<double>();
        else throw UsageError("suite: unknown key '" + key + "' for '" + name + "'");
      }
    } catch (const json::exception& ex) {
      throw UsageError("suite: bad value for '" + name + "': " + ex.what());
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ExperimentReport> run_suite_file(const std::string& path, bool parallel) {
  std::ifstream in(path);
  if (!in) throw UsageError("suite: cannot open '" + path + "'");
  return run_suite(parse_suite(in), parallel);
}

}  // namespace cpnlab
