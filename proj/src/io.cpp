#include "qbloch/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qbloch {

namespace {

using json = nlohmann::json;

// Round-trips through the 12-digit text so json prints the short form.
double rounded(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size();
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

AffineChannel parse_channel_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("channel file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("matrix") || !j.contains("offset")) {
    throw FormatError("channel file needs \"matrix\" and \"offset\"");
  }
  const json& jm = j["matrix"];
  const json& jb = j["offset"];
  if (!jm.is_array() || jm.size() != 3 || !jb.is_array() || jb.size() != 3) {
    throw FormatError("channel matrix must be 3x3 and offset a 3-vector");
  }
  Mat3 m;
  Vec3 b;
  for (int r = 0; r < 3; ++r) {
    if (!jm[r].is_array() || jm[r].size() != 3) {
      throw FormatError("channel matrix must be 3x3");
    }
    for (int c = 0; c < 3; ++c) {
      if (!jm[r][c].is_number()) throw FormatError("channel matrix entries must be numbers");
      m(r, c) = jm[r][c].get<double>();
    }
    if (!jb[r].is_number()) throw FormatError("channel offset entries must be numbers");
    b(r) = jb[r].get<double>();
  }
  std::string label = "channel";
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw FormatError("channel label must be a string");
    label = j["label"].get<std::string>();
  }
  return AffineChannel(m, b, label);
}

std::string channel_to_json(const AffineChannel& channel) {
  json j;
  j["matrix"] = json::array();
  for (int r = 0; r < 3; ++r) {
    j["matrix"].push_back({rounded(channel.matrix()(r, 0)), rounded(channel.matrix()(r, 1)),
                           rounded(channel.matrix()(r, 2))});
  }
  j["offset"] = {rounded(channel.offset()(0)), rounded(channel.offset()(1)),
                 rounded(channel.offset()(2))};
  j["label"] = channel.label();
  return j.dump(2) + "\n";
}

SiteSet parse_sites_csv(std::istream& in) {
  std::vector<BlochVector> sites;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    double v[3];
    const bool numeric = fields.size() == 3 && parse_double(fields[0], v[0]) &&
                         parse_double(fields[1], v[1]) && parse_double(fields[2], v[2]);
    if (!numeric) {
      const bool header = std::any_of(fields.begin(), fields.end(), [](const std::string& f) {
        double unused = 0.0;
        return !parse_double(f, unused);
      });
      if (header && !seen_data && lineno == 1) continue;
      throw FormatError("site file line " + std::to_string(lineno) +
                        ": expected x,y,z");
    }
    seen_data = true;
    sites.emplace_back(v[0], v[1], v[2]);
  }
  return SiteSet(std::move(sites));
}

std::string assignment_to_csv(const DiagramAssignment& a, bool with_margin) {
  std::string out = with_margin ? "qx,qy,qz,site,margin\n" : "qx,qy,qz,site\n";
  for (const auto& e : a.entries) {
    out += format_number(e.query.x());
    out += ',';
    out += format_number(e.query.y());
    out += ',';
    out += format_number(e.query.z());
    out += ',';
    out += std::to_string(e.site);
    if (with_margin) {
      out += ',';
      out += format_number(e.margin);
    }
    out += '\n';
  }
  return out;
}

std::string report_to_json(const CapacityReport& report) {
  json j;
  j["label"] = report.label;
  j["n_samples"] = report.n_samples;
  j["capacity_nats"] = rounded(report.capacity_nats);
  j["capacity_bits"] = rounded(report.capacity_bits);
  j["center"] = {rounded(report.center.x()), rounded(report.center.y()),
                 rounded(report.center.z())};
  j["support"] = report.support;
  j["solver_gap"] = rounded(report.solver_gap);
  return j.dump(2) + "\n";
}

}  // namespace qbloch
