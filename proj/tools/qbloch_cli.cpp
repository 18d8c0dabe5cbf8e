// qbloch: capacity, Voronoi diagrams and self-verification from the shell.
//
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 invalid channel, 4 diagram mode misuse.

#include "qbloch/capacity.hpp"
#include "qbloch/channels.hpp"
#include "qbloch/io.hpp"
#include "qbloch/sampling.hpp"
#include "qbloch/verify.hpp"
#include "qbloch/voronoi.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qbloch;

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kConfigError = 2,
  kInvalidChannel = 3,
  kModeMisuse = 4,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string channel;
  std::vector<std::string> params;
  std::string channel_file;
  std::string sites;
  std::string mode;
  std::vector<double> epsilons;
  std::size_t samples = 0;  // 0 = subcommand default
  int grid = 41;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::string only;
  bool no_margin = false;
};

std::map<std::string, double> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--param expects K=V, got '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || !std::isfinite(v)) {
      throw ConfigError("--param " + key + " needs a finite number");
    }
    out[key] = v;
  }
  return out;
}

AffineChannel build_channel(const RunConfig& cfg) {
  if (!cfg.channel_file.empty()) {
    if (!cfg.channel.empty() || !cfg.params.empty()) {
      throw ConfigError("use either --channel-file or --channel/--param");
    }
    std::ifstream in(cfg.channel_file);
    if (!in) throw ConfigError("cannot read " + cfg.channel_file);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      return parse_channel_json(ss.str());
    } catch (const FormatError& e) {
      throw ConfigError(e.what());
    }
  }
  if (cfg.channel.empty()) {
    throw ConfigError("a channel is required (--channel NAME or --channel-file PATH)");
  }
  std::string name = cfg.channel;
  std::replace(name.begin(), name.end(), '-', '_');
  auto params = parse_params(cfg.params);
  auto take = [&](const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw ConfigError(name + " needs --param " + key + "=V");
    const double v = it->second;
    params.erase(it);
    return v;
  };
  auto build = [&]() -> AffineChannel {
    try {
      if (name == "identity") return AffineChannel::identity();
      if (name == "depolarizing") return AffineChannel::depolarizing(take("t"));
      if (name == "planar") {
        const double tx = take("tx");
        return AffineChannel::planar(tx, take("ty"));
      }
      if (name == "amplitude_damping") return AffineChannel::amplitude_damping(take("gamma"));
      if (name == "phase_damping") return AffineChannel::phase_damping(take("lambda"));
      if (name == "rotation") {
        const double ax = take("ax"), ay = take("ay"), az = take("az");
        return AffineChannel::rotation(Vec3(ax, ay, az), take("angle"));
      }
    } catch (const InvalidChannel&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    throw ConfigError("unknown channel '" + cfg.channel + "'");
  };
  AffineChannel c = build();
  if (!params.empty()) {
    throw ConfigError("unused --param " + params.begin()->first + " for " + name);
  }
  return c;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + cfg.out);
  out << text;
}

int cmd_capacity(const RunConfig& cfg) {
  if (!cfg.format.empty() && cfg.format != "json") {
    throw ConfigError("capacity output format is json");
  }
  const std::size_t samples = cfg.samples ? cfg.samples : 2000;
  if (samples < 16) throw ConfigError("--samples must be at least 16");
  const AffineChannel channel = build_channel(cfg);
  const CapacityReport report = holevo_capacity(channel, samples, 1e-12, cfg.seed);
  emit(cfg, report_to_json(report));
  return kOk;
}

std::vector<BlochVector> ball_grid(int side, double max_radius) {
  std::vector<BlochVector> out;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      for (int k = 0; k < side; ++k) {
        const Vec3 p(-1.0 + 2.0 * i / (side - 1), -1.0 + 2.0 * j / (side - 1),
                     -1.0 + 2.0 * k / (side - 1));
        if (BlochVector::norm(p) <= max_radius) out.emplace_back(p);
      }
    }
  }
  return out;
}

int cmd_voronoi(const RunConfig& cfg) {
  const auto mode = parse_mode(cfg.mode);
  if (!mode) throw ConfigError("unknown --mode '" + cfg.mode + "'");
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format != "csv" && !parse_export_format(format)) {
    throw ConfigError("voronoi --format must be csv, off or svg");
  }
  for (double e : cfg.epsilons) {
    if (!(e > 0.0 && e <= 0.5)) throw ConfigError("--epsilon must lie in (0, 0.5]");
  }
  const bool divergence =
      *mode == DiagramMode::DivergencePrimal || *mode == DiagramMode::DivergenceDual;
  if (!cfg.epsilons.empty() && !divergence) {
    throw ModeMisuse("--epsilon applies to divergence modes only");
  }
  if (cfg.grid < 2) throw ConfigError("--grid must be at least 2");

  if (cfg.sites.empty()) throw ConfigError("--sites PATH is required");
  std::ifstream in(cfg.sites);
  if (!in) throw ConfigError("cannot read " + cfg.sites);
  SiteSet sites;
  try {
    sites = parse_sites_csv(in);
  } catch (const ModeMisuse&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad site file: ") + e.what());
  }
  if (sites.empty()) throw ConfigError("site file holds no sites");

  if (format != "csv") {
    ExportOptions opts;
    if (!cfg.epsilons.empty()) opts.epsilon = cfg.epsilons.front();
    emit(cfg, export_cells(sites, *mode, *parse_export_format(format), opts));
    return kOk;
  }

  const std::size_t samples = cfg.samples ? cfg.samples : 10000;
  std::string text;
  if (!cfg.epsilons.empty()) {
    const auto queries = sample_sphere(samples, cfg.seed);
    for (double e : cfg.epsilons) {
      text += "# epsilon=" + format_number(e) + "\n";
      text += assignment_to_csv(pure_limit_section(sites, e, *mode, queries), !cfg.no_margin);
    }
  } else {
    const auto queries = divergence ? ball_grid(cfg.grid, 0.999) : sample_sphere(samples, cfg.seed);
    text = assignment_to_csv(assign(*mode, sites, queries), !cfg.no_margin);
  }
  emit(cfg, text);
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions opts;
  opts.seed = cfg.seed;
  if (!cfg.only.empty()) opts.only = cfg.only;
  std::vector<PropertyResult> results;
  try {
    results = run_verification(opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  emit(cfg, format_verification_table(results));
  const bool ok = std::all_of(results.begin(), results.end(),
                              [](const PropertyResult& r) { return r.pass; });
  return ok ? kOk : kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distances, divergence Voronoi diagrams and Holevo capacity on the Bloch ball"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* capacity = app.add_subcommand("capacity", "Holevo capacity of an affine 1-qubit channel");
  capacity->add_option("--channel", cfg.channel,
                       "identity, depolarizing, planar, amplitude-damping, phase-damping, rotation");
  capacity->add_option("--param", cfg.params, "builder parameter K=V (repeatable)");
  capacity->add_option("--channel-file", cfg.channel_file, "channel JSON file");
  capacity->add_option("--samples", cfg.samples, "sphere samples (default 2000)");
  capacity->add_option("--seed", cfg.seed, "lattice rotation seed");
  capacity->add_option("--out", cfg.out, "output path (default stdout)");
  capacity->add_option("--format", cfg.format, "json");

  auto* voronoi = app.add_subcommand("voronoi", "classify a query lattice or export sphere cells");
  voronoi->add_option("--sites", cfg.sites, "CSV of x,y,z sites");
  voronoi->add_option("--mode", cfg.mode,
                      "fubini-study, bures, geodesic, euclidean, divergence-primal, divergence-dual");
  voronoi->add_option("--epsilon", cfg.epsilons, "limit-section epsilon (repeatable)");
  voronoi->add_option("--samples", cfg.samples, "sphere queries (default 10000)");
  voronoi->add_option("--grid", cfg.grid, "ball grid side for divergence modes (default 41)");
  voronoi->add_option("--seed", cfg.seed, "lattice rotation seed");
  voronoi->add_option("--out", cfg.out, "output path (default stdout)");
  voronoi->add_option("--format", cfg.format, "csv, off or svg");
  voronoi->add_flag("--no-margin", cfg.no_margin, "omit the margin column");

  auto* verify = app.add_subcommand("verify", "run the built-in property suites");
  verify->add_option("--only", cfg.only, "run a single suite");
  verify->add_option("--seed", cfg.seed, "sampling seed");
  verify->add_option("--out", cfg.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*capacity) return cmd_capacity(cfg);
    if (*voronoi) return cmd_voronoi(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const InvalidChannel& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidChannel;
  } catch (const ModeMisuse& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModeMisuse;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
