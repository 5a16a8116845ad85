#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "wallach/acceptance.hpp"
#include "wallach/blowup.hpp"
#include "wallach/equilibria.hpp"
#include "wallach/integrate.hpp"
#include "wallach/linearize.hpp"
#include "wallach/surfaces.hpp"

using namespace wallach;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kDomain = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out;
  unsigned threads = 1;
};

bool is_decimal(const std::string& text) {
  return text.find_first_of(".eE") != std::string::npos;
}

/// Parses "a1,a2,a3". Exact mode keeps rationals; decimals always go to floats.
Parameters read_params(const std::string& text, bool exact) {
  std::vector<Scalar> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(Scalar::parse(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (v.size() != 3) throw UsageError("--a expects three comma-separated values, got '" + text + "'");
  if (exact && is_decimal(text)) {
    std::cerr << "warning: decimal parameters cannot be exact; using floating point\n";
  }
  Parameters p(v[0], v[1], v[2]);
  return exact ? p : p.to_float();
}

std::vector<double> read_doubles(const std::string& text, const char* flag) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("{}: malformed number '{}'", flag, item));
    }
  }
  return v;
}

/// Writes to --out or stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + c.out);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json discriminants_json(const CaseDiscriminants& d) {
  json j = json::object();
  if (d.D1) j["D1"] = *d.D1;
  if (d.T) j["T"] = *d.T;
  if (d.D3) j["D3"] = *d.D3;
  return j;
}

json analyze(const Parameters& p) {
  json j;
  j["parameters"] = p;
  j["exact"] = p.exact();
  j["Q"] = q_eval(p);
  j["Q1"] = q1_eval(p);
  j["region"] = to_string(component_classify(p));
  const Census census = solve_all(p);
  j["solver_case"] = to_string(census.solver_case);
  j["discriminants"] = discriminants_json(census.discriminants);
  j["count"] = census.distinct();
  json rays = json::array();
  json notes = json::array();
  for (const auto& r : census.rays) {
    const auto lin = linearize_at(p, r);
    const auto cls = classify(lin);
    json e;
    e["rep"] = json::array({r.rep[0], r.rep[1], r.rep[2]});
    const MetricPoint v1 = normalize_unit_volume(p, r);
    e["unit_volume"] = json::array({v1[0], v1[1], v1[2]});
    e["family"] = to_string(r.family);
    e["multiplicity"] = r.multiplicity;
    e["rho"] = lin.rho;
    e["delta"] = lin.delta;
    e["sigma"] = lin.sigma;
    e["classification"] = to_string(cls.kind);
    if (cls.near_degenerate) e["near_degenerate"] = true;
    if (r.ill_conditioned) e["ill_conditioned"] = true;
    if (r.multiplicity > 1) {
      notes.push_back(fmt::format("{} is a root of multiplicity {} of the quartic", r.rep.str(), r.multiplicity));
    }
    if (cls.kind == PointKind::Degenerate) {
      notes.push_back(fmt::format("{} is linearly degenerate; run `wallach blowup` for its phase portrait", r.rep.str()));
    }
    rays.push_back(std::move(e));
  }
  j["equilibria"] = std::move(rays);
  for (const auto& d : census.diagnostics) notes.push_back(d);
  j["notes"] = std::move(notes);
  return j;
}

std::string surface_csv(int axis, const Scalar& value, const Scalar& lo, const Scalar& hi, int n, bool exact) {
  std::ostringstream out;
  out << "a1,a2,a3,Q,Q1\n";
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const Scalar u = lo + (hi - lo) * Scalar::ratio(i, n - 1);
      const Scalar w = lo + (hi - lo) * Scalar::ratio(k, n - 1);
      std::array<Scalar, 3> a;
      std::size_t free = 0;
      const std::array<Scalar, 2> uv{u, w};
      for (std::size_t c = 0; c < 3; ++c) {
        a[c] = static_cast<int>(c) + 1 == axis ? value : uv[free++];
        if (!exact) a[c] = to_float(a[c]);
      }
      out << a[0].str() << ',' << a[1].str() << ',' << a[2].str() << ',' << q_eval(a).str() << ','
          << q1_eval(a).str() << '\n';
    }
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalized Ricci flow on generalized Wallach spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  std::string flow_format = "csv";
  std::string scan_format = "csv";
  std::string verify_format = "text";
  app.add_option("--threads", common.threads, "Worker threads for scans")->envname("WALLACH_THREADS")->check(
      CLI::PositiveNumber);

  auto* analyze_cmd = app.add_subcommand("analyze", "Equilibria, invariants and region of one parameter triple");
  std::string a_text;
  bool exact = false;
  analyze_cmd->add_option("--a", a_text, "a1,a2,a3 as rationals or decimals")->required();
  analyze_cmd->add_flag("--exact", exact, "Exact rational arithmetic");
  analyze_cmd->add_option("--out", common.out, "Output file (default stdout)");

  auto* flow_cmd = app.add_subcommand("flow", "Integrate the reduced flow and write the trajectory");
  std::string x0_text;
  double t_max = 100.0;
  double rtol = 1e-10;
  bool linear = false;
  bool three_d = false;
  flow_cmd->add_option("--a", a_text, "a1,a2,a3")->required();
  flow_cmd->add_option("--x0", x0_text, "X1,X2 (reduced) or X1,X2,X3 with --3d")->required();
  flow_cmd->add_option("--tmax", t_max, "Final time")->capture_default_str();
  flow_cmd->add_option("--rtol", rtol, "Relative tolerance")->capture_default_str();
  flow_cmd->add_flag("--linear", linear, "Step in x instead of log x");
  flow_cmd->add_flag("--3d", three_d, "Integrate the unreduced field");
  flow_cmd->add_option("--format", flow_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  flow_cmd->add_option("--out", common.out, "Output file (default stdout)");

  auto* scan_cmd = app.add_subcommand("scan", "Cell-centered n^3 scan of (0,1/2)^3");
  int n = 9;
  scan_cmd->add_option("--n", n, "Samples per axis")->capture_default_str()->check(CLI::Range(2, 1000));
  scan_cmd->add_flag("--exact", exact, "Exact rational grid");
  scan_cmd->add_option("--format", scan_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  scan_cmd->add_option("--out", common.out, "Output file (default stdout)");

  auto* surface_cmd = app.add_subcommand("surface", "Q and Q1 on the plane a_axis = value");
  int axis = 1;
  std::string value_text = "1/4";
  std::string lo_text = "0";
  std::string hi_text = "1/2";
  int m = 21;
  surface_cmd->add_option("--axis", axis, "Fixed coordinate (1, 2 or 3)")->check(CLI::Range(1, 3));
  surface_cmd->add_option("--value", value_text, "Value of the fixed coordinate")->capture_default_str();
  surface_cmd->add_option("--lo", lo_text, "Lower end of both free coordinates")->capture_default_str();
  surface_cmd->add_option("--hi", hi_text, "Upper end of both free coordinates")->capture_default_str();
  surface_cmd->add_option("--n", m, "Samples per free axis")->capture_default_str()->check(CLI::Range(2, 10000));
  surface_cmd->add_flag("--exact", exact, "Exact rational arithmetic");
  surface_cmd->add_option("--out", common.out, "Output file (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  AcceptanceOptions acc;
  verify_cmd->add_option("--only", acc.only, "Criterion ids, e.g. A3");
  verify_cmd->add_option("--seed", acc.seed, "RNG seed")->capture_default_str();
  verify_cmd->add_option("--f2-shift", acc.f2_x1_quartic_shift, "Perturb the x1^4 coefficient of F2");
  verify_cmd->add_option("--format", verify_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  verify_cmd->add_option("--out", common.out, "Output file (default stdout)");

  auto* blowup_cmd = app.add_subcommand("blowup", "Blow-up of the degenerate point at (1/4,1/4,1/4)");
  blowup_cmd->add_option("--out", common.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*analyze_cmd) {
      emit(common, dump(analyze(read_params(a_text, exact))));
    } else if (*flow_cmd) {
      const Parameters p = read_params(a_text, false);
      const auto x0 = read_doubles(x0_text, "--x0");
      if (x0.size() != (three_d ? 3u : 2u)) throw UsageError(fmt::format("--x0 expects {} values", three_d ? 3 : 2));
      for (double v : x0) {
        if (!(v > 0.0)) throw UsageError("--x0 entries must be positive");
      }
      if (!(t_max > 0.0)) throw UsageError("--tmax must be positive");
      IntegrateOptions opts;
      opts.t_max = t_max;
      opts.rel_tol = rtol;
      opts.log_coordinates = !linear;
      opts.equilibria = unit_volume_equilibria(p);
      const Trajectory traj = three_d ? integrate_flow_3d(p, {x0[0], x0[1], x0[2]}, opts)
                                      : integrate_flow(p, {x0[0], x0[1]}, opts);
      const LimitReport limit = classify_limit(p, traj, opts.equilibria);
      std::cerr << fmt::format("status {}, {} accepted / {} rejected steps, volume drift {:.3g}\n",
                               to_string(limit.status), traj.accepted_steps, traj.rejected_steps,
                               traj.max_volume_drift);
      if (flow_format == "csv") {
        std::ostringstream out;
        write_csv(out, traj);
        emit(common, out.str());
      } else {
        json j = traj;
        j["limit"] = {{"status", to_string(limit.status)},
                      {"equilibrium", limit.equilibrium},
                      {"distance", limit.distance},
                      {"exit_face", limit.exit_face}};
        emit(common, dump(j));
      }
    } else if (*scan_cmd) {
      ScanOptions so;
      so.spacing = GridSpacing::CellCentered;
      so.threads = common.threads;
      so.exact = exact;
      const auto samples = scan_grid(Scalar(0), Scalar::ratio(1, 2), n, so);
      if (scan_format == "csv") {
        std::ostringstream out;
        write_csv(out, samples);
        emit(common, out.str());
      } else {
        emit(common, dump(json(samples)));
      }
    } else if (*surface_cmd) {
      Scalar value;
      Scalar lo;
      Scalar hi;
      try {
        value = Scalar::parse(value_text);
        lo = Scalar::parse(lo_text);
        hi = Scalar::parse(hi_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      emit(common, surface_csv(axis, value, lo, hi, m, exact));
    } else if (*verify_cmd) {
      const auto results = run_acceptance(acc);
      bool all = true;
      for (const auto& r : results) all = all && r.passed;
      if (verify_format == "json") {
        emit(common, dump(json{{"passed", all}, {"criteria", results}}));
      } else {
        std::string text;
        for (const auto& r : results) {
          text += fmt::format("{:<4} {}  {}  ({:.2f} s)  {}\n", r.id, r.passed ? "PASS" : "FAIL", r.anchor, r.seconds,
                              r.detail);
        }
        emit(common, text);
      }
      return all ? kOk : kVerifyFailed;
    } else if (*blowup_cmd) {
      emit(common, dump(json(blowup_linearizations())));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
