/**
 * @file billiard_cli.cpp
 * @brief Command-line front end: one verb per theorem-level artifact.
 *
 * Verbs: beams, escape, verify, return-map, coverage, render, gas.
 * Exit codes: 0 = pass, 1 = verification failures, 2 = undecided items
 * present, 3 = usage / parse errors.
 */

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtb/analysis.hpp"
#include "rtb/cache.hpp"
#include "rtb/jsonio.hpp"
#include "rtb/svg.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUndecided = 2;
constexpr int kExitUsage = 3;

constexpr int kDigits = 25;

struct Opts {
  std::string alpha;
  std::string theta;
  std::string band = "0..3";
  std::string cache_dir;
  std::string format = "json";
  std::string start_x;
  std::string m1, m2;
  int n = 8;
  int nmax = 10;
  long precision = 128;
  long max_precision = 1024;
  long steps = 200000;
  long samples = 200;
  unsigned long seed = 20260824;
};

void add_common(CLI::App* sub, Opts& o) {
  sub->add_option("--precision", o.precision, "Working precision in bits")
      ->capture_default_str();
  sub->add_option("--max-precision", o.max_precision,
                  "Precision-escalation cap in bits")
      ->capture_default_str();
  sub->add_option("--steps", o.steps, "Copy / event budget")
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "Random seed for sampling verbs")
      ->capture_default_str();
  sub->add_option("--cache-dir", o.cache_dir, "Beam-table cache directory");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "svg"}))
      ->capture_default_str();
}

std::pair<int, int> parse_band(const std::string& s) {
  size_t dots = s.find("..");
  if (dots == std::string::npos)
    throw rtb::ParseError("band must be M..N", 0);
  try {
    int M = std::stoi(s.substr(0, dots));
    int N = std::stoi(s.substr(dots + 2));
    return {M, N};
  } catch (const std::exception&) {
    throw rtb::ParseError("band must be M..N with integer endpoints", 0);
  }
}

mpq_class parse_rational(const std::string& s) {
  size_t dot = s.find('.');
  try {
    if (dot == std::string::npos) {
      mpq_class q(s, 10);
      q.canonicalize();
      return q;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw rtb::ParseError("not a rational or decimal literal: " + s, 0);
  }
}

nlohmann::json enclosure_json(const rtb::Iv& v) {
  return nlohmann::json::array({v.lo_str(kDigits), v.hi_str(kDigits)});
}

rtb::TriangleConfig config_from(const Opts& o) {
  if (o.alpha.empty()) throw rtb::ParseError("--alpha is required", 0);
  return rtb::make_triangle(o.alpha, o.precision, o.max_precision);
}

int run_beams(const Opts& o) {
  rtb::TriangleConfig cfg = config_from(o);
  auto [M, N] = parse_band(o.band);
  if (o.format == "json" && !o.cache_dir.empty()) {
    rtb::BeamCache cache(o.cache_dir);
    std::string key = cache.key(cfg.alpha, o.precision, M, N);
    if (auto hit = cache.lookup(key)) {
      std::cout << *hit;
      return kExitPass;
    }
    rtb::BeamSet bs = rtb::decompose_band(cfg, M, N, o.steps);
    std::string payload = rtb::beams_to_json(cfg, bs).dump(2) + "\n";
    cache.store(key, payload);
    std::cout << payload;
    return kExitPass;
  }
  rtb::BeamSet bs = rtb::decompose_band(cfg, M, N, o.steps);
  if (o.format == "svg")
    std::cout << rtb::render_unfolding_svg(cfg, bs);
  else
    std::cout << rtb::beams_to_json(cfg, bs).dump(2) << "\n";
  return kExitPass;
}

int run_escape(const Opts& o) {
  rtb::TriangleConfig cfg = config_from(o);
  nlohmann::json out;
  out["alpha_spec"] = cfg.alpha.canonical();
  out["nmax"] = o.nmax;
  for (bool positive : {true, false}) {
    rtb::EscapeBracketSeq seq =
        rtb::escape_bracket(cfg, o.nmax, positive, o.steps);
    nlohmann::json arr = nlohmann::json::array();
    for (const rtb::EscapeBracket& b : seq.entries) {
      arr.push_back({{"N", b.N},
                     {"I", enclosure_json(
                               rtb::Iv::hull(b.lo.enc(), b.hi.enc()))},
                     {"width", enclosure_json(b.width())}});
    }
    out[positive ? "up" : "down"] = {{"entries", std::move(arr)},
                                     {"nested", seq.nested_certified}};
  }
  std::cout << out.dump(2) << "\n";
  return kExitPass;
}

int run_verify(const Opts& o) {
  rtb::TriangleConfig cfg = config_from(o);
  nlohmann::json rep = rtb::verify_all(cfg, o.n);
  std::cout << rep.dump(2) << "\n";
  std::string overall = rep.at("overall").get<std::string>();
  if (overall == "fail") return kExitFail;
  if (overall == "undecided") return kExitUndecided;
  return kExitPass;
}

int run_return_map(const Opts& o) {
  rtb::TriangleConfig cfg = config_from(o);
  auto [M, N] = parse_band(o.band);
  std::optional<rtb::AngleSpec> theta;
  if (!o.theta.empty()) theta = rtb::AngleSpec::parse(o.theta);
  rtb::ReturnMapPartition part = rtb::build_return_map(
      cfg, theta ? &*theta : nullptr, M, N, o.steps);
  nlohmann::json out;
  out["alpha_spec"] = cfg.alpha.canonical();
  if (theta) out["theta"] = theta->canonical();
  out["band"] = {part.M, part.N};
  out["total_length"] = enclosure_json(part.total_length);
  out["domain_length"] = enclosure_json(part.domain_length);
  nlohmann::json arr = nlohmann::json::array();
  for (const rtb::RMInterval& iv : part.intervals) {
    nlohmann::json e;
    e["I"] = enclosure_json(rtb::Iv::hull(iv.lo.enc(), iv.hi.enc()));
    e["class"] = rtb::to_string(iv.cls);
    e["code"] = iv.code.str();
    e["returning"] = iv.returning;
    if (iv.shift) e["shift"] = enclosure_json(*iv.shift);
    arr.push_back(std::move(e));
  }
  out["intervals"] = std::move(arr);
  try {
    rtb::Iet iet = rtb::ghost_complete(part);
    std::vector<rtb::IetComponent> comps = rtb::iet_classify(iet);
    nlohmann::json carr = nlohmann::json::array();
    for (const rtb::IetComponent& c : comps) {
      carr.push_back({{"pieces", c.pieces},
                      {"periodic", c.periodic},
                      {"period", c.period}});
    }
    out["ghost_iet"] = {{"pieces", iet.pieces.size()},
                        {"components", std::move(carr)}};
  } catch (const rtb::LengthMismatch& e) {
    out["ghost_iet"] = {{"error", e.what()}};
  }
  std::cout << out.dump(2) << "\n";
  return kExitPass;
}

int run_coverage(const Opts& o) {
  rtb::TriangleConfig cfg = config_from(o);
  rtb::CoverageStats cs = rtb::coverage_fraction(cfg, o.n, o.steps);
  rtb::FoliationStats fs =
      rtb::foliation_sample(cfg, o.samples, o.n, o.seed, o.steps);
  nlohmann::json out;
  out["alpha_spec"] = cfg.alpha.canonical();
  out["N"] = o.n;
  out["fraction"] = enclosure_json(cs.fraction);
  out["unresolved"] = enclosure_json(cs.unresolved);
  out["total_length"] = enclosure_json(cs.total_length);
  out["foliation"] = {{"samples", fs.samples},
                      {"periodic", fs.periodic},
                      {"singular", fs.singular},
                      {"unresolved", fs.unresolved},
                      {"seed", fs.seed}};
  // Cross-check: the sampled periodic rate must not certifiably exceed the
  // certified coverage, nor undershoot it by more than the unresolved mass
  // plus sampling noise.
  double rate = fs.samples > 0
                    ? static_cast<double>(fs.periodic) / fs.samples
                    : 0.0;
  double noise = fs.samples > 0 ? 3.0 / std::sqrt((double)fs.samples) : 1.0;
  bool consistent = rate <= cs.fraction.hi_d() + cs.unresolved.hi_d() + noise &&
                    rate >= cs.fraction.lo_d() - cs.unresolved.hi_d() - noise;
  out["foliation"]["consistent_with_coverage"] = consistent;
  std::cout << out.dump(2) << "\n";
  return consistent ? kExitPass : kExitFail;
}

int run_render(const Opts& o) {
  rtb::TriangleConfig cfg = config_from(o);
  if (!o.start_x.empty()) {
    std::optional<rtb::AngleSpec> theta;
    if (!o.theta.empty()) theta = rtb::AngleSpec::parse(o.theta);
    rtb::Coord x0 = rtb::Coord::times_cos(parse_rational(o.start_x));
    auto [M, N] = parse_band(o.band);
    rtb::Trajectory t =
        rtb::trace_ray(cfg, x0, rtb::StopRule::return_or_band(M, N, o.steps),
                       theta ? &*theta : nullptr, true);
    std::cout << rtb::render_unfolding_svg(cfg, t, theta ? &*theta : nullptr);
    return kExitPass;
  }
  auto [M, N] = parse_band(o.band);
  rtb::BeamSet bs = rtb::decompose_band(cfg, M, N, o.steps);
  std::cout << rtb::render_unfolding_svg(cfg, bs);
  return kExitPass;
}

int run_gas(const Opts& o) {
  if (o.m1.empty() || o.m2.empty())
    throw rtb::ParseError("--m1 and --m2 are required", 0);
  mpq_class m1 = parse_rational(o.m1), m2 = parse_rational(o.m2);
  if (m1 <= 0 || m2 <= 0) throw rtb::OutOfRange("masses must be positive");
  rtb::GasAngle ga = rtb::gas_map(m1, m2);
  nlohmann::json out;
  out["m1"] = m1.get_str();
  out["m2"] = m2.get_str();
  out["alpha_spec"] = ga.alpha.canonical();
  out["alpha"] = enclosure_json(ga.alpha.eval(o.precision));
  out["in_theorem_range"] = ga.in_theorem_range;
  if (!ga.note.empty()) out["note"] = ga.note;
  std::cout << out.dump(2) << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-geometry toolkit for billiards in right triangles"};
  app.require_subcommand(1);
  Opts o;

  CLI::App* beams = app.add_subcommand(
      "beams", "Beam decomposition of a band, as JSON or SVG");
  beams->add_option("--alpha", o.alpha, "Angle expression")->required();
  beams->add_option("--band", o.band, "Band M..N")->capture_default_str();
  add_common(beams, o);

  CLI::App* escape = app.add_subcommand(
      "escape", "Brackets of the unique escape orbit for N = 1..nmax");
  escape->add_option("--alpha", o.alpha, "Angle expression")->required();
  escape->add_option("--nmax", o.nmax, "Largest band level")
      ->capture_default_str();
  add_common(escape, o);

  CLI::App* verify = app.add_subcommand(
      "verify", "Aggregate verification report for the band -N..N");
  verify->add_option("--alpha", o.alpha, "Angle expression")->required();
  verify->add_option("--n", o.n, "Band level N")->capture_default_str();
  add_common(verify, o);

  CLI::App* rmap = app.add_subcommand(
      "return-map", "First-return partition and ghost-completed IET");
  rmap->add_option("--alpha", o.alpha, "Angle expression")->required();
  rmap->add_option("--theta", o.theta, "Direction (perpendicular if absent)");
  rmap->add_option("--band", o.band, "Band M..N")->capture_default_str();
  add_common(rmap, o);

  CLI::App* coverage = app.add_subcommand(
      "coverage", "Certified periodic coverage of L plus a sampling check");
  coverage->add_option("--alpha", o.alpha, "Angle expression")->required();
  coverage->add_option("--n", o.n, "Band level N")->capture_default_str();
  coverage->add_option("--samples", o.samples, "Foliation sample count")
      ->capture_default_str();
  add_common(coverage, o);

  CLI::App* render = app.add_subcommand(
      "render", "SVG of an unfolded trajectory (--x) or band decomposition");
  render->add_option("--alpha", o.alpha, "Angle expression")->required();
  render->add_option("--x", o.start_x,
                     "Start as a multiple of cos(alpha), e.g. 0.3");
  render->add_option("--theta", o.theta,
                     "Direction (perpendicular if absent)");
  render->add_option("--band", o.band, "Band M..N")->capture_default_str();
  add_common(render, o);

  CLI::App* gas = app.add_subcommand(
      "gas", "Right-triangle angle equivalent to two elastic particles");
  gas->add_option("--m1", o.m1, "Mass of the particle next to the wall")
      ->required();
  gas->add_option("--m2", o.m2, "Mass of the outer particle")->required();
  add_common(gas, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (beams->parsed()) return run_beams(o);
    if (escape->parsed()) return run_escape(o);
    if (verify->parsed()) return run_verify(o);
    if (rmap->parsed()) return run_return_map(o);
    if (coverage->parsed()) return run_coverage(o);
    if (render->parsed()) return run_render(o);
    if (gas->parsed()) return run_gas(o);
  } catch (const rtb::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rtb::OutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rtb::UndecidableRange& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return kExitUndecided;
  } catch (const rtb::UndecidedError& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return kExitUndecided;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
