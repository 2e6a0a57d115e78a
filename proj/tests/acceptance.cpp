/**
 * @file acceptance.cpp
 * @brief Acceptance gate: one pass/fail line per criterion.
 *
 * Each criterion is evaluated independently; a throw inside a criterion
 * fails that criterion only.  Exit code 0 iff all ten pass.
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "naive_sim.hpp"
#include "rtb/analysis.hpp"

using namespace rtb;

namespace {

int g_failures = 0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int idx, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%2d] %-28s %s  (%s)\n", idx, name.c_str(),
              ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

template <typename F>
void criterion(int idx, const std::string& name, F&& body) {
  try {
    auto [ok, detail] = body();
    report(idx, name, ok, detail);
  } catch (const std::exception& e) {
    report(idx, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// ---------------------------------------------------------------------------

std::pair<bool, std::string> crit_gl_loop() {
  // 10 angles uniform in (pi/6 + 0.01, pi/4 - 0.01), < 1 s each at 128 bits
  std::mt19937_64 rng(1);
  const double lo = M_PI / 6 + 0.01, hi = M_PI / 4 - 0.01;
  std::uniform_real_distribution<double> ua(lo, hi);
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    char a[32];
    std::snprintf(a, sizeof a, "%.6f", ua(rng));
    TriangleConfig cfg = make_triangle(a, 128);
    Clock::time_point t0 = Clock::now();
    bool ok = gl_loop_check(cfg);
    double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    if (!ok) return {false, std::string("g_L loop failed at alpha = ") + a};
    if (dt >= 1.0)
      return {false, std::string("runtime ") + fmt(dt) + " s at alpha = " + a};
  }
  return {true, "10 angles, worst runtime " + fmt(worst) + " s"};
}

std::pair<bool, std::string> crit_beam_counts() {
  Clock::time_point t0 = Clock::now();
  int max01 = 0, maxtot = 0;
  for (int N = 1; N <= 10; ++N) {
    std::vector<std::string> codes128, codes256;
    int n01 = 0, ntot = 0;
    for (long prec : {128L, 256L}) {
      TriangleConfig cfg = make_triangle("0.7", prec, 4 * prec);
      BeamSet bs = decompose_band(cfg, 0, N);
      std::vector<std::string>& codes = prec == 128 ? codes128 : codes256;
      n01 = ntot = 0;
      for (size_t i = 0; i < bs.beams.size(); ++i) {
        const Beam& b = bs.beams[i];
        if (b.degenerate || bs.beam_side[i] != Side::S0Pos) continue;
        ++ntot;
        codes.push_back(b.code.str());
        if (b.code.entries.size() >= 2 && b.code.entries[0] == 0 &&
            b.code.entries[1] == 1)
          ++n01;
      }
    }
    if (codes128 != codes256)
      return {false, "counts not stable under precision doubling at N = " +
                         std::to_string(N)};
    if (n01 > N)
      return {false, std::to_string(n01) + " beams starting 01 at N = " +
                         std::to_string(N)};
    if (ntot > N + 1)
      return {false, std::to_string(ntot) + " beams of S at N = " +
                         std::to_string(N)};
    max01 = std::max(max01, n01);
    maxtot = std::max(maxtot, ntot);
  }
  double dt = seconds_since(t0);
  if (dt >= 60.0) return {false, "runtime " + fmt(dt) + " s (limit 60)"};
  return {true, "N = 1..10 twice, max 01-count " + std::to_string(max01) +
                    ", max |S| split " + std::to_string(maxtot) +
                    ", runtime " + fmt(dt) + " s"};
}

std::pair<bool, std::string> crit_theorem1() {
  int level0 = 0, diagonal = 0;
  for (const char* a : {"0.7", "pi/5", "0.75"}) {
    for (long prec : {128L, 256L}) {
      TriangleConfig cfg = make_triangle(a, prec, 4 * prec);
      Iv tol = Iv::pow2(prec == 128 ? -80 : -180, prec);
      BeamSet bs = decompose_band(cfg, 0, 8);
      for (const Beam& b : bs.beams) {
        if (b.degenerate || !b.returning()) continue;
        if (b.term == Beam::Term::Diagonal) {
          // rational-angle half-period return through a horizontal diagonal
          // image: certified periodic by the perpendicular re-crossing; the
          // level-0 palindrome mechanism does not apply (see ledger)
          if (prec == 128) ++diagonal;
          if (!b.palindromic)
            return {false, std::string("diagonal beam not point-symmetric "
                                       "at alpha = ") +
                               a + ": " + b.code.str()};
          continue;
        }
        bool s1 = b.palindromic && b.p() % 2 == 0;
        std::optional<Iv> res = center_hit_report(b);
        bool s2 = res.has_value() && certainly_less(*res, tol);
        bool s3 = half_period_symmetry(cfg, b);
        if (!(s1 == s2 && s2 == s3))
          return {false, std::string("three-way disagreement at alpha = ") +
                             a + ", beam " + b.code.str()};
        if (!s1)
          return {false, std::string("returning beam fails Theorem 1 at "
                                     "alpha = ") +
                             a + ": " + b.code.str() + " residual " +
                             (res ? fmt(res->hi_d()) : "none")};
        if (prec == 128) ++level0;
      }
    }
  }
  return {true, std::to_string(level0) +
                    " level-0 beams pass all three predicates at both "
                    "precisions; " +
                    std::to_string(diagonal) +
                    " diagonal-return beams certified separately"};
}

std::pair<bool, std::string> crit_exceptional() {
  TriangleConfig cfg = make_triangle("0.7", 128);
  for (int N = 1; N <= 10; ++N) {
    BeamSet bs = decompose_band(cfg, 0, N);
    std::pair<Beam, Beam> ud = find_exceptional(bs);  // throws if not unique
    std::vector<int> rev(ud.first.code.entries.rbegin(),
                         ud.first.code.entries.rend());
    if (rev != ud.second.code.entries)
      return {false, "down code is not the reverse of the up code at N = " +
                         std::to_string(N) + ": up " + ud.first.code.str() +
                         ", down " + ud.second.code.str()};
  }
  return {true, "one up + one down escaper, reversed codes, N = 1..10"};
}

std::pair<bool, std::string> crit_brackets() {
  TriangleConfig cfg = make_triangle("0.7", 128);
  double wsum = 0;
  for (bool positive : {true, false}) {
    EscapeBracketSeq seq = escape_bracket(cfg, 12, positive);
    if (!seq.nested_certified)
      return {false, std::string("bracket sequence not certified nested (") +
                         (positive ? "up" : "down") + ")"};
    wsum += seq.entries.back().width().hi_d();
  }
  CoverageStats cov12 = coverage_fraction(cfg, 12);
  double missing = 1.0 - cov12.fraction.lo_d();
  double widths = wsum / cov12.total_length.lo_d();
  double slack = cov12.unresolved.hi_d() + 1e-9;
  if (std::fabs(missing - widths) > slack)
    return {false, "1 - coverage(12) = " + fmt(missing) +
                       " vs bracket widths " + fmt(widths) + " (slack " +
                       fmt(slack) + ")"};
  return {true, "nested to N = 12 both directions; 1 - coverage(12) = " +
                    fmt(missing) + " matches bracket widths " + fmt(widths)};
}

std::pair<bool, std::string> crit_coverage() {
  TriangleConfig cfg = make_triangle("0.7", 128);
  std::vector<CoverageStats> cov;
  double t15 = 0;
  for (int N = 1; N <= 15; ++N) {
    Clock::time_point t0 = Clock::now();
    cov.push_back(coverage_fraction(cfg, N));
    if (N == 15) t15 = seconds_since(t0);
  }
  for (int N = 1; N < 15; ++N)
    if (certainly_less(cov[N].fraction, cov[N - 1].fraction))
      return {false, "coverage not monotone at N = " + std::to_string(N + 1)};
  double c15 = cov[14].fraction.lo_d();
  if (!(c15 >= 0.99)) return {false, "coverage(15) = " + fmt(c15) + " < 0.99"};
  if (t15 >= 300.0)
    return {false, "coverage(15) runtime " + fmt(t15) + " s (limit 300)"};
  return {true, "coverage(15) = " + fmt(c15) +
                    ", monotone in N = 1..15, runtime " + fmt(t15) + " s"};
}

std::pair<bool, std::string> crit_ghost_iet() {
  TriangleConfig cfg = make_triangle("0.7", 128);
  Iv tol = Iv::pow2(-64, 128);
  int ghosts = 0;
  for (int N = 1; N <= 4; ++N) {
    ReturnMapPartition part = build_return_map(cfg, nullptr, -N, N);
    bool has_u = false;
    for (const RMInterval& iv : part.intervals)
      if (iv.cls == RMClass::U) has_u = true;
    if (!has_u)
      return {false, "U class empty at N = " + std::to_string(N) +
                         " (the return map would be a true IET)"};
    Iet iet = ghost_complete(part);  // throws LengthMismatch on gap mismatch
    for (const IetPiece& pc : iet.pieces) {
      Iv ds = pc.src_hi.enc() - pc.src_lo.enc();
      Iv dd = pc.dst_hi.enc() - pc.dst_lo.enc();
      Iv diff = ds - dd;
      if (certainly_less(tol, abs(diff)))
        return {false, "length-changing piece at N = " + std::to_string(N)};
      if (pc.ghost) ++ghosts;
    }
  }
  return {true, "bands 1..4: gaps paired, all pieces length-preserving, " +
                    std::to_string(ghosts) + " ghost pieces, U nonempty"};
}

std::pair<bool, std::string> crit_oracle() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> ux(-9999, 9999);
  int compared = 0;
  for (const char* a : {"0.55", "0.7", "0.75"}) {
    TriangleConfig cfg = make_triangle(a, 128);
    double ad = cfg.alpha_iv(64).mid_d();
    int per_alpha = 0;
    while (per_alpha < 40) {
      mpq_class s(ux(rng), 10000);
      if (s == 0) continue;
      naive::Result o = naive::trace(ad, mpq_class(s).get_d() * std::cos(ad),
                                     M_PI / 2, -8, 8);
      if (o.terminal == "vertex" || o.min_vertex_dist < 1e-6) continue;
      StopRule rule = o.terminal == "return" ? StopRule::first_return()
                                             : StopRule::band(-8, 8);
      Trajectory t = trace_ray(cfg, Coord::times_cos(s), rule);
      if (t.code.entries != o.code)
        return {false, std::string("code mismatch at alpha = ") + a +
                           ", s = " + s.get_str()};
      if (o.terminal == "return" &&
          (t.terminal != Terminal::ReturnedToLevel0 || !t.return_x ||
           std::fabs(t.return_x->mid_d() - o.return_x) > 1e-8))
        return {false, std::string("return mismatch at alpha = ") + a +
                           ", s = " + s.get_str()};
      if (o.terminal == "band" && t.terminal != Terminal::ReachedBandEdge)
        return {false, std::string("terminal mismatch at alpha = ") + a +
                           ", s = " + s.get_str()};
      ++per_alpha;
      ++compared;
    }
  }
  return {true, std::to_string(compared) +
                    " starts across 3 angles agree with the naive simulator"};
}

std::pair<bool, std::string> crit_rational() {
  TriangleConfig cfg = make_triangle("pi/5", 128);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> ux(-99999, 99999);
  int periodic = 0, returns0 = 0, diagonals = 0;
  while (periodic < 500) {
    mpq_class s(ux(rng), 100000);
    if (s == 0) continue;
    Trajectory t = trace_ray(cfg, Coord::times_cos(s),
                             StopRule::return_or_band(-1000, 1000));
    if (t.terminal == Terminal::VertexSingular) continue;  // singular start
    if (t.terminal == Terminal::ReturnedToLevel0)
      ++returns0;
    else if (t.terminal == Terminal::HorizontalDiagonal)
      ++diagonals;
    else
      return {false, "start " + s.get_str() + " cos(a) not certified "
                     "periodic: " + to_string(t.terminal)};
    ++periodic;
  }
  return {true, "500 nonsingular starts certified periodic (" +
                    std::to_string(returns0) + " level-0 returns, " +
                    std::to_string(diagonals) + " diagonal returns)"};
}

std::pair<bool, std::string> crit_gas() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<long> um(1000, 2000);
  std::uniform_int_distribution<long> ur(1000, 5000);
  long total = 0;
  for (int i = 0; i < 10; ++i) {
    mpq_class m1q(um(rng), 1000);
    long ratio = ur(rng);
    mpq_class m2q = m1q * ratio;
    GasAngle ga = gas_map(m1q, m2q);
    double m1 = m1q.get_d(), m2 = m1 * ratio;
    double x1 = 0.4 + 0.01 * i, x2 = 1.0, v1 = 0.0, v2 = -1.0;
    naive::GasResult oracle = naive::gas(m1, m2, x1, x2, v1, v2, 2000);
    std::string mine = gas_event_sequence(ga, m1, m2, x1, x2, v1, v2, 2000);
    if (oracle.events.size() < 50)
      return {false, "oracle produced only " +
                         std::to_string(oracle.events.size()) + " events"};
    if (mine != oracle.events)
      return {false, "event mismatch for masses " + m1q.get_str() + ", " +
                         m2q.get_str()};
    total += static_cast<long>(oracle.events.size());
  }
  return {true, "10 mass pairs, " + std::to_string(total) +
                    " events reproduced exactly"};
}

}  // namespace

int main() {
  criterion(1, "g_L-loop", crit_gl_loop);
  criterion(2, "beam-counts", crit_beam_counts);
  criterion(3, "theorem1-three-way", crit_theorem1);
  criterion(4, "exceptional-uniqueness", crit_exceptional);
  criterion(5, "escape-bracketing", crit_brackets);
  criterion(6, "coverage", crit_coverage);
  criterion(7, "ghost-iet-soundness", crit_ghost_iet);
  criterion(8, "oracle-equivalence", crit_oracle);
  criterion(9, "rational-sanity", crit_rational);
  criterion(10, "two-particle-equivalence", crit_gas);
  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
