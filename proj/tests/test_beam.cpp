#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "naive_sim.hpp"
#include "rtb/beam.hpp"

using namespace rtb;

namespace {

bool encloses(const XReal& x, double v, double tol = 1e-6) {
  return x.enc().lo_d() <= v + tol && x.enc().hi_d() >= v - tol;
}

}  // namespace

TEST_CASE("one step from the full diagonal splits at the top vertex") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  std::vector<SplitPoint> splits;
  std::vector<Beam> bs =
      propagate_beam(cfg, Coord::times_cos(-1), Coord::times_cos(1),
                     StopRule::steps(1), nullptr, &splits);
  REQUIRE(bs.size() == 2);
  CHECK(bs[0].code.str() == "0 1");
  CHECK(bs[1].code.str() == "0 (-1)");
  CHECK(encloses(bs[0].hi, 0.0));
  CHECK(encloses(bs[1].lo, 0.0));
  REQUIRE(splits.size() == 1);
  CHECK(splits[0].vertex == 1);
  CHECK(encloses(splits[0].x, 0.0));
}

TEST_CASE("band 0..2 decomposition matches the frozen reference") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  BeamSet bs = decompose_band(cfg, 0, 2);
  auto s0 = bs.side(Side::S0Pos);
  REQUIRE(s0.size() == 2);
  // left to right
  CHECK(s0[0]->code.str() == "0 1 0");
  CHECK(s0[0]->term == Beam::Term::Return0);
  CHECK(encloses(s0[0]->lo, -0.7648421872844885));
  CHECK(encloses(s0[0]->hi, -0.5048461045998573));
  CHECK(encloses(s0[0]->jlo, 0.5048461045998572));
  CHECK(encloses(s0[0]->jhi, 0.7648421872844884));
  CHECK(s0[0]->palindromic);
  CHECK(s0[1]->code.str() == "0 1 2");
  CHECK(s0[1]->term == Beam::Term::LevelEdge);
  CHECK(s0[1]->arrival_level == 2);
  CHECK(s0[1]->exceptional_up);
  CHECK(encloses(s0[1]->hi, 0.0));
  // the split that separates them is the shadow of a vertex at level 1
  bool found = false;
  for (const auto& sp : bs.splits)
    if (encloses(sp.x, -0.5048461045998573, 1e-6)) found = true;
  CHECK(found);
  // the top family descends: unique N -> 0 companion
  auto top = bs.side(Side::STop);
  REQUIRE(!top.empty());
  auto [up, down] = find_exceptional(bs);
  CHECK(up.code.str() == "0 1 2");
  CHECK(down.code.entries == reversed(up.code).entries);
}

TEST_CASE("frozen S0+ beam counts at alpha = 0.7") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  const int expected[11] = {0, 1, 2, 2, 4, 4, 6, 6, 6, 6, 6};
  for (int N = 1; N <= 10; ++N) {
    BeamSet bs = decompose_band(cfg, 0, N);
    auto s0 = bs.side(Side::S0Pos);
    int nondeg = 0;
    for (auto* b : s0)
      if (!b->degenerate) ++nondeg;
    CHECK(nondeg == expected[N]);
    CHECK(nondeg <= N);
    int tot = 0;
    for (const auto& b : bs.beams)
      if (!b.degenerate) ++tot;
    CHECK(tot <= N + 1);
  }
}

TEST_CASE("band 0..8 codes match the frozen reference") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  BeamSet bs = decompose_band(cfg, 0, 8);
  auto s0 = bs.side(Side::S0Pos);
  REQUIRE(s0.size() == 6);
  CHECK(s0[0]->code.str() == "0 1 0");
  CHECK(s0[1]->code.str() == "0 1 2 3 2 3 2 1 0");
  CHECK(s0[2]->code.str() == "0 1 2 3 2 3 4 5 6 7 6 7 8");
  CHECK(s0[2]->exceptional_up);
  CHECK(s0[3]->p() == 64);
  CHECK(s0[4]->p() == 62);
  CHECK(s0[5]->code.str() == "0 1 2 3 2 1 0");
  CHECK(encloses(s0[2]->lo, -0.446260, 1e-5));
  CHECK(encloses(s0[2]->hi, -0.292886, 1e-5));
  // all returning beams are palindromic with even period and pass the
  // symmetry and center checks
  for (auto* b : s0) {
    if (!b->returning()) continue;
    CHECK(b->palindromic);
    CHECK(b->p() % 2 == 0);
    CHECK(half_period_symmetry(cfg, *b));
    if (b->p() > 2) {
      auto r = center_hit_report(*b);
      REQUIRE(r.has_value());
      CHECK(r->hi_d() < 1e-10);
    }
  }
  // the beams tile S0+ = (-cos a, 0) left to right
  CHECK(encloses(s0.front()->lo, -std::cos(0.7)));
  CHECK(encloses(s0.back()->hi, 0.0));
  for (size_t i = 1; i < s0.size(); ++i)
    CHECK(overlap(s0[i - 1]->hi.enc(), s0[i]->lo.enc()));
}

TEST_CASE("midpoints of beams agree with the folded oracle") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  BeamSet bs = decompose_band(cfg, 0, 6);
  for (auto* b : bs.side(Side::S0Pos)) {
    if (b->degenerate) continue;
    double mid = 0.5 * (b->lo.enc().mid_d() + b->hi.enc().mid_d());
    naive::Result o = naive::trace(0.7, mid, M_PI / 2, -1000, 6);
    REQUIRE((o.terminal == "return" || o.terminal == "band"));
    CHECK(b->code.entries == o.code);
  }
}

TEST_CASE("decomposition is stable under precision doubling") {
  for (const char* a : {"0.7", "pi/5"}) {
    TriangleConfig c1 = make_triangle(a, 128);
    TriangleConfig c2 = make_triangle(a, 256);
    BeamSet b1 = decompose_band(c1, 0, 5);
    BeamSet b2 = decompose_band(c2, 0, 5);
    REQUIRE(b1.beams.size() == b2.beams.size());
    for (size_t i = 0; i < b1.beams.size(); ++i) {
      CHECK(b1.beams[i].code.entries == b2.beams[i].code.entries);
      CHECK(b1.beam_side[i] == b2.beam_side[i]);
      CHECK(overlap(b1.beams[i].lo.enc(), b2.beams[i].lo.enc()));
    }
  }
}

TEST_CASE("rational-pi decomposition certifies its exact coincidences") {
  TriangleConfig cfg = make_triangle("pi/5", 128);
  BeamSet bs = decompose_band(cfg, 0, 3);
  CHECK(!bs.side(Side::S0Pos).empty());
  for (const auto& b : bs.beams) {
    CHECK(b.code.valid());
    if (!b.degenerate) CHECK(b.width().lo_d() > 0.0);
  }
  auto [up, down] = find_exceptional(bs);
  CHECK(up.arrival_level == 3);
}

TEST_CASE("oblique propagation splits on the frozen vertex shadow") {
  TriangleConfig cfg = make_triangle("0.1", 128);
  AngleSpec th = AngleSpec::parse("pi/2 + 0.264");
  std::vector<SplitPoint> splits;
  std::vector<Beam> bs = propagate_beam(
      cfg, Coord::rational(mpq_class(12, 1000)), Coord::rational(mpq_class(26, 1000)),
      StopRule::first_return(), &th, &splits);
  REQUIRE(bs.size() >= 2);
  // locate the adjacent pair around x = 0.0245198
  bool pair_found = false;
  for (size_t i = 0; i + 1 < bs.size(); ++i) {
    if (bs[i].code.str() == "0 1 2 1 2 1 0" && bs[i + 1].code.str() == "0 1 2 1 0") {
      pair_found = true;
      CHECK(encloses(bs[i].hi, 0.024519789, 1e-6));
    }
  }
  CHECK(pair_found);
}

TEST_CASE("negative band adds the mirrored families") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  BeamSet bs = decompose_band(cfg, -2, 2);
  CHECK(!bs.side(Side::S0Neg).empty());
  CHECK(!bs.side(Side::SBot).empty());
  // mirrored family codes are the reverse-negations of the positive ones
  auto pos = bs.side(Side::S0Pos);
  auto neg = bs.side(Side::S0Neg);
  REQUIRE(pos.size() == neg.size());
  for (size_t i = 0; i < pos.size(); ++i) {
    Code want = reverse_negate(pos[pos.size() - 1 - i]->code);
    std::reverse(want.entries.begin(), want.entries.end());
    CHECK(neg[i]->code.entries == want.entries);
  }
}
