#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "naive_sim.hpp"
#include "rtb/trace.hpp"

using namespace rtb;

namespace {
double alpha_of(const TriangleConfig& c) { return c.alpha_iv(64).mid_d(); }
}  // namespace

TEST_CASE("leftmost orbit has code 0 1 0") {
  for (const char* a : {"0.55", "0.6", "0.7", "0.75", "pi/5", "2*pi/9"}) {
    TriangleConfig cfg = make_triangle(a, 128);
    Trajectory t = trace_ray(cfg, Coord::times_cos(mpq_class(-9, 10)),
                             StopRule::first_return());
    CHECK(t.terminal == Terminal::ReturnedToLevel0);
    CHECK(t.code.str() == "0 1 0");
    REQUIRE(t.return_x.has_value());
    // the return map near the left end reflects towards the interior
    naive::Result o = naive::trace(alpha_of(cfg), -0.9 * std::cos(alpha_of(cfg)),
                                   M_PI / 2, -50, 50);
    REQUIRE(o.terminal == "return");
    CHECK(std::fabs(t.return_x->mid_d() - o.return_x) < 1e-9);
  }
}

TEST_CASE("x0 = 0 is singular at the top vertex") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  Trajectory t = trace_ray(cfg, Coord::rational(0), StopRule::first_return());
  CHECK(t.terminal == Terminal::VertexSingular);
  CHECK(t.vertex_id == 1);
  CHECK(t.code.str() == "0");
}

TEST_CASE("horizontal-diagonal stop certifies periodicity at pi/5") {
  TriangleConfig cfg = make_triangle("pi/5", 128);
  REQUIRE(cfg.field != nullptr);
  CHECK(cfg.field->diagonal_period() == 5);
  Trajectory t = trace_ray(cfg, Coord::times_cos(mpq_class(3, 10)),
                           StopRule::horizontal());
  CHECK(t.terminal == Terminal::HorizontalDiagonal);
  CHECK(t.code.valid());
  // the folded oracle, stopping on diagonal crossings at levels = 0 mod 5,
  // sees the same copy sequence
  double a = M_PI / 5;
  naive::Result o =
      naive::trace(a, 0.3 * std::cos(a), M_PI / 2, -1000, 1000, 100000, 5);
  REQUIRE(o.terminal == "return");
  CHECK(t.code.entries == o.code);
}

TEST_CASE("band stop ends at the band edge") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  Trajectory t = trace_ray(cfg, Coord::times_cos(mpq_class(-43, 100)),
                           StopRule::band(-4, 4));
  CHECK(t.terminal == Terminal::ReachedBandEdge);
  CHECK(t.code.valid());
  int last = t.code.entries.back();
  CHECK((last == 4 || last == -4));
  naive::Result o = naive::trace(0.7, -0.43 * std::cos(0.7), M_PI / 2, -4, 4);
  CHECK(t.code.entries == o.code);
}

TEST_CASE("precision ladder is consistent") {
  TriangleConfig c128 = make_triangle("0.7", 128);
  TriangleConfig c256 = make_triangle("0.7", 256);
  Coord x = Coord::times_cos(mpq_class(-43, 100));
  Trajectory a = trace_ray(c128, x, StopRule::first_return());
  Trajectory b = trace_ray(c256, x, StopRule::first_return());
  CHECK(a.terminal == b.terminal);
  CHECK(a.code.entries == b.code.entries);
  REQUIRE(a.return_x.has_value());
  REQUIRE(b.return_x.has_value());
  CHECK(overlap(*a.return_x, *b.return_x));
  CHECK(b.return_x->width_d() <= a.return_x->width_d());
}

TEST_CASE("explicit vertical direction equals the perpendicular default") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  AngleSpec up = AngleSpec::parse("pi/2");
  Coord x = Coord::times_cos(mpq_class(1, 4));
  Trajectory a = trace_ray(cfg, x, StopRule::first_return());
  Trajectory b = trace_ray(cfg, x, StopRule::first_return(), &up);
  CHECK(a.code.entries == b.code.entries);
  CHECK(a.terminal == b.terminal);
  REQUIRE(b.return_x.has_value());
  CHECK(overlap(*a.return_x, *b.return_x));
}

TEST_CASE("oblique direction reproduces the split beam codes") {
  // At alpha = 0.1, direction pi/2 + 0.264, adjacent starts fall on the two
  // sides of a vertex shadow: codes 0 1 2 1 2 1 0 and 0 1 2 1 0.
  TriangleConfig cfg = make_triangle("0.1", 128);
  AngleSpec th = AngleSpec::parse("pi/2 + 0.264");
  Trajectory a = trace_ray(cfg, Coord::rational(mpq_class(2, 100)),
                           StopRule::first_return(), &th);
  CHECK(a.terminal == Terminal::ReturnedToLevel0);
  CHECK(a.code.str() == "0 1 2 1 2 1 0");
  Trajectory b = trace_ray(cfg, Coord::rational(mpq_class(255, 10000)),
                           StopRule::first_return(), &th);
  CHECK(b.terminal == Terminal::ReturnedToLevel0);
  CHECK(b.code.str() == "0 1 2 1 0");
  // oracle agreement, including the return position
  naive::Result o =
      naive::trace(0.1, 0.02, M_PI / 2 + 0.264, -1000, 1000);
  REQUIRE(o.terminal == "return");
  CHECK(a.code.entries == o.code);
  CHECK(std::fabs(a.return_x->mid_d() - o.return_x) < 1e-9);
}

TEST_CASE("edge events have increasing heights for vertical rays") {
  TriangleConfig cfg = make_triangle("0.7", 128);
  Trajectory t = trace_ray(cfg, Coord::times_cos(mpq_class(31, 100)),
                           StopRule::band(-6, 6), nullptr, true);
  REQUIRE(t.events.size() == t.code.entries.size() - 1);
  for (size_t i = 1; i < t.events.size(); ++i)
    CHECK(t.events[i].y.mid_d() > t.events[i - 1].y.mid_d());
  CHECK(t.events.front().y.mid_d() > 0.0);
}

TEST_CASE("oracle agreement across a sweep of starts") {
  const char* angles[] = {"0.62", "0.7", "0.75"};
  for (const char* a : angles) {
    TriangleConfig cfg = make_triangle(a, 128);
    double ad = alpha_of(cfg);
    int compared = 0, undecided = 0;
    for (int k = -19; k <= 19; ++k) {
      if (k == 0) continue;
      mpq_class s(k, 20);
      naive::Result o = naive::trace(ad, mpq_class(s).get_d() * std::cos(ad),
                                     M_PI / 2, -8, 8);
      if (o.terminal == "vertex") continue;
      // the oracle stops at a return or a band edge, whichever comes first;
      // pick the engine rule that matches its verdict
      StopRule rule = o.terminal == "return" ? StopRule::first_return()
                                             : StopRule::band(-8, 8);
      Trajectory t = trace_ray(cfg, Coord::times_cos(s), rule);
      if (t.terminal == Terminal::Undecided) {
        ++undecided;
        continue;
      }
      if (o.terminal == "return") {
        CHECK(t.terminal == Terminal::ReturnedToLevel0);
        REQUIRE(t.return_x.has_value());
        CHECK(std::fabs(t.return_x->mid_d() - o.return_x) < 1e-8);
      } else if (o.terminal == "band") {
        CHECK(t.terminal == Terminal::ReachedBandEdge);
      }
      CHECK(t.code.entries == o.code);
      ++compared;
    }
    CHECK(compared >= 30);
    CHECK(undecided == 0);
  }
}
