#pragma once
/**
 * @file naive_sim.hpp
 * @brief Plain double-precision reference simulators used only by the tests.
 *
 * Deliberately independent of the library: the billiard is simulated in the
 * *folded* picture (an actual ray bouncing inside the rhombus, via
 * segment-edge intersections and mirror reflection), whereas the library
 * works in the unfolded picture with certified interval/exact arithmetic.
 * Only the copy-labelling convention (which bounce raises the level) is
 * shared, since codes are meaningless without it.
 */

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace naive {

struct Result {
  std::vector<int> code;      // level sequence, starts with 0
  std::string terminal;       // "return" | "band" | "budget"
  double return_x = 0.0;      // crossing position on the diagonal (terminal=="return")
  int steps = 0;
  double min_vertex_dist = 1e300;  // closest approach to any rhombus vertex
};

// Folded billiard in the rhombus with vertices (c,0),(0,s),(-c,0),(0,-s).
// Start on the horizontal diagonal at x0, direction theta (pi/2 = straight
// up).  Stops on a level-`stop_mod`-multiple diagonal crossing (first
// return; stop_mod=0 means plain level 0), on reaching band edge M or N, or
// on the step budget.
inline Result trace(double alpha, double x0, double theta, int M, int N,
                    int budget = 100000, int stop_mod = 0) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  const std::array<std::array<double, 2>, 4> V{{{c, 0}, {0, s}, {-c, 0}, {0, -s}}};
  const std::array<std::array<int, 2>, 4> E{{{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  const std::array<bool, 4> plus_family{false, true, false, true};

  double px = x0, py = 0.0;
  double dx = std::cos(theta), dy = std::sin(theta);
  int level = 0;
  bool rev = false;
  Result r;
  r.code.push_back(0);

  for (int step = 0; step < budget; ++step) {
    // nearest edge intersection along the ray
    double best_t = 1e300, best_u = 0;
    int best_e = -1;
    for (int e = 0; e < 4; ++e) {
      double ax = V[E[e][0]][0], ay = V[E[e][0]][1];
      double bx = V[E[e][1]][0], by = V[E[e][1]][1];
      double ex = bx - ax, ey = by - ay;
      double det = dx * ey - dy * ex;
      if (std::fabs(det) < 1e-15) continue;
      double t = ((ax - px) * ey - (ay - py) * ex) / det;
      double u = ((ax - px) * dy - (ay - py) * dx) / det;
      if (t > 1e-12 && u > -1e-12 && u < 1 + 1e-12 && t < best_t) {
        best_t = t;
        best_u = u;
        best_e = e;
      }
    }
    if (best_e < 0) {
      r.terminal = "budget";  // should not happen for interior starts
      r.steps = step;
      return r;
    }
    double qx = px + best_t * dx, qy = py + best_t * dy;

    // diagonal crossing strictly inside the flight segment?
    if (py != 0.0 && ((py < 0) != (qy < 0) || qy == 0.0)) {
      double tz = -py / dy;  // dy != 0 since py changes sign
      double xz = px + tz * dx;
      if (std::fabs(xz) < c) {
        int mod = stop_mod > 0 ? stop_mod : 1;
        bool hit = stop_mod > 0 ? (level % mod == 0) : (level == 0);
        if (hit) {
          r.terminal = "return";
          r.return_x = xz;
          r.steps = step;
          return r;
        }
      }
    }

    {
      double ax = V[E[best_e][0]][0], ay = V[E[best_e][0]][1];
      double bx = V[E[best_e][1]][0], by = V[E[best_e][1]][1];
      double len = std::hypot(bx - ax, by - ay);
      double d = std::min(best_u, 1.0 - best_u) * len;
      if (d < r.min_vertex_dist) r.min_vertex_dist = d;
    }
    if (best_u < 1e-12 || best_u > 1 - 1e-12) {
      r.terminal = "vertex";
      r.steps = step;
      return r;
    }

    // bounce: update the copy label, then mirror the direction
    level += (plus_family[best_e] != rev) ? 1 : -1;
    rev = !rev;
    r.code.push_back(level);
    if (level == N || level == M) {
      r.terminal = "band";
      r.steps = step + 1;
      return r;
    }
    double ax = V[E[best_e][0]][0], ay = V[E[best_e][0]][1];
    double bx = V[E[best_e][1]][0], by = V[E[best_e][1]][1];
    double ex = bx - ax, ey = by - ay;
    double n2 = ex * ex + ey * ey;
    double dot = (dx * ex + dy * ey) / n2;
    dx = 2 * dot * ex - dx;
    dy = 2 * dot * ey - dy;
    px = qx;
    py = qy;
  }
  r.terminal = "budget";
  r.steps = budget;
  return r;
}

// Two point masses on the half line x >= 0 with an elastic wall at 0.
// Event-driven: returns the sequence of events, 'w' = light particle hits
// the wall, 'c' = the particles collide.
struct GasResult {
  std::string events;
  double x1, x2, v1, v2;  // final state
};

inline GasResult gas(double m1, double m2, double x1, double x2, double v1,
                     double v2, int max_events) {
  GasResult g;
  for (int k = 0; k < max_events; ++k) {
    double tw = (v1 < 0) ? -x1 / v1 : 1e300;           // particle 1 at wall
    double tc = (v1 > v2) ? (x2 - x1) / (v1 - v2) : 1e300;  // collision
    if (tw >= 1e300 && tc >= 1e300) break;  // both escape to +infinity
    if (tw < tc) {
      x1 += tw * v1;
      x2 += tw * v2;
      x1 = 0;
      v1 = -v1;
      g.events += 'w';
    } else {
      x1 += tc * v1;
      x2 += tc * v2;
      double u1 = ((m1 - m2) * v1 + 2 * m2 * v2) / (m1 + m2);
      double u2 = ((m2 - m1) * v2 + 2 * m1 * v1) / (m1 + m2);
      v1 = u1;
      v2 = u2;
      g.events += 'c';
    }
  }
  g.x1 = x1;
  g.x2 = x2;
  g.v1 = v1;
  g.v2 = v2;
  return g;
}

}  // namespace naive
