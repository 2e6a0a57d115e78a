#include "rtb/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rtb {

namespace {

struct Quad {
  double x[4], y[4];
  double cx, cy;
  int level;
};

const char* level_color(int level) {
  static const char* palette[8] = {"#bfd7ea", "#c7e5c0", "#f6d6ad",
                                   "#e8c4dd", "#d8d4f2", "#f2c9c9",
                                   "#cfe8e5", "#e4e0b8"};
  return palette[((level % 8) + 8) % 8];
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

/// Copy chain visited by the vertical ray x0 (frame coordinates) following
/// `levels`; rendering-grade double arithmetic on the certified enclosures.
std::vector<Quad> walk_code(GeoCtx& ctx, double x0,
                            const std::vector<int>& levels, CopyState seed) {
  std::vector<Quad> quads;
  CopyState cp = seed;
  int entry = -1;
  for (size_t i = 0; i < levels.size(); ++i) {
    Quad q;
    for (int j = 0; j < 4; ++j) {
      XComplex v = vertex_image(ctx, cp, j);
      q.x[j] = v.enc.re.mid_d();
      q.y[j] = v.enc.im.mid_d();
    }
    q.cx = cp.v.enc.re.mid_d();
    q.cy = cp.v.enc.im.mid_d();
    q.level = cp.level;
    quads.push_back(q);
    if (i + 1 == levels.size()) break;
    int chosen = -1;
    for (int e = 0; e < 4; ++e) {
      if (e == entry) continue;
      double xa = q.x[kEdges[e].first], xb = q.x[kEdges[e].second];
      bool crosses = (std::min(xa, xb) < x0) && (x0 < std::max(xa, xb));
      CopyState cand = reflect_copy(ctx, cp, e);
      if (cand.level != levels[i + 1]) continue;
      if (crosses || chosen < 0) {
        chosen = e;
        if (crosses) break;
      }
    }
    if (chosen < 0) break;  // inconsistent code; draw what we have
    cp = reflect_copy(ctx, cp, chosen);
    entry = chosen;
  }
  return quads;
}

CopyState canonical_seed(GeoCtx& ctx, int level) {
  CopyState cp;
  cp.level = level;
  cp.rev = (std::abs(level) % 2) == 1;
  cp.v = ctx.zero_complex();
  return cp;
}

struct Scene {
  std::ostringstream body;
  double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;

  void grow(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  void add_quad(const Quad& q, double opacity) {
    body << "<polygon points=\"";
    for (int j = 0; j < 4; ++j) {
      if (j) body << ' ';
      body << num(q.x[j]) << ',' << num(-q.y[j]);
      grow(q.x[j], -q.y[j]);
    }
    body << "\" fill=\"" << level_color(q.level)
         << "\" fill-opacity=\"" << num(opacity)
         << "\" stroke=\"#333333\" stroke-width=\"0.006\"/>\n";
    body << "<circle cx=\"" << num(q.cx) << "\" cy=\"" << num(-q.cy)
         << "\" r=\"0.012\" fill=\"#222222\"/>\n";
  }
  void add_label(double x, double y, const std::string& text) {
    body << "<text x=\"" << num(x) << "\" y=\"" << num(-y)
         << "\" font-size=\"0.12\" text-anchor=\"middle\" "
            "fill=\"#111111\">" << text << "</text>\n";
  }
  void add_vline(double x, double y0, double y1, const char* color,
                 bool dashed, double width) {
    body << "<line x1=\"" << num(x) << "\" y1=\"" << num(-y0) << "\" x2=\""
         << num(x) << "\" y2=\"" << num(-y1) << "\" stroke=\"" << color
         << "\" stroke-width=\"" << num(width) << "\"";
    if (dashed) body << " stroke-dasharray=\"0.04,0.03\"";
    body << "/>\n";
    grow(x, -y0);
    grow(x, -y1);
  }
  void add_band(double x0, double x1, double y0, double y1,
                const char* color) {
    body << "<rect x=\"" << num(std::min(x0, x1)) << "\" y=\""
         << num(std::min(-y0, -y1)) << "\" width=\""
         << num(std::fabs(x1 - x0)) << "\" height=\""
         << num(std::fabs(y1 - y0)) << "\" fill=\"" << color
         << "\" fill-opacity=\"0.25\"/>\n";
  }
  std::string finish() const {
    double mx = xmax > xmin ? xmax : 1.0, my = ymax > ymin ? ymax : 1.0;
    double x0 = xmax > xmin ? xmin : 0.0, y0 = ymax > ymin ? ymin : 0.0;
    double pad = 0.1;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "viewBox=\""
        << num(x0 - pad) << ' ' << num(y0 - pad) << ' '
        << num(mx - x0 + 2 * pad) << ' ' << num(my - y0 + 2 * pad) << "\">\n"
        << body.str() << "</svg>\n";
    return out.str();
  }
};

}  // namespace

std::string render_unfolding_svg(const TriangleConfig& cfg,
                                 const Trajectory& t, const AngleSpec* theta) {
  if (t.code.empty()) return render_empty_svg();
  GeoCtx ctx(cfg, 64, theta);
  double x0 = ctx.frame_x(t.start_x).enc().mid_d();
  std::vector<Quad> quads =
      walk_code(ctx, x0, t.code.entries, CopyState::base(ctx));
  Scene sc;
  double ylo = 0, yhi = 0;
  for (const Quad& q : quads) {
    sc.add_quad(q, 0.45);
    for (int j = 0; j < 4; ++j) {
      ylo = std::min(ylo, q.y[j]);
      yhi = std::max(yhi, q.y[j]);
    }
    sc.add_label(q.cx + 0.18, q.cy + 0.18, std::to_string(q.level));
  }
  bool singular = t.terminal == Terminal::VertexSingular;
  sc.add_vline(x0, ylo, yhi, singular ? "#b22222" : "#1f4f9f", singular,
               0.012);
  return sc.finish();
}

std::string render_unfolding_svg(const TriangleConfig& cfg, const BeamSet& bs) {
  if (bs.beams.empty()) return render_empty_svg();
  GeoCtx ctx(cfg, 64, nullptr);
  Scene sc;
  double ylo = 0, yhi = 0;
  static const char* beam_colors[6] = {"#1f77b4", "#2ca02c", "#d62728",
                                       "#9467bd", "#8c564b", "#e377c2"};
  int bi = 0;
  for (size_t i = 0; i < bs.beams.size(); ++i) {
    const Beam& b = bs.beams[i];
    if (b.degenerate) continue;
    Side side = bs.beam_side[i];
    CopyState seed = (side == Side::S0Pos || side == Side::S0Neg)
                         ? CopyState::base(ctx)
                         : canonical_seed(ctx, b.code.entries.front());
    double lo = b.lo.enc().mid_d(), hi = b.hi.enc().mid_d();
    double mid = 0.5 * (lo + hi);
    std::vector<Quad> quads = walk_code(ctx, mid, b.code.entries, seed);
    double qlo = 0, qhi = 0;
    for (const Quad& q : quads) {
      sc.add_quad(q, 0.3);
      for (int j = 0; j < 4; ++j) {
        qlo = std::min(qlo, q.y[j]);
        qhi = std::max(qhi, q.y[j]);
      }
    }
    ylo = std::min(ylo, qlo);
    yhi = std::max(yhi, qhi);
    sc.add_band(lo, hi, qlo, qhi, beam_colors[bi % 6]);
    ++bi;
  }
  for (const SplitPoint& s : bs.splits)
    sc.add_vline(s.x.enc().mid_d(), ylo, yhi, "#b22222", true, 0.008);
  return sc.finish();
}

std::string render_empty_svg() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "viewBox=\"0 0 1 1\"></svg>\n";
}

}  // namespace rtb
