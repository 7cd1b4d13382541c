#include "anharm/contour.hpp"

#include <array>
#include <unordered_map>

#include "anharm/error.hpp"

namespace anharm::contour {
namespace {

struct Segment {
  long edge[2];
  cplx point[2];
};

enum Side { bottom, right, top, left };

long edge_key(const Grid& g, int ix, int iy, Side side) {
  switch (side) {
    case bottom: return 2L * (static_cast<long>(iy) * g.nx + ix);
    case top: return 2L * (static_cast<long>(iy + 1) * g.nx + ix);
    case left: return 2L * (static_cast<long>(iy) * g.nx + ix) + 1;
    case right: return 2L * (static_cast<long>(iy) * g.nx + ix + 1) + 1;
  }
  return -1;
}

cplx crossing(const Grid& g, int ix, int iy, Side side, double level) {
  int ax = ix, ay = iy, bx = ix, by = iy;
  switch (side) {
    case bottom: bx = ix + 1; break;
    case top: ay = by = iy + 1; bx = ix + 1; break;
    case left: by = iy + 1; break;
    case right: ax = bx = ix + 1; by = iy + 1; break;
  }
  const double fa = g.at(ax, ay);
  const double fb = g.at(bx, by);
  const double s = (level - fa) / (fb - fa);
  return g.point(ax, ay) + s * (g.point(bx, by) - g.point(ax, ay));
}

}  // namespace

double polyline_length(const std::vector<cplx>& vertices) {
  double total = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) total += std::abs(vertices[i] - vertices[i - 1]);
  return total;
}

std::vector<Polyline> level_lines(const Grid& g, double level) {
  if (g.nx < 2 || g.ny < 2 || g.values.size() != static_cast<std::size_t>(g.nx) * g.ny) {
    throw Error(ErrorKind::config_error, "contour grid needs at least 2 x 2 samples");
  }
  std::vector<Segment> segments;
  auto add = [&](int ix, int iy, Side a, Side b) {
    segments.push_back({{edge_key(g, ix, iy, a), edge_key(g, ix, iy, b)},
                        {crossing(g, ix, iy, a, level), crossing(g, ix, iy, b, level)}});
  };
  for (int iy = 0; iy + 1 < g.ny; ++iy) {
    for (int ix = 0; ix + 1 < g.nx; ++ix) {
      const double v00 = g.at(ix, iy), v10 = g.at(ix + 1, iy);
      const double v11 = g.at(ix + 1, iy + 1), v01 = g.at(ix, iy + 1);
      const int mask = (v00 > level) | (v10 > level) << 1 | (v11 > level) << 2 | (v01 > level) << 3;
      const bool centre = 0.25 * (v00 + v10 + v11 + v01) > level;
      switch (mask) {
        case 0: case 15: break;
        case 1: case 14: add(ix, iy, left, bottom); break;
        case 2: case 13: add(ix, iy, bottom, right); break;
        case 4: case 11: add(ix, iy, right, top); break;
        case 8: case 7: add(ix, iy, top, left); break;
        case 3: case 12: add(ix, iy, left, right); break;
        case 6: case 9: add(ix, iy, bottom, top); break;
        case 5:
          if (centre) {
            add(ix, iy, bottom, right);
            add(ix, iy, top, left);
          } else {
            add(ix, iy, left, bottom);
            add(ix, iy, right, top);
          }
          break;
        case 10:
          if (centre) {
            add(ix, iy, left, bottom);
            add(ix, iy, right, top);
          } else {
            add(ix, iy, bottom, right);
            add(ix, iy, top, left);
          }
          break;
      }
    }
  }

  std::unordered_map<long, std::array<int, 2>> by_edge;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    for (long e : segments[s].edge) {
      auto [it, fresh] = by_edge.try_emplace(e, std::array<int, 2>{-1, -1});
      (it->second[0] < 0 ? it->second[0] : it->second[1]) = s;
    }
  }
  auto other = [&](long edge, int s) {
    const auto& pair = by_edge.at(edge);
    return pair[0] == s ? pair[1] : pair[0];
  };

  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> lines;
  for (int start = 0; start < static_cast<int>(segments.size()); ++start) {
    if (used[start]) continue;
    used[start] = true;
    std::vector<cplx> forward = {segments[start].point[0], segments[start].point[1]};
    const long start_edge = segments[start].edge[0];
    long edge = segments[start].edge[1];
    int current = start;
    bool closed = false;
    while (true) {
      if (edge == start_edge) {
        closed = true;
        break;
      }
      const int next = other(edge, current);
      if (next < 0 || used[next]) break;
      used[next] = true;
      const int side = segments[next].edge[0] == edge ? 0 : 1;
      forward.push_back(segments[next].point[1 - side]);
      edge = segments[next].edge[1 - side];
      current = next;
    }
    if (!closed) {
      // walk backwards from the start to the other open end
      std::vector<cplx> backward;
      edge = start_edge;
      current = start;
      while (true) {
        const int next = other(edge, current);
        if (next < 0 || used[next]) break;
        used[next] = true;
        const int side = segments[next].edge[0] == edge ? 0 : 1;
        backward.push_back(segments[next].point[1 - side]);
        edge = segments[next].edge[1 - side];
        current = next;
      }
      forward.insert(forward.begin(), backward.rbegin(), backward.rend());
    } else {
      forward.back() = forward.front();
    }
    Polyline line;
    line.vertices = std::move(forward);
    line.closed = closed;
    line.perimeter = polyline_length(line.vertices);
    lines.push_back(std::move(line));
  }
  return lines;
}

bool encloses(const Polyline& line, cplx p) {
  if (!line.closed) return false;
  bool inside = false;
  const auto& v = line.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const bool crosses = (v[i].imag() > p.imag()) != (v[j].imag() > p.imag());
    if (crosses) {
      const double x = v[j].real() + (p.imag() - v[j].imag()) * (v[i].real() - v[j].real()) / (v[i].imag() - v[j].imag());
      if (p.real() < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace anharm::contour
