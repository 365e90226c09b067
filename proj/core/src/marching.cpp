#include "lowcon/marching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace lowcon {

namespace {

// Edge keys: t=0 horizontal edge from node (i,j) to (i+1,j), t=1 vertical
// edge from node (i,j) to (i,j+1).
std::int64_t edge_key(int i, int j, int t, int nw) {
  return (static_cast<std::int64_t>(j) * nw + i) * 2 + t;
}

struct Segment {
  std::int64_t a, b;
};

double interp(double v0, double v1, double level) {
  const double den = v1 - v0;
  if (den == 0.0) return 0.5;
  return std::clamp((level - v0) / den, 0.0, 1.0);
}

}  // namespace

double polyline_length(const Polyline& p) {
  double L = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) L += norm(p[i] - p[i - 1]);
  return L;
}

std::vector<Polyline> marching_squares(int nw, int nh,
                                       const std::function<double(int, int)>& value,
                                       double level, double ox, double oy,
                                       double sx, double sy) {
  std::vector<Polyline> out;
  if (nw < 2 || nh < 2) return out;

  std::unordered_map<std::int64_t, Vec2> points;
  std::vector<Segment> segs;

  auto crossing = [&](int i, int j, int t) {
    const std::int64_t key = edge_key(i, j, t, nw);
    if (!points.count(key)) {
      if (t == 0) {
        const double s = interp(value(i, j), value(i + 1, j), level);
        points[key] = {ox + (i + s) * sx, oy + j * sy};
      } else {
        const double s = interp(value(i, j), value(i, j + 1), level);
        points[key] = {ox + i * sx, oy + (j + s) * sy};
      }
    }
    return key;
  };

  for (int j = 0; j + 1 < nh; ++j) {
    for (int i = 0; i + 1 < nw; ++i) {
      const double v00 = value(i, j), v10 = value(i + 1, j);
      const double v11 = value(i + 1, j + 1), v01 = value(i, j + 1);
      int code = 0;
      if (v00 > level) code |= 1;
      if (v10 > level) code |= 2;
      if (v11 > level) code |= 4;
      if (v01 > level) code |= 8;
      if (code == 0 || code == 15) continue;

      auto B = [&] { return crossing(i, j, 0); };
      auto R = [&] { return crossing(i + 1, j, 1); };
      auto T = [&] { return crossing(i, j + 1, 0); };
      auto L = [&] { return crossing(i, j, 1); };

      auto add = [&](std::int64_t a, std::int64_t b) { segs.push_back({a, b}); };

      switch (code) {
        case 1: case 14: add(L(), B()); break;
        case 2: case 13: add(B(), R()); break;
        case 3: case 12: add(L(), R()); break;
        case 4: case 11: add(R(), T()); break;
        case 6: case 9:  add(B(), T()); break;
        case 7: case 8:  add(T(), L()); break;
        case 5: case 10: {
          const double center = 0.25 * (v00 + v10 + v11 + v01);
          const bool center_in = center > level;
          // pair the crossings so that inside corners stay on one side
          if ((code == 5) == center_in) {
            add(L(), T());
            add(R(), B());
          } else {
            add(L(), B());
            add(R(), T());
          }
          break;
        }
        default: break;
      }
    }
  }

  // chain segments end-to-end
  std::unordered_map<std::int64_t, std::vector<int>> adj;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    adj[segs[s].a].push_back(s);
    adj[segs[s].b].push_back(s);
  }
  std::vector<char> used(segs.size(), 0);

  auto walk = [&](int start, std::int64_t from) {
    std::vector<std::int64_t> keys;
    keys.push_back(from);
    int cur = start;
    std::int64_t at = from;
    while (true) {
      used[cur] = 1;
      at = (segs[cur].a == at) ? segs[cur].b : segs[cur].a;
      keys.push_back(at);
      int next = -1;
      for (int cand : adj[at])
        if (!used[cand]) {
          next = cand;
          break;
        }
      if (next < 0) break;
      cur = next;
    }
    return keys;
  };

  auto sample = [&](double x, double y) {
    double u = (x - ox) / sx, v = (y - oy) / sy;
    int i = std::clamp(static_cast<int>(std::floor(u)), 0, nw - 2);
    int j = std::clamp(static_cast<int>(std::floor(v)), 0, nh - 2);
    const double fu = std::clamp(u - i, 0.0, 1.0), fv = std::clamp(v - j, 0.0, 1.0);
    return value(i, j) * (1 - fu) * (1 - fv) + value(i + 1, j) * fu * (1 - fv) +
           value(i, j + 1) * (1 - fu) * fv + value(i + 1, j + 1) * fu * fv;
  };

  auto emit = [&](const std::vector<std::int64_t>& keys) {
    Polyline line;
    line.reserve(keys.size());
    for (std::int64_t k : keys) line.push_back(points[k]);
    // orient so the high side is on the left
    double vote = 0.0;
    const double eps = 0.25 * std::min(sx, sy);
    for (std::size_t s = 1; s < line.size(); ++s) {
      const Vec2 d = line[s] - line[s - 1];
      const double len = norm(d);
      if (len == 0.0) continue;
      const Vec2 mid{0.5 * (line[s].x + line[s - 1].x),
                     0.5 * (line[s].y + line[s - 1].y)};
      const Vec2 left{-d.y / len, d.x / len};
      vote += sample(mid.x + eps * left.x, mid.y + eps * left.y) - level;
    }
    if (vote < 0.0) std::reverse(line.begin(), line.end());
    out.push_back(std::move(line));
  };

  // open chains first: start at degree-1 endpoints
  for (auto& [key, ids] : adj) {
    int free_count = 0;
    int free_seg = -1;
    for (int s : ids)
      if (!used[s]) {
        ++free_count;
        free_seg = s;
      }
    if (free_count == 1) emit(walk(free_seg, key));
  }
  // remaining segments form closed loops
  for (int s = 0; s < static_cast<int>(segs.size()); ++s)
    if (!used[s]) emit(walk(s, segs[s].a));

  return out;
}

}  // namespace lowcon
