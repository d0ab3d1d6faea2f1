#include "skewprod/slice.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "skewprod/errors.hpp"
#include "skewprod/format.hpp"

namespace skewprod {

using cd = std::complex<double>;

const std::array<std::array<int, 3>, 8> kCyclePalette = {{
    {230, 25, 75},    // red
    {0, 130, 200},    // blue
    {255, 225, 25},   // yellow
    {145, 30, 180},   // purple
    {245, 130, 48},   // orange
    {70, 240, 240},   // cyan
    {240, 50, 230},   // magenta
    {128, 128, 0},    // olive
}};

const std::array<std::array<int, 3>, 4> kPetalPalette = {{
    {0, 100, 0},
    {34, 139, 34},
    {60, 179, 113},
    {144, 238, 144},
}};

cd GridSpec::point(int row, int col) const {
  const double dx = (re1 - re0) / res;
  const double dy = (im1 - im0) / res;
  return {re0 + (col + 0.5) * dx, im1 - (row + 0.5) * dy};
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 5) throw MalformedInput("grid must be \"re0,re1,im0,im1,res\"");
  GridSpec g;
  try {
    std::size_t used = 0;
    double v[4];
    for (int i = 0; i < 4; ++i) {
      v[i] = std::stod(parts[static_cast<std::size_t>(i)], &used);
      if (used != parts[static_cast<std::size_t>(i)].size()) throw MalformedInput("trailing characters");
    }
    g.re0 = v[0];
    g.re1 = v[1];
    g.im0 = v[2];
    g.im1 = v[3];
    g.res = std::stoi(parts[4], &used);
    if (used != parts[4].size()) throw MalformedInput("trailing characters");
  } catch (const std::logic_error&) {
    throw MalformedInput("grid must be \"re0,re1,im0,im1,res\" with numeric fields");
  }
  if (!(g.re1 > g.re0) || !(g.im1 > g.im0)) throw MalformedInput("grid rectangle is empty");
  if (g.res < 1 || g.res > kMaxGridResolution) throw MalformedInput("grid resolution out of range");
  return g;
}

FatouSlice fatou_slice(const VerticalFamily& family, cd z0, const GridSpec& grid, const OrbitConfig& config,
                       int threads) {
  if (grid.res < 1 || grid.res > kMaxGridResolution) throw MalformedInput("grid resolution out of range");
  FatouSlice out;
  out.grid = grid;
  out.z0 = z0;
  const std::size_t count = static_cast<std::size_t>(grid.res) * static_cast<std::size_t>(grid.res);
  out.verdicts.resize(count);
  out.n_stop.resize(count);
  const StepCoefficients steps(family, z0, config.n_max);

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, grid.res);
  // Each worker owns the rows r with r % threads == t; every cell is written
  // by exactly one worker and depends only on its own inputs.
  auto work = [&](int t) {
    for (int row = t; row < grid.res; row += threads) {
      for (int col = 0; col < grid.res; ++col) {
        const std::size_t i = static_cast<std::size_t>(row) * static_cast<std::size_t>(grid.res) + static_cast<std::size_t>(col);
        int n = 0;
        out.verdicts[i] = classify_orbit(family, steps, grid.point(row, col), config, &n, nullptr);
        out.n_stop[i] = n;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  // Cycle ids by first appearance.
  for (auto& v : out.verdicts) {
    if (v.kind != VerdictKind::AttractingBasin) continue;
    const double tol = 1e-6 * std::max(1.0, std::abs(v.cycle_point));
    std::size_t id = 0;
    while (id < out.cycles.size() && std::abs(out.cycles[id] - v.cycle_point) > tol) ++id;
    if (id == out.cycles.size()) out.cycles.push_back(v.cycle_point);
    v.index = static_cast<int>(id);
  }
  return out;
}

int verdict_code(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Undecided: return 0;
    case VerdictKind::Escape: return 1;
    case VerdictKind::AttractingBasin: return 100 + v.index;
    case VerdictKind::ParabolicPetal: return 200 + v.index;
  }
  return 0;
}

double agreement(const FatouSlice& a, const FatouSlice& b) {
  if (a.verdicts.size() != b.verdicts.size() || a.verdicts.empty())
    throw MalformedInput("agreement needs two slices over the same grid");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.verdicts.size(); ++i)
    if (verdict_code(a.verdicts[i]) == verdict_code(b.verdicts[i])) ++same;
  return static_cast<double>(same) / static_cast<double>(a.verdicts.size());
}

void write_ppm(std::ostream& os, const FatouSlice& slice) {
  const int res = slice.grid.res;
  os << "P3\n" << res << ' ' << res << "\n255\n";
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      const Verdict& v = slice.at(row, col);
      std::array<int, 3> rgb{0, 0, 0};
      switch (v.kind) {
        case VerdictKind::Undecided: break;
        case VerdictKind::Escape: rgb = {255, 255, 255}; break;
        case VerdictKind::AttractingBasin: rgb = kCyclePalette[static_cast<std::size_t>(v.index) % 8]; break;
        case VerdictKind::ParabolicPetal: rgb = kPetalPalette[static_cast<std::size_t>(v.index) % 4]; break;
      }
      os << rgb[0] << ' ' << rgb[1] << ' ' << rgb[2] << (col + 1 == res ? '\n' : ' ');
    }
  }
}

void write_slice_csv(std::ostream& os, const FatouSlice& slice) {
  os << "re_w,im_w,verdict,n_stop\n";
  const int res = slice.grid.res;
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      const cd w = slice.grid.point(row, col);
      const std::size_t i = static_cast<std::size_t>(row) * static_cast<std::size_t>(res) + static_cast<std::size_t>(col);
      os << shortest(w.real()) << ',' << shortest(w.imag()) << ',' << verdict_code(slice.verdicts[i]) << ','
         << slice.n_stop[i] << '\n';
    }
  }
}

}  // namespace skewprod
