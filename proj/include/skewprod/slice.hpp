#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <ostream>
#include <vector>

#include "skewprod/petals.hpp"

namespace skewprod {

inline constexpr int kMaxGridResolution = 4096;

/// Rectangle [re0, re1] x [im0, im1] sampled at res x res pixel centres.
/// Row 0 is the top edge (im1), column 0 the left edge (re0).
struct GridSpec {
  double re0 = -1.5, re1 = 0.5, im0 = -1.0, im1 = 1.0;
  int res = 200;

  std::complex<double> point(int row, int col) const;
};

/// Parses "re0,re1,im0,im1,res".
GridSpec parse_grid(const std::string& text);

struct FatouSlice {
  GridSpec grid;
  std::complex<double> z0;
  std::vector<Verdict> verdicts;  // row-major
  std::vector<int> n_stop;
  /// Canonical point of each attracting cycle, indexed by cycle id.
  std::vector<std::complex<double>> cycles;

  const Verdict& at(int row, int col) const {
    return verdicts[static_cast<std::size_t>(row) * static_cast<std::size_t>(grid.res) + static_cast<std::size_t>(col)];
  }
};

/// Classifies every grid point of the fiber over z0. threads <= 0 picks the
/// hardware concurrency. Output does not depend on the thread count: cycle
/// ids are assigned after the fact in row-major order of first appearance.
FatouSlice fatou_slice(const VerticalFamily& family, std::complex<double> z0, const GridSpec& grid,
                       const OrbitConfig& config = {}, int threads = 0);

/// 0 Undecided, 1 Escape, 100 + cycle id, 200 + petal direction.
int verdict_code(const Verdict& v);

/// Fraction of grid points with equal verdict codes.
double agreement(const FatouSlice& a, const FatouSlice& b);

/// Fixed palettes used by write_ppm.
extern const std::array<std::array<int, 3>, 8> kCyclePalette;
extern const std::array<std::array<int, 3>, 4> kPetalPalette;

void write_ppm(std::ostream& os, const FatouSlice& slice);
/// Columns re_w, im_w, verdict, n_stop.
void write_slice_csv(std::ostream& os, const FatouSlice& slice);

}  // namespace skewprod
