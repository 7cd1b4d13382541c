#include <gtest/gtest.h>

#include <cmath>

#include "anharm/contour.hpp"

using namespace anharm;

namespace {

contour::Grid sample(int nx, int ny, double lo, double hi, double (*f)(cplx)) {
  contour::Grid g{lo, hi, lo, hi, nx, ny, {}};
  g.values.resize(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) g.values[static_cast<std::size_t>(iy) * nx + ix] = f(g.point(ix, iy));
  }
  return g;
}

double log_inverse_distance(cplx z) { return -std::log10(std::abs(z - cplx(0.013, -0.021))); }

}  // namespace

TEST(Contour, SyntheticCircle) {
  const contour::Grid g = sample(400, 400, -0.3, 0.3, log_inverse_distance);
  const auto lines = contour::level_lines(g, -std::log10(0.1));
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_TRUE(lines[0].closed);
  EXPECT_NEAR(lines[0].perimeter / (2 * kPi * 0.1), 1.0, 0.02);
  for (const cplx& v : lines[0].vertices) EXPECT_NEAR(std::abs(v - cplx(0.013, -0.021)), 0.1, 1e-3);
}

TEST(Contour, NestedLevels) {
  const contour::Grid g = sample(200, 200, -0.3, 0.3, log_inverse_distance);
  const auto inner = contour::level_lines(g, -std::log10(0.05));
  const auto outer = contour::level_lines(g, -std::log10(0.2));
  ASSERT_EQ(inner.size(), 1u);
  ASSERT_EQ(outer.size(), 1u);
  for (const cplx& v : inner[0].vertices) EXPECT_TRUE(contour::encloses(outer[0], v));
  EXPECT_LT(inner[0].perimeter, outer[0].perimeter);
}

TEST(Contour, LineLeavingWindowIsOpen) {
  const contour::Grid g = sample(100, 100, -0.3, 0.3, log_inverse_distance);
  const auto lines = contour::level_lines(g, -std::log10(0.35));
  ASSERT_FALSE(lines.empty());
  for (const auto& l : lines) EXPECT_FALSE(l.closed);
}

TEST(Contour, TwoComponents) {
  auto two = [](cplx z) {
    return std::max(-std::log10(std::abs(z - cplx(-0.5, 0))), -std::log10(std::abs(z - cplx(0.5, 0))));
  };
  contour::Grid g{-1, 1, -1, 1, 201, 201, {}};
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) g.values.push_back(two(g.point(ix, iy)));
  }
  const auto lines = contour::level_lines(g, 1.0);
  ASSERT_EQ(lines.size(), 2u);
  int left = 0, right = 0;
  for (const auto& l : lines) {
    left += contour::encloses(l, {-0.5, 0});
    right += contour::encloses(l, {0.5, 0});
    EXPECT_FALSE(contour::encloses(l, {0, 0}));
  }
  EXPECT_EQ(left, 1);
  EXPECT_EQ(right, 1);
}

TEST(Contour, SaddleCellStaysConsistent) {
  // checkerboard 2x2 cell: centre average decides the connection
  contour::Grid g{0, 1, 0, 1, 2, 2, {1, 0, 0, 1}};
  const auto lines = contour::level_lines(g, 0.5);
  EXPECT_EQ(lines.size(), 2u);
  for (const auto& l : lines) EXPECT_EQ(l.vertices.size(), 2u);
}

TEST(Contour, PolylineLengthAndEnclosure) {
  const std::vector<cplx> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  EXPECT_DOUBLE_EQ(contour::polyline_length(square), 4.0);
  contour::Polyline p{square, true, 4.0};
  EXPECT_TRUE(contour::encloses(p, {0.5, 0.5}));
  EXPECT_FALSE(contour::encloses(p, {1.5, 0.5}));
  p.closed = false;
  EXPECT_FALSE(contour::encloses(p, {0.5, 0.5}));
}
