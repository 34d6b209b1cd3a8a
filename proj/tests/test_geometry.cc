// tests/test_geometry.cc

// Copyright 2026  The Wavefield Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "wavefield/error.h"
#include "wavefield/geometry.h"

using namespace wavefield;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("direction unit vectors hit the coordinate axes") {
  CHECK(Direction(0.0, kPi / 2).unit().isApprox(Eigen::Vector3d(1, 0, 0),
                                                1e-12));
  CHECK(Direction(kPi / 2, kPi / 2)
            .unit()
            .isApprox(Eigen::Vector3d(0, 1, 0), 1e-12));
  CHECK(Direction(0.0, 0.0).unit().isApprox(Eigen::Vector3d(0, 0, 1), 1e-12));
  CHECK(Direction(0.0, kPi).unit().isApprox(Eigen::Vector3d(0, 0, -1), 1e-12));
}

TEST_CASE("direction unit vectors are normalized for random angles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> az(0.0, 2.0 * kPi), el(0.0, kPi);
  for (int i = 0; i < 200; ++i) {
    const Direction dir(az(rng), el(rng));
    CHECK(std::abs(dir.unit().norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("from_unit inverts unit and wraps azimuth") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> az(0.0, 2.0 * kPi), el(0.01,
                                                                kPi - 0.01);
  for (int i = 0; i < 200; ++i) {
    const Direction dir(az(rng), el(rng));
    const Direction back = Direction::from_unit(dir.unit());
    CHECK(back.unit().isApprox(dir.unit(), 1e-10));
    CHECK(back.azimuth >= 0.0);
    CHECK(back.azimuth < 2.0 * kPi);
  }
  // Scale must not matter.
  const Direction d = Direction::from_unit(Eigen::Vector3d(-3, 0, 0));
  CHECK(d.azimuth == doctest::Approx(kPi));
  CHECK(d.elevation == doctest::Approx(kPi / 2));
}

TEST_CASE("direction constructor rejects out-of-range angles") {
  CHECK_THROWS_AS(Direction(-0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Direction(2.0 * kPi + 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Direction(0.0, -0.1), InvalidArgument);
  CHECK_THROWS_AS(Direction(0.0, kPi + 0.1), InvalidArgument);
}

TEST_CASE("plane wave phase advances toward the arrival direction") {
  const FrequencyGrid grid(16000.0, 1024);
  const double freq = 1000.0;
  const double k = grid.wavenumber(freq);
  const Direction from_x(0.0, kPi / 2);

  // Walking toward the source increases the phase under e^{+jwt}.
  const auto p = plane_wave_pressure(1.0, freq, grid, from_x,
                                     Eigen::Vector3d(0.25, 0.0, 0.0));
  CHECK(p.real() == doctest::Approx(std::cos(k * 0.25)).epsilon(1e-12));
  CHECK(p.imag() == doctest::Approx(std::sin(k * 0.25)).epsilon(1e-12));

  // Transverse displacement leaves the phase alone.
  const auto q = plane_wave_pressure(1.0, freq, grid, from_x,
                                     Eigen::Vector3d(0.0, 0.37, -0.12));
  CHECK(q.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(q.imag()) <= 1e-12);
}

TEST_CASE("plane wave magnitude equals the source amplitude everywhere") {
  const FrequencyGrid grid(16000.0, 1024);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Direction dir(std::abs(u(rng)) * 2.0 * kPi * 0.999,
                        std::abs(u(rng)) * kPi);
    const Eigen::Vector3d pos(u(rng), u(rng), u(rng));
    const auto p = plane_wave_pressure(2.5, 4000.0, grid, dir, pos);
    CHECK(std::abs(p) == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("steering vector stacks per-microphone plane wave values") {
  const FrequencyGrid grid(16000.0, 1024);
  const ArrayGeometry geom = ArrayGeometry::fibonacci_sphere(8, 0.05);
  const Direction dir(1.0, 2.0);
  const Eigen::VectorXcd v = steering_vector(geom, 2000.0, grid, dir);
  REQUIRE(v.size() == 8);
  for (int m = 0; m < 8; ++m) {
    const auto expect =
        plane_wave_pressure(1.0, 2000.0, grid, dir, geom.positions[m]);
    CHECK(std::abs(v[m] - expect) <= 1e-15);
  }
}

TEST_CASE("fibonacci sphere puts every microphone on the surface") {
  const double radius = 0.042;
  const ArrayGeometry geom = ArrayGeometry::fibonacci_sphere(32, radius);
  REQUIRE(geom.size() == 32);
  geom.validate();
  double z_sum = 0.0;
  for (const auto &p : geom.positions) {
    CHECK(std::abs(p.norm() - radius) <= 1e-12);
    z_sum += p.z();
  }
  // The z offsets are symmetric about the equator by construction.
  CHECK(std::abs(z_sum) <= 1e-12);
}

TEST_CASE("square layout is planar with the requested side") {
  const ArrayGeometry geom = ArrayGeometry::square(0.05);
  REQUIRE(geom.size() == 4);
  geom.validate();
  double min_dist = 1e9;
  for (const auto &p : geom.positions) {
    CHECK(p.z() == 0.0);
    CHECK(std::abs(p.x()) == doctest::Approx(0.025));
    CHECK(std::abs(p.y()) == doctest::Approx(0.025));
  }
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i + 1; j < 4; ++j)
      min_dist = std::min(min_dist,
                          (geom.positions[i] - geom.positions[j]).norm());
  CHECK(min_dist == doctest::Approx(0.05));
}

TEST_CASE("geometry JSON round trip preserves positions exactly") {
  ArrayGeometry geom = ArrayGeometry::fibonacci_sphere(16, 0.042);
  geom.labels.assign(16, "");
  for (size_t i = 0; i < 16; ++i) geom.labels[i] = "ch" + std::to_string(i);
  const ArrayGeometry back = ArrayGeometry::from_json(geom.to_json());
  REQUIRE(back.size() == geom.size());
  for (size_t i = 0; i < geom.size(); ++i) {
    CHECK(back.positions[i] == geom.positions[i]);
    CHECK(back.labels[i] == geom.labels[i]);
  }
}

TEST_CASE("geometry validation rejects degenerate layouts") {
  ArrayGeometry empty;
  CHECK_THROWS_AS(empty.validate(), InvalidArgument);

  ArrayGeometry dup;
  dup.positions = {{0, 0, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(dup.validate(), InvalidArgument);

  ArrayGeometry bad_labels = ArrayGeometry::square(0.1);
  bad_labels.labels = {"only-one"};
  CHECK_THROWS_AS(bad_labels.validate(), InvalidArgument);

  CHECK_THROWS_AS(ArrayGeometry::from_json("{not json"), FormatError);
}

TEST_CASE("frequency grid maps bins and wavenumbers") {
  const FrequencyGrid grid(16000.0, 1024, 343.0);
  CHECK(grid.bin_count() == 513);
  CHECK(grid.bin_hz(0) == 0.0);
  CHECK(grid.bin_hz(64) == doctest::Approx(1000.0));
  CHECK(grid.bin_hz(512) == doctest::Approx(8000.0));
  CHECK(grid.wavenumber(343.0) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK_THROWS_AS(FrequencyGrid(0.0, 1024), InvalidArgument);
  CHECK_THROWS_AS(FrequencyGrid(16000.0, 0), InvalidArgument);
}

TEST_CASE("frequency grid hash changes with any field") {
  const FrequencyGrid a(16000.0, 1024, 343.0);
  const FrequencyGrid b(16000.0, 1024, 343.0);
  CHECK(a.content_hash() == b.content_hash());
  CHECK(a.content_hash() != FrequencyGrid(48000.0, 1024, 343.0).content_hash());
  CHECK(a.content_hash() != FrequencyGrid(16000.0, 512, 343.0).content_hash());
  CHECK(a.content_hash() != FrequencyGrid(16000.0, 1024, 340.0).content_hash());
}
