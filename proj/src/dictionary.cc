// src/dictionary.cc

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

#include "wavefield/dictionary.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "wavefield/error.h"
#include "wavefield/io_util.h"
#include "wavefield/parallel.h"
#include "wavefield/sphere.h"

namespace wavefield {

using json = nlohmann::json;

namespace {

constexpr char kMagic[4] = {'W', 'F', 'D', '1'};

void check_bins(const std::vector<uint32_t> &bins, const FrequencyGrid &freqs) {
  if (bins.empty()) throw InvalidArgument("bin subset must be non-empty");
  for (size_t i = 0; i < bins.size(); ++i) {
    if (bins[i] >= freqs.bin_count())
      throw InvalidArgument("bin index exceeds fft_size/2");
    if (i > 0 && bins[i] <= bins[i - 1])
      throw InvalidArgument("bins must be strictly ascending");
  }
}

}  // namespace

Eigen::MatrixXcd DeviceDictionary::atoms(size_t f) const {
  if (f >= bins.size()) throw InvalidArgument("bin slot out of range");
  const size_t L = grid.size(), M = geometry.size();
  Eigen::MatrixXcd a(M, L);
  const std::complex<float> *src = tensor.data() + f * L * M;
  for (size_t l = 0; l < L; ++l)
    for (size_t m = 0; m < M; ++m)
      a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(l)) =
          std::complex<double>(src[l * M + m]);
  return a;
}

ptrdiff_t DeviceDictionary::bin_slot(uint32_t bin) const {
  auto it = std::lower_bound(bins.begin(), bins.end(), bin);
  if (it == bins.end() || *it != bin) return -1;
  return it - bins.begin();
}

void DeviceDictionary::validate() const {
  geometry.validate();
  grid.validate();
  check_bins(bins, freqs);
  const size_t expect = bins.size() * grid.size() * geometry.size();
  if (tensor.size() != expect)
    throw DimensionMismatch("tensor size does not match F*L*M");
  for (const auto &v : tensor)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument("non-finite dictionary entry");
  const size_t L = grid.size(), M = geometry.size();
  for (size_t f = 0; f < bins.size(); ++f)
    for (size_t l = 0; l < L; ++l) {
      double norm2 = 0.0;
      const std::complex<float> *col = tensor.data() + (f * L + l) * M;
      for (size_t m = 0; m < M; ++m) norm2 += std::norm(col[m]);
      if (!(norm2 > 0.0)) throw InvalidArgument("zero dictionary atom");
    }
}

std::vector<uint32_t> default_bins(const FrequencyGrid &freqs) {
  std::vector<uint32_t> bins;
  for (uint32_t k = 0; k <= freqs.fft_size / 2; ++k)
    if (freqs.bin_hz(k) <= 8000.0) bins.push_back(k);
  return bins;
}

DeviceDictionary build_free_field(const ArrayGeometry &geom,
                                  const DirectionGrid &grid,
                                  const FrequencyGrid &freqs,
                                  std::vector<uint32_t> bins,
                                  const std::string &device_name, int jobs) {
  geom.validate();
  grid.validate();
  check_bins(bins, freqs);
  DeviceDictionary d;
  d.geometry = geom;
  d.grid = grid;
  d.freqs = freqs;
  d.bins = std::move(bins);
  d.device_name = device_name;
  d.builder = BuilderId::kFreeField;
  const size_t L = grid.size(), M = geom.size();
  d.tensor.resize(d.bins.size() * L * M);
  parallel_for(d.bins.size(), jobs, [&](size_t f) {
    double hz = freqs.bin_hz(d.bins[f]);
    std::complex<float> *dst = d.tensor.data() + f * L * M;
    for (size_t l = 0; l < L; ++l) {
      Eigen::VectorXcd col = steering_vector(geom, hz, freqs,
                                             grid.directions[l]);
      for (size_t m = 0; m < M; ++m)
        dst[l * M + m] =
            std::complex<float>(col(static_cast<Eigen::Index>(m)));
    }
  });
  return d;
}

int SphereSpec::n_terms_for_ka_default(double ka) { return n_terms_for_ka(ka); }

DeviceDictionary build_rigid_sphere(const SphereSpec &spec,
                                    const DirectionGrid &grid,
                                    const FrequencyGrid &freqs,
                                    std::vector<uint32_t> bins,
                                    const std::string &device_name, int jobs) {
  if (!(spec.radius > 0.0)) throw InvalidArgument("sphere radius must be > 0");
  if (spec.mic_directions.empty())
    throw InvalidArgument("sphere needs at least 1 mic direction");
  if (!spec.truncation_rule)
    throw InvalidArgument("missing truncation rule");
  grid.validate();
  check_bins(bins, freqs);

  DeviceDictionary d;
  d.grid = grid;
  d.freqs = freqs;
  d.bins = std::move(bins);
  d.device_name = device_name;
  d.builder = BuilderId::kRigidSphere;
  d.sphere_radius = spec.radius;
  for (const auto &dir : spec.mic_directions)
    d.geometry.positions.push_back(spec.radius * dir.unit());
  d.geometry.validate();

  const size_t L = grid.size(), M = spec.mic_directions.size();
  std::vector<Eigen::Vector3d> mic_units(M), dir_units(L);
  for (size_t m = 0; m < M; ++m) mic_units[m] = spec.mic_directions[m].unit();
  for (size_t l = 0; l < L; ++l) dir_units[l] = grid.directions[l].unit();

  // Truncation-rule guard; the series itself is fine somewhat beyond this.
  for (uint32_t bin : d.bins) {
    double ka = freqs.wavenumber(freqs.bin_hz(bin)) * spec.radius;
    if (ka > 40.0)
      throw InvalidArgument("ka = " + std::to_string(ka) +
                            " exceeds the supported range (ka <= 40)");
  }

  d.tensor.resize(d.bins.size() * L * M);
  parallel_for(d.bins.size(), jobs, [&](size_t f) {
    double ka = freqs.wavenumber(freqs.bin_hz(d.bins[f])) * spec.radius;
    std::complex<float> *dst = d.tensor.data() + f * L * M;
    if (ka <= 1e-12) {
      for (size_t i = 0; i < L * M; ++i) dst[i] = {1.0f, 0.0f};
      return;
    }
    auto coeffs = sphere_modal_coefficients(ka, spec.truncation_rule(ka));
    for (size_t l = 0; l < L; ++l)
      for (size_t m = 0; m < M; ++m)
        dst[l * M + m] = std::complex<float>(
            sphere_modal_sum(coeffs, mic_units[m].dot(dir_units[l])));
  });
  return d;
}

void save_dictionary(const DeviceDictionary &dict, const std::string &path) {
  dict.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);

  json meta;
  meta["device_name"] = dict.device_name;
  meta["p0"] = dict.p0;
  meta["speed_of_sound"] = dict.freqs.speed_of_sound;
  meta["geometry"]["positions_m"] = json::array();
  for (const auto &p : dict.geometry.positions)
    meta["geometry"]["positions_m"].push_back({p.x(), p.y(), p.z()});
  if (!dict.geometry.labels.empty())
    meta["geometry"]["labels"] = dict.geometry.labels;
  meta["grid"]["scheme"] =
      dict.grid.scheme == DirectionGrid::Scheme::kEquiangular ? "equiangular"
                                                              : "custom";
  json az = json::array(), el = json::array();
  for (const auto &dir : dict.grid.directions) {
    az.push_back(dir.azimuth);
    el.push_back(dir.elevation);
  }
  meta["grid"]["azimuth"] = std::move(az);
  meta["grid"]["elevation"] = std::move(el);
  meta["bins"] = dict.bins;
  const std::string meta_str = meta.dump();

  write_bytes(os, kMagic, sizeof kMagic);
  write_u32(os, static_cast<uint32_t>(dict.num_mics()));
  write_u32(os, static_cast<uint32_t>(dict.num_directions()));
  write_u32(os, static_cast<uint32_t>(dict.num_bins()));
  write_f64(os, dict.freqs.sample_rate);
  write_u32(os, dict.freqs.fft_size);
  write_f64(os, dict.sphere_radius);
  write_u32(os, static_cast<uint32_t>(dict.builder));
  write_u32(os, static_cast<uint32_t>(meta_str.size()));
  write_bytes(os, meta_str.data(), meta_str.size());
  write_bytes(os, dict.tensor.data(),
              dict.tensor.size() * sizeof(std::complex<float>));
  if (!os) throw IoError("write failed: " + path);
}

DeviceDictionary load_dictionary(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);

  char magic[4];
  read_exact(is, magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw FormatError("not a dictionary file (bad magic)");

  uint32_t M = read_u32(is);
  uint32_t L = read_u32(is);
  uint32_t F = read_u32(is);
  double sample_rate = read_f64(is);
  uint32_t fft_size = read_u32(is);
  double radius = read_f64(is);
  uint32_t builder = read_u32(is);
  uint32_t meta_len = read_u32(is);
  if (builder > static_cast<uint32_t>(BuilderId::kImported))
    throw FormatError("unknown builder id");

  std::string meta_str(meta_len, '\0');
  read_exact(is, meta_str.data(), meta_len);
  json meta;
  try {
    meta = json::parse(meta_str);
  } catch (const json::exception &e) {
    throw FormatError(std::string("dictionary metadata: ") + e.what());
  }

  DeviceDictionary d;
  try {
    d.device_name = meta.at("device_name").get<std::string>();
    d.p0 = meta.at("p0").get<double>();
    d.freqs = FrequencyGrid(sample_rate, fft_size,
                            meta.at("speed_of_sound").get<double>());
    for (const auto &row : meta.at("geometry").at("positions_m"))
      d.geometry.positions.emplace_back(row.at(0).get<double>(),
                                        row.at(1).get<double>(),
                                        row.at(2).get<double>());
    if (meta.at("geometry").contains("labels"))
      d.geometry.labels =
          meta.at("geometry").at("labels").get<std::vector<std::string>>();
    d.grid.scheme = meta.at("grid").at("scheme").get<std::string>() ==
                            "equiangular"
                        ? DirectionGrid::Scheme::kEquiangular
                        : DirectionGrid::Scheme::kCustom;
    const auto &az = meta.at("grid").at("azimuth");
    const auto &el = meta.at("grid").at("elevation");
    if (az.size() != el.size())
      throw DimensionMismatch("grid azimuth/elevation length mismatch");
    for (size_t i = 0; i < az.size(); ++i)
      d.grid.directions.emplace_back(az[i].get<double>(), el[i].get<double>());
    d.bins = meta.at("bins").get<std::vector<uint32_t>>();
  } catch (const json::exception &e) {
    throw FormatError(std::string("dictionary metadata: ") + e.what());
  }
  d.builder = static_cast<BuilderId>(builder);
  d.sphere_radius = radius;

  if (d.geometry.size() != M || d.grid.size() != L || d.bins.size() != F)
    throw DimensionMismatch("metadata dimensions disagree with header");

  d.tensor.resize(static_cast<size_t>(F) * L * M);
  read_exact(is, d.tensor.data(),
             d.tensor.size() * sizeof(std::complex<float>));
  is.peek();
  if (!is.eof()) throw FormatError("trailing bytes after tensor payload");
  d.validate();
  return d;
}

}  // namespace wavefield
