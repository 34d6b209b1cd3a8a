// src/pwd.cc

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

#include "wavefield/pwd.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "wavefield/error.h"
#include "wavefield/io_util.h"
#include "wavefield/parallel.h"

namespace wavefield {

using json = nlohmann::json;

void DecompositionConfig::validate() const {
  if (max_atoms < 1) throw InvalidArgument("max_atoms must be >= 1");
  if (!(residual_stop_db < 0.0))
    throw InvalidArgument("residual_stop_db must be negative");
  if (!(min_correlation >= 0.0))
    throw InvalidArgument("min_correlation must be >= 0");
  if (!(bin_lo_hz >= 0.0) || !(bin_hi_hz >= bin_lo_hz))
    throw InvalidArgument("bad bin range");
}

void TimeFrequencyMap::validate() const {
  config.validate();
  if (cells.size() != static_cast<size_t>(frames) * bins)
    throw DimensionMismatch("cell table does not match frames x bins");
  std::vector<char> seen;
  for (const auto &cell : cells) {
    if (cell.size() > config.max_atoms)
      throw InvalidArgument("cell exceeds max_atoms");
    seen.assign(cell.size(), 0);
    for (size_t i = 0; i < cell.size(); ++i) {
      if (!std::isfinite(cell[i].weight.real()) ||
          !std::isfinite(cell[i].weight.imag()))
        throw InvalidArgument("non-finite weight");
      for (size_t j = 0; j < i; ++j)
        if (cell[j].index == cell[i].index)
          throw InvalidArgument("duplicate direction index in cell");
    }
  }
}

CellDecomposition decompose_cell(const Eigen::VectorXcd &y,
                                 const Eigen::MatrixXcd &atoms,
                                 const DecompositionConfig &cfg) {
  cfg.validate();
  const Eigen::Index M = y.size();
  const Eigen::Index L = atoms.cols();
  if (M < 1 || L < 1) throw InvalidArgument("empty cell or dictionary");
  if (atoms.rows() != M)
    throw DimensionMismatch("atom rows do not match channel count");

  CellDecomposition out;
  const double y_norm = y.norm();
  if (y_norm == 0.0) {
    out.residual_db = -std::numeric_limits<double>::infinity();
    return out;
  }

  // Selection uses unit-norm columns; the refit uses raw columns so the
  // returned weights are already at raw-atom scale.
  Eigen::VectorXd inv_norms(L);
  for (Eigen::Index l = 0; l < L; ++l) {
    double n = atoms.col(l).norm();
    inv_norms(l) = n > 0.0 ? 1.0 / n : 0.0;
  }

  Eigen::VectorXcd residual = y;
  Eigen::MatrixXcd active(M, cfg.max_atoms);
  Eigen::VectorXcd weights;
  std::vector<char> used(static_cast<size_t>(L), 0);

  while (out.indices.size() < cfg.max_atoms) {
    Eigen::Index best = -1;
    double best_corr = -1.0;
    for (Eigen::Index l = 0; l < L; ++l) {
      if (used[static_cast<size_t>(l)] || inv_norms(l) == 0.0) continue;
      double c = std::abs(atoms.col(l).dot(residual)) * inv_norms(l);
      if (c > best_corr) {  // strict: equal correlations keep the lower index
        best_corr = c;
        best = l;
      }
    }
    if (best < 0 || best_corr < cfg.min_correlation) break;

    used[static_cast<size_t>(best)] = 1;
    const auto k = static_cast<Eigen::Index>(out.indices.size());
    active.col(k) = atoms.col(best);
    auto qr = active.leftCols(k + 1).colPivHouseholderQr();
    if (qr.rank() < k + 1) break;  // newest atom adds no information
    out.indices.push_back(static_cast<uint32_t>(best));

    weights = qr.solve(y);
    residual = y - active.leftCols(k + 1) * weights;
    out.residual_energy_trace.push_back(residual.squaredNorm());
    out.residual_db = 20.0 * std::log10(residual.norm() / y_norm);
    if (out.residual_db <= cfg.residual_stop_db) break;
  }

  if (!out.indices.empty())
    out.weights.assign(weights.data(), weights.data() + weights.size());
  return out;
}

namespace {

// Dictionary bin slots whose center frequency lies inside the config range
// and inside the tensor.
std::vector<size_t> in_range_slots(const DeviceDictionary &dict,
                                   const DecompositionConfig &cfg,
                                   uint32_t tensor_bins) {
  std::vector<size_t> slots;
  for (size_t fi = 0; fi < dict.bins.size(); ++fi) {
    double hz = dict.freqs.bin_hz(dict.bins[fi]);
    if (hz < cfg.bin_lo_hz || hz > cfg.bin_hi_hz) continue;
    if (dict.bins[fi] >= tensor_bins)
      throw DimensionMismatch("dictionary bin outside the spectral tensor");
    slots.push_back(fi);
  }
  return slots;
}

void check_spec_dict(const SpectralTensor &spec, const DeviceDictionary &dict) {
  if (spec.channels != dict.num_mics())
    throw DimensionMismatch("tensor channels do not match dictionary mics");
  if (spec.config.frame_size != dict.freqs.fft_size ||
      spec.config.sample_rate != dict.freqs.sample_rate)
    throw DimensionMismatch("tensor STFT config does not match dictionary");
}

}  // namespace

TimeFrequencyMap decompose(const SpectralTensor &spec,
                           const DeviceDictionary &dict,
                           const DecompositionConfig &cfg, int jobs) {
  cfg.validate();
  check_spec_dict(spec, dict);

  TimeFrequencyMap map;
  map.grid_hash = dict.grid.content_hash();
  map.freq_hash = dict.freqs.content_hash();
  map.frames = spec.frames;
  map.bins = spec.bins;
  map.config = cfg;
  map.cells.assign(static_cast<size_t>(spec.frames) * spec.bins, {});

  const std::vector<size_t> slots = in_range_slots(dict, cfg, spec.bins);
  const auto M = static_cast<Eigen::Index>(spec.channels);
  parallel_for(slots.size(), jobs, [&](size_t i) {
    const size_t fi = slots[i];
    const uint32_t f = dict.bins[fi];
    const Eigen::MatrixXcd atoms = dict.atoms(fi);
    for (uint32_t t = 0; t < spec.frames; ++t) {
      Eigen::Map<const Eigen::VectorXcd> y(spec.cell(t, f), M);
      CellDecomposition res = decompose_cell(y, atoms, cfg);
      auto &cell = map.cell(t, f);
      cell.reserve(res.indices.size());
      for (size_t k = 0; k < res.indices.size(); ++k)
        cell.push_back({res.indices[k], res.weights[k]});
    }
  });
  return map;
}

GoaReport goa(const TimeFrequencyMap &map, const DeviceDictionary &dict,
              const SpectralTensor &spec) {
  check_spec_dict(spec, dict);
  if (map.grid_hash != dict.grid.content_hash())
    throw InvalidArgument("map was built against a different direction grid");
  if (map.freq_hash != dict.freqs.content_hash())
    throw InvalidArgument("map was built against a different frequency grid");
  if (map.frames != spec.frames || map.bins != spec.bins)
    throw DimensionMismatch("map dimensions do not match tensor");

  const std::vector<size_t> slots = in_range_slots(dict, map.config, spec.bins);
  const auto M = static_cast<Eigen::Index>(spec.channels);
  GoaReport report;
  double total_res = 0.0, total_obs = 0.0;
  for (size_t fi : slots) {
    const uint32_t f = dict.bins[fi];
    double res = 0.0, obs = 0.0;
    for (uint32_t t = 0; t < spec.frames; ++t) {
      Eigen::Map<const Eigen::VectorXcd> y(spec.cell(t, f), M);
      obs += y.squaredNorm();
      Eigen::VectorXcd r = y;
      for (const auto &atom : map.cell(t, f)) {
        if (atom.index >= dict.num_directions())
          throw InvalidArgument("atom index outside dictionary grid");
        for (Eigen::Index m = 0; m < M; ++m)
          r(m) -= atom.weight * std::complex<double>(dict.at(
                      fi, atom.index, static_cast<size_t>(m)));
      }
      res += r.squaredNorm();
    }
    if (obs <= 0.0) continue;  // silent bins carry no information
    report.bin_indices.push_back(f);
    report.bin_db.push_back(10.0 * std::log10(std::max(res / obs, 1e-12)));
    total_res += res;
    total_obs += obs;
  }
  if (total_obs <= 0.0)
    throw InvalidArgument("no signal energy in the configured bin range");
  report.aggregate_db = 10.0 * std::log10(std::max(total_res / total_obs,
                                                   1e-12));
  return report;
}

namespace {
constexpr char kMapMagic[4] = {'T', 'F', 'M', '1'};
}

void save_map(const TimeFrequencyMap &map, const std::string &path) {
  map.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);

  uint64_t cell_count = 0;
  for (const auto &cell : map.cells)
    if (!cell.empty()) ++cell_count;

  json header;
  header["frames"] = map.frames;
  header["bins"] = map.bins;
  header["grid_hash"] = map.grid_hash;
  header["freq_hash"] = map.freq_hash;
  header["cell_count"] = cell_count;
  header["config"] = {{"max_atoms", map.config.max_atoms},
                      {"residual_stop_db", map.config.residual_stop_db},
                      {"min_correlation", map.config.min_correlation},
                      {"bin_lo_hz", map.config.bin_lo_hz},
                      {"bin_hi_hz", map.config.bin_hi_hz},
                      {"lasso_lambda", map.config.lasso_lambda}};
  const std::string header_str = header.dump();

  write_bytes(os, kMapMagic, sizeof kMapMagic);
  write_u32(os, static_cast<uint32_t>(header_str.size()));
  write_bytes(os, header_str.data(), header_str.size());

  for (uint32_t t = 0; t < map.frames; ++t)
    for (uint32_t f = 0; f < map.bins; ++f) {
      const auto &cell = map.cell(t, f);
      if (cell.empty()) continue;
      write_u32(os, t);
      write_u32(os, f);
      write_u32(os, static_cast<uint32_t>(cell.size()));
      for (const auto &atom : cell) {
        write_u32(os, atom.index);
        write_f32(os, static_cast<float>(atom.weight.real()));
        write_f32(os, static_cast<float>(atom.weight.imag()));
      }
    }
  if (!os) throw IoError("write failed: " + path);
}

TimeFrequencyMap load_map(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);

  char magic[4];
  read_exact(is, magic, sizeof magic);
  if (std::memcmp(magic, kMapMagic, sizeof kMapMagic) != 0)
    throw FormatError("not a time-frequency map file (bad magic)");

  uint32_t header_len = read_u32(is);
  std::string header_str(header_len, '\0');
  read_exact(is, header_str.data(), header_len);

  TimeFrequencyMap map;
  uint64_t cell_count = 0;
  try {
    json header = json::parse(header_str);
    map.frames = header.at("frames").get<uint32_t>();
    map.bins = header.at("bins").get<uint32_t>();
    map.grid_hash = header.at("grid_hash").get<uint64_t>();
    map.freq_hash = header.at("freq_hash").get<uint64_t>();
    cell_count = header.at("cell_count").get<uint64_t>();
    const auto &c = header.at("config");
    map.config.max_atoms = c.at("max_atoms").get<uint32_t>();
    map.config.residual_stop_db = c.at("residual_stop_db").get<double>();
    map.config.min_correlation = c.at("min_correlation").get<double>();
    map.config.bin_lo_hz = c.at("bin_lo_hz").get<double>();
    map.config.bin_hi_hz = c.at("bin_hi_hz").get<double>();
    map.config.lasso_lambda = c.at("lasso_lambda").get<double>();
  } catch (const json::exception &e) {
    throw FormatError(std::string("map header: ") + e.what());
  }

  map.cells.assign(static_cast<size_t>(map.frames) * map.bins, {});
  for (uint64_t i = 0; i < cell_count; ++i) {
    uint32_t t = read_u32(is);
    uint32_t f = read_u32(is);
    uint32_t count = read_u32(is);
    if (t >= map.frames || f >= map.bins)
      throw DimensionMismatch("cell record outside frames x bins");
    auto &cell = map.cell(t, f);
    if (!cell.empty()) throw FormatError("duplicate cell record");
    cell.reserve(count);
    for (uint32_t k = 0; k < count; ++k) {
      uint32_t index = read_u32(is);
      float re = read_f32(is);
      float im = read_f32(is);
      cell.push_back({index, {re, im}});
    }
  }
  is.peek();
  if (!is.eof()) throw FormatError("trailing bytes after cell records");
  map.validate();
  return map;
}

}  // namespace wavefield
