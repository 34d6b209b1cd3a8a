// tools/wavefield_main.cc

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

// Batch front end for the capture -> decompose -> re-render workflow. Every
// subcommand is a pure function of its files and flags; fixed seeds make
// reruns bit-identical.

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavefield/dictionary.h"
#include "wavefield/error.h"
#include "wavefield/geometry.h"
#include "wavefield/grid.h"
#include "wavefield/parallel.h"
#include "wavefield/pwd.h"
#include "wavefield/rir.h"
#include "wavefield/roomsim.h"
#include "wavefield/sphere.h"
#include "wavefield/stft.h"
#include "wavefield/synthesis.h"
#include "wavefield/wav.h"

namespace {

using namespace wavefield;

std::string slurp(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spill(const std::string &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

// "LO:HI" in Hz.
std::pair<double, double> parse_range(const std::string &text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw InvalidArgument("expected LO:HI frequency range, got " + text);
  try {
    size_t used = 0;
    const double lo = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("");
    const std::string hi_text = text.substr(colon + 1);
    const double hi = std::stod(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument("");
    if (!(lo >= 0.0) || !(hi >= lo))
      throw InvalidArgument("bad frequency range " + text);
    return {lo, hi};
  } catch (const std::logic_error &) {
    throw InvalidArgument("expected LO:HI frequency range, got " + text);
  }
}

std::vector<uint32_t> bins_between(const FrequencyGrid &freqs, double lo_hz,
                                   double hi_hz) {
  std::vector<uint32_t> out;
  for (uint32_t k = 0; k < freqs.bin_count(); ++k) {
    const double f = freqs.bin_hz(k);
    if (f >= lo_hz && f <= hi_hz) out.push_back(k);
  }
  if (out.empty())
    throw InvalidArgument("no FFT bins inside the requested range");
  return out;
}

ArrayGeometry load_geometry(const std::string &path) {
  ArrayGeometry geom = ArrayGeometry::from_json(slurp(path));
  geom.validate();
  return geom;
}

Eigen::VectorXd load_mono(const std::string &path, double expect_rate,
                          const char *what) {
  double rate = 0.0;
  const Eigen::MatrixXd samples = read_wav(path, &rate);
  if (samples.cols() != 1)
    throw InvalidArgument(std::string(what) + " must have exactly 1 channel");
  if (expect_rate > 0.0 && rate != expect_rate)
    throw InvalidArgument(std::string(what) + " sample rate " +
                          std::to_string(rate) + " does not match " +
                          std::to_string(expect_rate));
  return samples.col(0);
}

StftConfig stft_config_for(const FrequencyGrid &freqs, uint32_t hop) {
  StftConfig cfg;
  cfg.frame_size = freqs.fft_size;
  cfg.hop = hop == 0 ? freqs.fft_size / 2 : hop;
  cfg.sample_rate = freqs.sample_rate;
  cfg.validate();
  return cfg;
}

void print_goa_table(const GoaReport &report, const FrequencyGrid &freqs) {
  std::cout << "# bin  freq_hz  goa_db\n" << std::fixed;
  for (size_t i = 0; i < report.bin_indices.size(); ++i)
    std::cout << report.bin_indices[i] << "  " << std::setprecision(1)
              << freqs.bin_hz(report.bin_indices[i]) << "  "
              << std::setprecision(2) << report.bin_db[i] << "\n";
  std::cout << "# aggregate_goa_db " << std::setprecision(2)
            << report.aggregate_db << "\n";
}

// One pursuit pass at the full budget; the residual trace of each cell
// prices every smaller budget, so the sweep costs a single run.
void run_ksweep(const SpectralTensor &spec, const DeviceDictionary &dict,
                const DecompositionConfig &cfg, int jobs) {
  std::vector<size_t> slots;
  for (size_t s = 0; s < dict.bins.size(); ++s) {
    const double f = dict.freqs.bin_hz(dict.bins[s]);
    if (f >= cfg.bin_lo_hz && f <= cfg.bin_hi_hz) slots.push_back(s);
  }
  if (slots.empty())
    throw InvalidArgument("no dictionary bins inside the configured range");

  const uint32_t K = cfg.max_atoms;
  std::vector<double> obs(slots.size(), 0.0);
  std::vector<std::vector<double>> res(slots.size(),
                                       std::vector<double>(K, 0.0));
  parallel_for(slots.size(), jobs, [&](size_t i) {
    const size_t s = slots[i];
    const Eigen::MatrixXcd atoms = dict.atoms(s);
    for (uint32_t t = 0; t < spec.frames; ++t) {
      Eigen::Map<const Eigen::VectorXcd> y(spec.cell(t, dict.bins[s]),
                                           spec.channels);
      const double energy = y.squaredNorm();
      if (energy <= 0.0) continue;
      obs[i] += energy;
      const CellDecomposition dec = decompose_cell(y, atoms, cfg);
      const size_t n = dec.residual_energy_trace.size();
      for (uint32_t k = 1; k <= K; ++k)
        res[i][k - 1] +=
            n == 0 ? energy
                   : dec.residual_energy_trace[std::min<size_t>(k, n) - 1];
    }
  });

  double total_obs = 0.0;
  for (double e : obs) total_obs += e;
  if (total_obs <= 0.0)
    throw InvalidArgument("no signal energy in the configured bin range");
  std::cout << "# k  goa_db\n" << std::fixed << std::setprecision(2);
  for (uint32_t k = 1; k <= K; ++k) {
    double total_res = 0.0;
    for (const auto &r : res) total_res += r[k - 1];
    std::cout << k << "  "
              << 10.0 * std::log10(std::max(total_res / total_obs, 1e-12))
              << "\n";
  }
}

int run_guarded(const std::function<void()> &body) {
  try {
    body();
    return 0;
  } catch (const FormatError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const TruncatedFile &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"wavefield: sparse plane-wave sound field analysis toolkit"};
  app.require_subcommand(1);
  std::function<void()> action;

  // geom: array layout generators.
  auto *geom_cmd =
      app.add_subcommand("geom", "generate array geometry JSON files");
  geom_cmd->require_subcommand(1);
  struct {
    int count = 32;
    double radius = 0.042;
    double side = 0.05;
    std::string out;
  } g;
  auto *fib = geom_cmd->add_subcommand("fibonacci-sphere",
                                       "golden-angle spherical layout");
  fib->add_option("--count", g.count, "number of microphones")
      ->check(CLI::PositiveNumber);
  fib->add_option("--radius", g.radius, "sphere radius in meters")
      ->check(CLI::PositiveNumber);
  fib->add_option("--out", g.out, "output JSON path")->required();
  fib->callback([&] {
    action = [&] {
      spill(g.out,
            ArrayGeometry::fibonacci_sphere(g.count, g.radius).to_json());
    };
  });
  auto *square =
      geom_cmd->add_subcommand("square", "planar 4-microphone square");
  square->add_option("--side", g.side, "side length in meters")
      ->check(CLI::PositiveNumber);
  square->add_option("--out", g.out, "output JSON path")->required();
  square->callback([&] {
    action = [&] { spill(g.out, ArrayGeometry::square(g.side).to_json()); };
  });

  // dict: dictionary builders and inspection.
  auto *dict_cmd =
      app.add_subcommand("dict", "build or inspect device dictionaries");
  dict_cmd->require_subcommand(1);
  struct {
    std::string geometry, out, name, bins_range = "0:8000";
    double radius = 0.042, fs = 16000.0, c = 343.0;
    uint32_t fft = 1024;
    int jobs = 0;
  } d;
  const auto add_dict_common = [&](CLI::App *sub) {
    sub->add_option("--geometry", d.geometry, "array geometry JSON")
        ->required();
    sub->add_option("--out", d.out, "output .wfd path")->required();
    sub->add_option("--fs", d.fs, "sample rate in Hz")
        ->check(CLI::PositiveNumber);
    sub->add_option("--fft", d.fft, "FFT size")->check(CLI::PositiveNumber);
    sub->add_option("--bins", d.bins_range, "bin range LO:HI in Hz");
    sub->add_option("--speed", d.c, "speed of sound in m/s")
        ->check(CLI::PositiveNumber);
    sub->add_option("--name", d.name, "device name stored in the file");
    sub->add_option("--jobs", d.jobs, "worker threads, 0 = hardware");
  };
  auto *build_sphere = dict_cmd->add_subcommand(
      "build-sphere", "rigid-sphere scattering dictionary");
  add_dict_common(build_sphere);
  build_sphere->add_option("--radius", d.radius, "sphere radius in meters")
      ->check(CLI::PositiveNumber);
  build_sphere->callback([&] {
    action = [&] {
      const ArrayGeometry geom = load_geometry(d.geometry);
      SphereSpec spec;
      spec.radius = d.radius;
      for (const auto &pos : geom.positions) {
        if (std::abs(pos.norm() - d.radius) >
            1e-6 * std::max(d.radius, 1.0))
          throw InvalidArgument(
              "geometry positions must lie on the sphere surface");
        spec.mic_directions.push_back(Direction::from_unit(pos));
      }
      const FrequencyGrid freqs(d.fs, d.fft, d.c);
      const auto [lo, hi] = parse_range(d.bins_range);
      DeviceDictionary dict = build_rigid_sphere(
          spec, DirectionGrid::equiangular(), freqs,
          bins_between(freqs, lo, hi),
          d.name.empty() ? "rigid_sphere" : d.name, d.jobs);
      save_dictionary(dict, d.out);
    };
  });
  auto *build_ff = dict_cmd->add_subcommand(
      "build-freefield", "free-field phase-only dictionary");
  add_dict_common(build_ff);
  build_ff->callback([&] {
    action = [&] {
      const ArrayGeometry geom = load_geometry(d.geometry);
      const FrequencyGrid freqs(d.fs, d.fft, d.c);
      const auto [lo, hi] = parse_range(d.bins_range);
      DeviceDictionary dict = build_free_field(
          geom, DirectionGrid::equiangular(), freqs,
          bins_between(freqs, lo, hi),
          d.name.empty() ? "free_field" : d.name, d.jobs);
      save_dictionary(dict, d.out);
    };
  });
  std::string info_path;
  auto *info = dict_cmd->add_subcommand("info", "print dictionary summary");
  info->add_option("file", info_path, ".wfd path")->required();
  info->callback([&] {
    action = [&] {
      const DeviceDictionary dict = load_dictionary(info_path);
      const char *builder = dict.builder == BuilderId::kFreeField
                                ? "free-field"
                                : dict.builder == BuilderId::kRigidSphere
                                      ? "rigid-sphere"
                                      : "imported";
      std::cout << "device: " << dict.device_name << "\n"
                << "builder: " << builder << "\n"
                << "microphones: " << dict.num_mics() << "\n"
                << "directions: " << dict.num_directions()
                << (dict.grid.scheme == DirectionGrid::Scheme::kEquiangular
                        ? " (equiangular)"
                        : " (custom)")
                << "\n"
                << "bins: " << dict.num_bins() << " ("
                << dict.freqs.bin_hz(dict.bins.front()) << " to "
                << dict.freqs.bin_hz(dict.bins.back()) << " Hz)\n"
                << "sample_rate: " << dict.freqs.sample_rate << "\n"
                << "fft_size: " << dict.freqs.fft_size << "\n";
      if (dict.builder == BuilderId::kRigidSphere)
        std::cout << "radius_m: " << dict.sphere_radius << "\n";
    };
  });

  // decompose: capture -> sparse map + goodness-of-approximation table.
  auto *dec_cmd = app.add_subcommand(
      "decompose", "sparse plane-wave decomposition of a capture");
  struct {
    std::string capture, dict, out, bins_range = "50:8000";
    uint32_t max_atoms = 30, hop = 0;
    double stop_db = -30.0, min_corr = 1e-12;
    int jobs = 0;
    bool ksweep = false;
  } dc;
  dec_cmd->add_option("--capture", dc.capture, "multichannel WAV capture")
      ->required();
  dec_cmd->add_option("--dict", dc.dict, "device dictionary .wfd")->required();
  dec_cmd->add_option("--out", dc.out, "output .tfm path")->required();
  dec_cmd->add_option("--max-atoms", dc.max_atoms, "pursuit budget per cell")
      ->check(CLI::PositiveNumber);
  dec_cmd->add_option("--stop-db", dc.stop_db, "residual stop level in dB");
  dec_cmd->add_option("--min-corr", dc.min_corr,
                      "correlation floor for atom selection");
  dec_cmd->add_option("--bins", dc.bins_range, "analysis range LO:HI in Hz");
  dec_cmd->add_option("--hop", dc.hop, "STFT hop, 0 = frame/2");
  dec_cmd->add_option("--jobs", dc.jobs, "worker threads, 0 = hardware");
  dec_cmd->add_flag("--ksweep", dc.ksweep,
                    "print aggregate GoA for every budget 1..max-atoms");
  dec_cmd->callback([&] {
    action = [&] {
      const DeviceDictionary dict = load_dictionary(dc.dict);
      double rate = 0.0;
      const Eigen::MatrixXd capture = read_wav(dc.capture, &rate);
      if (rate != dict.freqs.sample_rate)
        throw InvalidArgument("capture sample rate does not match dictionary");
      if (static_cast<size_t>(capture.cols()) != dict.num_mics())
        throw InvalidArgument("capture channels do not match dictionary");
      if (capture.squaredNorm() <= 0.0)
        throw InvalidArgument("no signal energy in the capture");
      DecompositionConfig cfg;
      cfg.max_atoms = dc.max_atoms;
      cfg.residual_stop_db = dc.stop_db;
      cfg.min_correlation = dc.min_corr;
      std::tie(cfg.bin_lo_hz, cfg.bin_hi_hz) = parse_range(dc.bins_range);
      cfg.validate();
      const StftConfig scfg = stft_config_for(dict.freqs, dc.hop);
      const SpectralTensor spec = stft(capture, scfg);
      const TimeFrequencyMap map = decompose(spec, dict, cfg, dc.jobs);
      if (dc.ksweep) {
        run_ksweep(spec, dict, cfg, dc.jobs);
      } else {
        print_goa_table(goa(map, dict, spec), dict.freqs);
      }
      save_map(map, dc.out);
    };
  });

  // synth: map + target dictionary -> audio.
  auto *synth_cmd = app.add_subcommand(
      "synth", "re-render a decomposition through a device dictionary");
  struct {
    std::string map, dict, out, noise_wav, noise_map;
    double noise_gain = 1.0;
    uint32_t hop = 0;
    int jobs = 0;
  } sy;
  synth_cmd->add_option("--map", sy.map, "decomposition .tfm")->required();
  synth_cmd->add_option("--dict", sy.dict, "target dictionary .wfd")
      ->required();
  synth_cmd->add_option("--out", sy.out, "output WAV path")->required();
  auto *nw = synth_cmd->add_option("--noise-wav", sy.noise_wav,
                                   "additive noise WAV for the target device");
  auto *nm = synth_cmd->add_option(
      "--noise-map", sy.noise_map,
      "additive noise .tfm rendered through the target dictionary");
  nw->excludes(nm);
  synth_cmd->add_option("--noise-gain", sy.noise_gain, "noise scale factor");
  synth_cmd->add_option("--hop", sy.hop, "STFT hop, 0 = frame/2");
  synth_cmd->callback([&] {
    action = [&] {
      const DeviceDictionary dict = load_dictionary(sy.dict);
      const TimeFrequencyMap map = load_map(sy.map);
      const StftConfig scfg = stft_config_for(dict.freqs, sy.hop);
      NoiseMap noise;
      const NoiseMap *noise_ptr = nullptr;
      if (!sy.noise_wav.empty()) {
        double rate = 0.0;
        const Eigen::MatrixXd samples = read_wav(sy.noise_wav, &rate);
        if (rate != dict.freqs.sample_rate)
          throw InvalidArgument("noise sample rate does not match dictionary");
        SpectralTensor nspec = stft(samples, scfg);
        if (nspec.frames < map.frames)
          throw InvalidArgument("noise recording shorter than the map");
        if (nspec.frames > map.frames) {
          SpectralTensor cut(scfg, map.frames, nspec.bins, nspec.channels);
          std::copy_n(nspec.data.begin(), cut.data.size(), cut.data.begin());
          nspec = std::move(cut);
        }
        noise = std::move(nspec);
        noise_ptr = &noise;
      } else if (!sy.noise_map.empty()) {
        noise = load_map(sy.noise_map);
        noise_ptr = &noise;
      }
      const Eigen::MatrixXd out =
          render(map, dict, scfg, noise_ptr, sy.noise_gain);
      write_wav(sy.out, out, dict.freqs.sample_rate);
    };
  });

  // rir: transfer-function estimation and application.
  auto *rir_cmd = app.add_subcommand(
      "rir", "room impulse response estimation over long captures");
  rir_cmd->require_subcommand(1);
  struct {
    std::string source, capture, rir, out;
    uint32_t frame = 1024, length = 0;
    double eps = 1e-6, fs = 16000.0;
  } rr;
  auto *est = rir_cmd->add_subcommand(
      "estimate", "cross-spectral transfer function from source and capture");
  est->add_option("--source", rr.source, "1-channel excitation WAV")
      ->required();
  est->add_option("--capture", rr.capture, "multichannel response WAV")
      ->required();
  est->add_option("--out", rr.out, "output .rir path")->required();
  est->add_option("--frame", rr.frame, "analysis frame size")
      ->check(CLI::PositiveNumber);
  est->add_option("--eps", rr.eps, "spectral floor relative to peak");
  est->callback([&] {
    action = [&] {
      double src_rate = 0.0, cap_rate = 0.0;
      const Eigen::MatrixXd source = read_wav(rr.source, &src_rate);
      const Eigen::MatrixXd capture = read_wav(rr.capture, &cap_rate);
      if (source.cols() != 1)
        throw InvalidArgument("source must have exactly 1 channel");
      if (src_rate != cap_rate)
        throw InvalidArgument("source and capture sample rates differ");
      if (source.rows() != capture.rows())
        throw InvalidArgument("source and capture lengths differ");
      StftConfig cfg;
      cfg.frame_size = rr.frame;
      cfg.hop = rr.frame / 2;
      cfg.sample_rate = src_rate;
      cfg.validate();
      CrossSpectra cross;
      accumulate(cross, stft(source, cfg), stft(capture, cfg));
      save_rir(estimate_rir(cross, rr.eps), rr.out);
    };
  });
  auto *apply = rir_cmd->add_subcommand(
      "apply", "filter a source through an estimated transfer function");
  apply->add_option("--rir", rr.rir, "input .rir path")->required();
  apply->add_option("--source", rr.source, "1-channel source WAV")
      ->required();
  apply->add_option("--out", rr.out, "output WAV path")->required();
  apply->callback([&] {
    action = [&] {
      const TransferFunction tf = load_rir(rr.rir);
      const Eigen::VectorXd source =
          load_mono(rr.source, tf.sample_rate, "source");
      StftConfig cfg;
      cfg.frame_size = tf.fft_size;
      cfg.hop = tf.fft_size / 2;
      cfg.sample_rate = tf.sample_rate;
      cfg.validate();
      const SpectralTensor out = apply_rir(tf, stft(source, cfg));
      write_wav(rr.out, istft(out, cfg), tf.sample_rate);
    };
  });
  auto *exp = rir_cmd->add_subcommand(
      "export", "inverse-transform a transfer function to an impulse WAV");
  exp->add_option("--rir", rr.rir, "input .rir path")->required();
  exp->add_option("--out", rr.out, "output WAV path")->required();
  exp->add_option("--length", rr.length,
                  "impulse response taps, 0 = full frame");
  exp->callback([&] {
    action = [&] {
      const TransferFunction tf = load_rir(rr.rir);
      const uint32_t n = rr.length == 0 ? tf.fft_size : rr.length;
      write_wav(rr.out, to_impulse_response(tf, n), tf.sample_rate);
    };
  });

  // sim: image-source oracle capture.
  auto *sim_cmd = app.add_subcommand(
      "sim", "simulate an array capture in a shoebox room");
  struct {
    std::string room, geometry, source, out;
    int jobs = 0;
  } sm;
  sim_cmd->add_option("--room", sm.room, "room JSON")->required();
  sim_cmd->add_option("--geometry", sm.geometry, "array geometry JSON")
      ->required();
  sim_cmd->add_option("--source", sm.source, "1-channel source WAV")
      ->required();
  sim_cmd->add_option("--out", sm.out, "output capture WAV")->required();
  sim_cmd->add_option("--jobs", sm.jobs, "worker threads, 0 = hardware");
  sim_cmd->callback([&] {
    action = [&] {
      const RoomSpec room = RoomSpec::from_json(slurp(sm.room));
      const ArrayGeometry geom = load_geometry(sm.geometry);
      const Eigen::VectorXd source =
          load_mono(sm.source, room.sample_rate, "source");
      const Eigen::MatrixXd capture =
          simulate_capture(room, geom, source, sm.jobs);
      write_wav(sm.out, capture, room.sample_rate);
    };
  });

  // make-noise: deterministic Gaussian excitation.
  auto *noise_cmd = app.add_subcommand(
      "make-noise", "write seeded white Gaussian noise to a WAV file");
  struct {
    std::string out;
    double seconds = 1.0, fs = 16000.0, rms = 0.1;
    int channels = 1;
    uint64_t seed = 0;
  } mn;
  noise_cmd->add_option("--out", mn.out, "output WAV path")->required();
  noise_cmd->add_option("--seconds", mn.seconds, "duration")
      ->check(CLI::PositiveNumber);
  noise_cmd->add_option("--fs", mn.fs, "sample rate in Hz")
      ->check(CLI::PositiveNumber);
  noise_cmd->add_option("--channels", mn.channels, "channel count")
      ->check(CLI::PositiveNumber);
  noise_cmd->add_option("--rms", mn.rms, "per-sample standard deviation")
      ->check(CLI::PositiveNumber);
  noise_cmd->add_option("--seed", mn.seed, "generator seed");
  noise_cmd->callback([&] {
    action = [&] {
      const auto n = static_cast<Eigen::Index>(std::llround(mn.seconds * mn.fs));
      if (n < 1) throw InvalidArgument("duration too short");
      std::mt19937_64 rng(mn.seed);
      std::normal_distribution<double> dist(0.0, mn.rms);
      Eigen::MatrixXd samples(n, mn.channels);
      for (int c = 0; c < mn.channels; ++c)
        for (Eigen::Index i = 0; i < n; ++i) samples(i, c) = dist(rng);
      write_wav(mn.out, samples, mn.fs);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }
  return run_guarded(action);
}
