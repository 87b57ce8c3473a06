// Copyright 2026 The fcm-stats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fcmc: generate, code, inspect and evaluate feature-tensor streams.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fcm/bitstream.h"
#include "fcm/config.h"
#include "fcm/ftns_io.h"
#include "fcm/metrics.h"
#include "fcm/pipeline.h"

namespace {

constexpr int kExitRuntimeError = 1;
constexpr int kExitUsageError = 2;

// Encode flags, kept as text and applied over the config file in one place.
struct EncodeFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool temporal = false;
};

void AddEncodeFlags(CLI::App* cmd, EncodeFlags& flags) {
  cmd->add_option("--config", flags.config_file, "key = value config file; flags override it");
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"--mode", "mode"},
      {"--q", "q"},
      {"--refresh", "refresh"},
      {"--codec", "codec"},
      {"--codec-param", "codec_param"},
      {"--deflate-level", "deflate_level"},
      {"--fusion", "fusion"},
      {"--fps", "fps"},
      {"--external-encode", "external_encode"},
      {"--external-decode", "external_decode"},
  };
  for (const auto& [flag, key] : keys) {
    cmd->add_option_function<std::string>(
        flag, [&flags, key = key](const std::string& v) { flags.values[key] = v; },
        "sets config key '" + key + "'");
  }
  cmd->add_flag("--temporal", flags.temporal, "drop every other frame before coding");
}

fcm::EncodeConfig ResolveConfig(const EncodeFlags& flags) {
  fcm::EncodeConfig config;
  if (!flags.config_file.empty()) config = fcm::ReadConfigFile(flags.config_file);
  for (const auto& [key, value] : flags.values) fcm::ApplyConfigValue(config, key, value);
  if (flags.temporal) config.temporal = true;
  return config;
}

std::string OneLine(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

std::vector<std::uint8_t> ToBytes(const std::string& s) { return {s.begin(), s.end()}; }

void WriteText(const std::string& path, const std::string& text) {
  fcm::WriteFileBytes(path, ToBytes(text));
}

std::string ReadText(const std::string& path) {
  const auto bytes = fcm::ReadFileBytes(path);
  return {bytes.begin(), bytes.end()};
}

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

void PrintAccounting(const fcm::BitrateReport& r) {
  std::cout << "accounting: total_bytes=" << r.total_bytes << " header_bytes=" << r.header_bytes
            << " stats_bytes=" << r.stats_bytes << " minmax_bytes=" << r.minmax_bytes
            << " framing_bytes=" << r.framing_bytes << " payload_bytes=" << r.payload_bytes
            << " frames=" << r.frame_count << " kbps=" << Fixed(r.kbps, 9) << "\n";
}

void PrintFidelity(const fcm::FidelityReport& f) {
  auto line = [](const std::string& name, const fcm::TensorFidelity& t) {
    std::cout << "fidelity " << name << ": mse=" << Fixed(t.mse) << " psnr_db=" << Fixed(t.psnr_db)
              << " snr_db=" << Fixed(t.snr_db) << " mean_drift=" << Fixed(t.mean_drift)
              << " std_drift=" << Fixed(t.std_drift) << " mean_drift_rel=" << Fixed(t.mean_drift_rel)
              << " std_drift_rel=" << Fixed(t.std_drift_rel) << "\n";
  };
  for (std::size_t n = 0; n < f.per_tensor.size(); ++n) line("tensor" + std::to_string(n), f.per_tensor[n]);
  line("overall", f.overall);
}

// ---- gen ----

struct GenArgs {
  std::string preset = "fpn";
  std::string shapes;
  std::string input_size = "256x256";
  std::uint32_t frames = 8;
  std::uint64_t seed = 0;
  double drift = 0.0;
  std::string output;
};

fcm::ShapeSpec ResolveShapes(const GenArgs& a) {
  if (!a.shapes.empty()) return fcm::ParseShapeSpec(a.shapes);
  if (a.preset == "darknet") return fcm::DarknetShapes();
  if (a.preset == "darknet-alt") return fcm::DarknetAltShapes();
  if (a.preset == "fpn") {
    const auto x = a.input_size.find('x');
    unsigned long h = 0, w = 0;
    try {
      if (x == std::string::npos) throw std::invalid_argument("no x");
      h = std::stoul(a.input_size.substr(0, x));
      w = std::stoul(a.input_size.substr(x + 1));
    } catch (const std::exception&) {
      fcm::Fail(fcm::ErrorCode::kConfigError, "--input-size expects HxW, got '" + a.input_size + "'");
    }
    return fcm::FpnShapes(static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(w));
  }
  fcm::Fail(fcm::ErrorCode::kConfigError, "unknown preset '" + a.preset + "'");
}

std::string SpecText(const fcm::ShapeSpec& layout) {
  std::string out;
  for (const auto& s : layout) out += (out.empty() ? "" : ",") + fcm::ToString(s);
  return out;
}

int RunGen(const GenArgs& a) {
  const fcm::ShapeSpec layout = ResolveShapes(a);
  std::cout << "config: gen shapes=" << SpecText(layout) << " frames=" << a.frames
            << " seed=" << a.seed << " drift=" << Fixed(a.drift, 17) << "\n";
  fcm::WriteFtnsFile(a.output, fcm::GenerateSequence(layout, a.frames, a.seed, a.drift));
  std::cout << "wrote " << a.output << "\n";
  return 0;
}

// ---- encode / decode ----

struct IoArgs {
  std::string input;
  std::string output;
};

int RunEncode(const IoArgs& io, const EncodeFlags& flags) {
  const fcm::EncodeConfig config = ResolveConfig(flags);
  std::cout << "config: encode " << fcm::FormatConfig(config) << "\n";
  const auto bytes = fcm::Encode(fcm::ReadFtnsFile(io.input), config);
  fcm::WriteFileBytes(io.output, bytes);
  PrintAccounting(fcm::Account(std::span<const std::uint8_t>(bytes)));
  return 0;
}

fcm::CodecOptions DecodeOptions(const EncodeFlags& flags) {
  fcm::EncodeConfig c = ResolveConfig(flags);
  return c.codec_options;
}

int RunDecode(const IoArgs& io, const EncodeFlags& flags) {
  const fcm::CodecOptions options = DecodeOptions(flags);
  std::cout << "config: decode external_decode=" << options.external.decode_command << "\n";
  const fcm::Sequence seq = fcm::Decode(fcm::ReadFileBytes(io.input), options);
  fcm::WriteFtnsFile(io.output, seq);
  std::cout << "wrote " << io.output << " frames=" << seq.size() << "\n";
  return 0;
}

// ---- inspect ----

int RunInspect(const std::string& input) {
  std::cout << "config: inspect\n";
  const auto bytes = fcm::ReadFileBytes(input);
  const fcm::Stream s = fcm::Demux(bytes);
  const fcm::StreamHeader& h = s.header;
  std::cout << "header: mode=" << fcm::ModeName(h.mode) << " q=" << int{h.bit_depth}
            << " N=" << h.num_tensors() << " refresh=" << h.refresh_period
            << " fusion=" << (h.fusion_id == fcm::FusionId::kIdentity ? "identity" : "s2c")
            << " codec=" << fcm::CodecName(h.codec_id) << " temporal=" << (h.temporal ? 1 : 0)
            << " frames=" << h.frame_count << " coded_frames=" << h.coded_frame_count()
            << " fps=" << h.fps_num << "/" << h.fps_den << "\n";
  for (std::size_t n = 0; n < h.shapes.size(); ++n) {
    std::cout << "shape " << n << ": " << fcm::ToString(h.shapes[n]) << "\n";
  }
  std::cout << "fused shape: " << fcm::ToString(h.fused_shape) << "\n";
  for (std::size_t k = 0; k < s.stats_segments.size(); ++k) {
    const fcm::StatsParams p =
        fcm::DecodeStats(s.stats_segments[k], h.mode, h.num_tensors(), h.refresh_period);
    std::cout << "stats " << k << " (coded frame " << k * h.refresh_period << "):";
    for (std::size_t n = 0; n < p.per_tensor.size(); ++n) {
      std::cout << " t" << n << "=(" << Fixed(p.per_tensor[n].mean, 9) << ", "
                << Fixed(p.per_tensor[n].stddev, 9) << ")";
    }
    if (p.fused) std::cout << " fused=(" << Fixed(p.fused->mean, 9) << ", " << Fixed(p.fused->stddev, 9) << ")";
    if (p.pooled) std::cout << " pooled=(" << Fixed(p.pooled->mean, 9) << ", " << Fixed(p.pooled->stddev, 9) << ")";
    std::cout << "\n";
  }
  PrintAccounting(fcm::Account(std::span<const std::uint8_t>(bytes)));
  return 0;
}

// ---- roundtrip ----

int RunRoundtrip(const IoArgs& io, const EncodeFlags& flags) {
  const fcm::EncodeConfig config = ResolveConfig(flags);
  std::cout << "config: roundtrip " << fcm::FormatConfig(config) << "\n";
  const fcm::Sequence seq = fcm::ReadFtnsFile(io.input);
  const auto bytes = fcm::Encode(seq, config);
  if (!io.output.empty()) fcm::WriteFileBytes(io.output, bytes);
  PrintAccounting(fcm::Account(std::span<const std::uint8_t>(bytes)));
  PrintFidelity(fcm::Fidelity(seq, fcm::Decode(bytes, config.codec_options)));
  return 0;
}

// ---- sweep ----

struct SweepArgs {
  std::string input;
  std::string output;
  std::string json;
  std::vector<std::string> modes = {"baseline", "full"};
  std::vector<std::string> qs = {"10"};
  std::vector<std::string> refresh = {"32"};
  std::vector<std::string> codecs = {"raw"};
  std::vector<std::string> codec_params = {"0"};
  std::vector<std::string> temporal = {"0"};
  unsigned workers = 1;
};

int RunSweep(const SweepArgs& a, const EncodeFlags& flags) {
  const fcm::EncodeConfig base = ResolveConfig(flags);
  std::vector<fcm::EncodeConfig> configs;
  for (const auto& mode : a.modes)
    for (const auto& q : a.qs)
      for (const auto& l : a.refresh)
        for (const auto& codec : a.codecs)
          for (const auto& param : a.codec_params)
            for (const auto& t : a.temporal) {
              fcm::EncodeConfig c = base;
              fcm::ApplyConfigValue(c, "mode", mode);
              fcm::ApplyConfigValue(c, "q", q);
              fcm::ApplyConfigValue(c, "refresh", l);
              fcm::ApplyConfigValue(c, "codec", codec);
              fcm::ApplyConfigValue(c, "codec_param", param);
              fcm::ApplyConfigValue(c, "temporal", t);
              configs.push_back(c);
            }
  std::cout << "config: sweep base " << fcm::FormatConfig(base) << " configs=" << configs.size()
            << " workers=" << a.workers << "\n";
  for (const auto& c : configs) std::cout << "config: row " << fcm::FormatConfig(c) << "\n";
  const auto rows = fcm::Sweep(fcm::ReadFtnsFile(a.input), configs, a.workers);
  WriteText(a.output, fcm::SweepCsv(rows));
  if (!a.json.empty()) WriteText(a.json, fcm::SweepJson(rows));
  std::cout << "wrote " << a.output << " rows=" << rows.size() << "\n";
  return 0;
}

// ---- bdrate ----

struct BdArgs {
  std::string anchor;
  std::string test;
  std::string rate_column = "kbps";
  std::string accuracy_column = "accuracy";
  std::string anchor_where;
  std::string test_where;
};

// Keeps the header and the rows whose `column=value` filter matches.
std::string FilterCsv(const std::string& csv, const std::string& where) {
  if (where.empty()) return csv;
  const auto eq = where.find('=');
  if (eq == std::string::npos) {
    fcm::Fail(fcm::ErrorCode::kConfigError, "filter must look like column=value, got '" + where + "'");
  }
  const std::string column = where.substr(0, eq);
  const std::string value = where.substr(eq + 1);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::string out = line + "\n";
  std::vector<std::string> header;
  {
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) header.push_back(cell);
  }
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) fcm::Fail(fcm::ErrorCode::kInvalidInput, "CSV has no column '" + column + "'");
  const std::size_t idx = static_cast<std::size_t>(it - header.begin());
  while (std::getline(in, line)) {
    std::stringstream cells(line);
    std::string cell;
    for (std::size_t i = 0; i <= idx && std::getline(cells, cell, ','); ++i) {
    }
    if (cell == value) out += line + "\n";
  }
  return out;
}

std::vector<fcm::RateAccuracyPoint> LoadCurve(const std::string& path, const std::string& where,
                                              const BdArgs& a) {
  auto points = fcm::ParseCurveCsv(FilterCsv(ReadText(path), where), a.rate_column,
                                   a.accuracy_column);
  std::sort(points.begin(), points.end(),
            [](const auto& x, const auto& y) { return x.rate < y.rate; });
  return points;
}

int RunBdRate(const BdArgs& a) {
  std::cout << "config: bdrate anchor=" << a.anchor << " test=" << a.test
            << " rate_column=" << a.rate_column << " accuracy_column=" << a.accuracy_column
            << " anchor_where=" << a.anchor_where << " test_where=" << a.test_where << "\n";
  const auto anchor = LoadCurve(a.anchor, a.anchor_where, a);
  const auto test = LoadCurve(a.test.empty() ? a.anchor : a.test, a.test_where, a);
  std::cout << "bdrate_percent=" << Fixed(fcm::BdRate(anchor, test), 9) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-tensor stream codec with global statistics signalling"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "synthesize an FTNS feature sequence");
  gen->add_option("--preset", gen_args.preset, "fpn, darknet or darknet-alt")->capture_default_str();
  gen->add_option("--shapes", gen_args.shapes, "custom shapes CxHxW,CxHxW,...");
  gen->add_option("--input-size", gen_args.input_size, "network input HxW for the fpn preset")
      ->capture_default_str();
  gen->add_option("--frames", gen_args.frames, "frame count")->capture_default_str()->check(CLI::Range(1u, 1u << 20));
  gen->add_option("--seed", gen_args.seed, "generator seed")->capture_default_str();
  gen->add_option("--drift", gen_args.drift, "per-frame drift of target moments")->capture_default_str();
  gen->add_option("-o,--output", gen_args.output, "output FTNS file")->required();

  IoArgs enc_io;
  EncodeFlags enc_flags;
  auto* enc = app.add_subcommand("encode", "FTNS in, FCMS out");
  enc->add_option("-i,--input", enc_io.input, "input FTNS file")->required();
  enc->add_option("-o,--output", enc_io.output, "output FCMS file")->required();
  AddEncodeFlags(enc, enc_flags);

  IoArgs dec_io;
  EncodeFlags dec_flags;
  auto* dec = app.add_subcommand("decode", "FCMS in, FTNS out");
  dec->add_option("-i,--input", dec_io.input, "input FCMS file")->required();
  dec->add_option("-o,--output", dec_io.output, "output FTNS file")->required();
  dec->add_option("--config", dec_flags.config_file, "config file (external codec commands)");
  dec->add_option_function<std::string>(
      "--external-decode", [&](const std::string& v) { dec_flags.values["external_decode"] = v; },
      "decode command for the external codec");

  std::string inspect_input;
  auto* ins = app.add_subcommand("inspect", "dump header, statistics and byte accounting");
  ins->add_option("input", inspect_input, "FCMS file")->required();

  IoArgs rt_io;
  EncodeFlags rt_flags;
  auto* rt = app.add_subcommand("roundtrip", "encode, decode and report fidelity");
  rt->add_option("-i,--input", rt_io.input, "input FTNS file")->required();
  rt->add_option("-o,--output", rt_io.output, "optional FCMS file to keep");
  AddEncodeFlags(rt, rt_flags);

  SweepArgs sw_args;
  EncodeFlags sw_flags;
  auto* sw = app.add_subcommand("sweep", "run a config matrix and write CSV");
  sw->add_option("-i,--input", sw_args.input, "input FTNS file")->required();
  sw->add_option("-o,--output", sw_args.output, "output CSV")->required();
  sw->add_option("--json", sw_args.json, "optional JSON mirror of the CSV");
  sw->add_option("--config", sw_flags.config_file, "base config file");
  sw->add_option("--modes", sw_args.modes, "modes to sweep")->delimiter(',')->capture_default_str();
  sw->add_option("--qs", sw_args.qs, "bit depths to sweep")->delimiter(',')->capture_default_str();
  sw->add_option("--refresh", sw_args.refresh, "refresh periods to sweep")->delimiter(',')->capture_default_str();
  sw->add_option("--codecs", sw_args.codecs, "codecs to sweep")->delimiter(',')->capture_default_str();
  sw->add_option("--codec-params", sw_args.codec_params, "codec parameters to sweep")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--temporal", sw_args.temporal, "temporal flags to sweep")->delimiter(',')->capture_default_str();
  sw->add_option("--workers", sw_args.workers, "parallel configs")->capture_default_str()->check(CLI::Range(1u, 256u));

  BdArgs bd_args;
  auto* bd = app.add_subcommand("bdrate", "BD-rate of a test curve against an anchor curve");
  bd->add_option("--anchor", bd_args.anchor, "anchor CSV")->required();
  bd->add_option("--test", bd_args.test, "test CSV (defaults to the anchor file)");
  bd->add_option("--rate-column", bd_args.rate_column)->capture_default_str();
  bd->add_option("--accuracy-column", bd_args.accuracy_column)->capture_default_str();
  bd->add_option("--anchor-where", bd_args.anchor_where, "row filter column=value for the anchor");
  bd->add_option("--test-where", bd_args.test_where, "row filter column=value for the test curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fcmc: error: Usage: " << OneLine(e.what()) << "\n";
    return kExitUsageError;
  }

  try {
    if (*gen) return RunGen(gen_args);
    if (*enc) return RunEncode(enc_io, enc_flags);
    if (*dec) return RunDecode(dec_io, dec_flags);
    if (*ins) return RunInspect(inspect_input);
    if (*rt) return RunRoundtrip(rt_io, rt_flags);
    if (*sw) return RunSweep(sw_args, sw_flags);
    if (*bd) return RunBdRate(bd_args);
  } catch (const fcm::Error& e) {
    std::cerr << "fcmc: error: " << fcm::ErrorCodeName(e.code()) << ": " << OneLine(e.what()) << "\n";
    return e.code() == fcm::ErrorCode::kConfigError ? kExitUsageError : kExitRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "fcmc: error: Internal: " << OneLine(e.what()) << "\n";
    return kExitRuntimeError;
  }
  return kExitUsageError;
}
