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

#include "fcm/metrics.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "fcm/pipeline.h"
#include "json.hpp"

namespace fcm {
namespace {

double Decibels(double ratio) {
  if (!(ratio < std::pow(10.0, kMaxDecibels / 10.0))) return kMaxDecibels;
  return 10.0 * std::log10(std::max(ratio, std::numeric_limits<double>::min()));
}

struct Accumulator {
  double sq_error = 0.0;
  double energy = 0.0;  // sum of squared deviations from the frame mean
  double count = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void Add(const Accumulator& o) {
    sq_error += o.sq_error;
    energy += o.energy;
    count += o.count;
    lo = std::min(lo, o.lo);
    hi = std::max(hi, o.hi);
  }

  void Finish(TensorFidelity& f) const {
    f.mse = sq_error / count;
    const double range = hi - lo;
    f.psnr_db = sq_error == 0.0 ? kMaxDecibels : Decibels(range * range / f.mse);
    f.snr_db = sq_error == 0.0 ? kMaxDecibels : Decibels(energy / sq_error);
  }
};

double Relative(double diff, double reference) {
  if (diff == 0.0) return 0.0;
  return diff / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class NaturalSpline {
 public:
  NaturalSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
    const int n = static_cast<int>(x_.size());
    // Thomas algorithm on the interior second derivatives; m_0 = m_{n-1} = 0.
    std::vector<double> diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      diag[i] = 2.0 * (h0 + h1);
      upper[i] = h1;
      rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
      if (i > 1) {
        const double w = h0 / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
    }
    for (int i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    }
  }

  double Integral(double lo, double hi) const {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      const double a = std::max(lo, x_[i]);
      const double b = std::min(hi, x_[i + 1]);
      if (b > a) total += Antiderivative(i, b) - Antiderivative(i, a);
    }
    return total;
  }

 private:
  double Antiderivative(std::size_t i, double x) const {
    const double h = x_[i + 1] - x_[i];
    const double l = x_[i + 1] - x;
    const double r = x - x_[i];
    return -m_[i] * l * l * l * l / (24.0 * h) + m_[i + 1] * r * r * r * r / (24.0 * h) -
           (y_[i] / h - m_[i] * h / 6.0) * l * l / 2.0 +
           (y_[i + 1] / h - m_[i + 1] * h / 6.0) * r * r / 2.0;
  }

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

NaturalSpline LogRateSpline(std::span<const RateAccuracyPoint> curve, double* lo, double* hi) {
  if (curve.size() < 4) {
    Fail(ErrorCode::kInsufficientPoints,
         "BD-rate needs at least 4 points per curve, got " + std::to_string(curve.size()));
  }
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve[i].rate > 0.0) || !std::isfinite(curve[i].rate) ||
        !std::isfinite(curve[i].accuracy)) {
      Fail(ErrorCode::kInvalidInput, "rates must be positive and finite");
    }
    if (i > 0 && !(curve[i].rate > curve[i - 1].rate)) {
      Fail(ErrorCode::kInvalidInput, "rates must be strictly increasing");
    }
  }
  std::vector<RateAccuracyPoint> sorted(curve.begin(), curve.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.accuracy < b.accuracy; });
  std::vector<double> x, y;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i].accuracy == sorted[i - 1].accuracy) {
      Fail(ErrorCode::kInvalidInput, "accuracies must be distinct");
    }
    x.push_back(sorted[i].accuracy);
    y.push_back(std::log(sorted[i].rate));
  }
  *lo = x.front();
  *hi = x.back();
  return NaturalSpline(std::move(x), std::move(y));
}

std::string Number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace

FidelityReport Fidelity(const Sequence& original, const Sequence& reconstructed) {
  if (original.size() != reconstructed.size()) {
    Fail(ErrorCode::kInvalidInput, "sequences differ in length: " +
                                       std::to_string(original.size()) + " vs " +
                                       std::to_string(reconstructed.size()));
  }
  const ShapeSpec shapes = ValidateSequence(original);
  if (ValidateSequence(reconstructed) != shapes) {
    Fail(ErrorCode::kInvalidInput, "sequences differ in tensor shapes");
  }

  FidelityReport report;
  report.per_tensor.resize(shapes.size());
  Accumulator all;
  for (std::size_t n = 0; n < shapes.size(); ++n) {
    Accumulator acc;
    TensorFidelity& f = report.per_tensor[n];
    for (std::size_t t = 0; t < original.size(); ++t) {
      const auto o = original[t].tensors[n].data();
      const auto r = reconstructed[t].tensors[n].data();
      const Moments mo = ComputeMoments(o);
      const Moments mr = ComputeMoments(r);
      for (std::size_t i = 0; i < o.size(); ++i) {
        const double d = static_cast<double>(o[i]) - r[i];
        const double c = o[i] - mo.mean;
        acc.sq_error += d * d;
        acc.energy += c * c;
        acc.lo = std::min<double>(acc.lo, o[i]);
        acc.hi = std::max<double>(acc.hi, o[i]);
      }
      acc.count += static_cast<double>(o.size());
      const double dm = std::abs(mo.mean - mr.mean);
      const double ds = std::abs(mo.stddev - mr.stddev);
      f.mean_drift = std::max(f.mean_drift, dm);
      f.std_drift = std::max(f.std_drift, ds);
      f.mean_drift_rel = std::max(f.mean_drift_rel, Relative(dm, mo.mean));
      f.std_drift_rel = std::max(f.std_drift_rel, Relative(ds, mo.stddev));
    }
    acc.Finish(f);
    all.Add(acc);
    report.overall.mean_drift = std::max(report.overall.mean_drift, f.mean_drift);
    report.overall.std_drift = std::max(report.overall.std_drift, f.std_drift);
    report.overall.mean_drift_rel = std::max(report.overall.mean_drift_rel, f.mean_drift_rel);
    report.overall.std_drift_rel = std::max(report.overall.std_drift_rel, f.std_drift_rel);
  }
  all.Finish(report.overall);
  return report;
}

double BdRate(std::span<const RateAccuracyPoint> anchor,
              std::span<const RateAccuracyPoint> test) {
  double anchor_lo = 0, anchor_hi = 0, test_lo = 0, test_hi = 0;
  const NaturalSpline a = LogRateSpline(anchor, &anchor_lo, &anchor_hi);
  const NaturalSpline t = LogRateSpline(test, &test_lo, &test_hi);
  const double lo = std::max(anchor_lo, test_lo);
  const double hi = std::min(anchor_hi, test_hi);
  if (!(hi > lo)) {
    Fail(ErrorCode::kNoOverlap, "accuracy ranges do not overlap");
  }
  const double avg_diff = (t.Integral(lo, hi) - a.Integral(lo, hi)) / (hi - lo);
  return (std::exp(avg_diff) - 1.0) * 100.0;
}

std::vector<SweepRow> Sweep(const Sequence& seq, std::span<const EncodeConfig> configs,
                            unsigned workers) {
  if (configs.empty()) Fail(ErrorCode::kInvalidInput, "sweep needs at least one config");
  std::vector<SweepRow> rows(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        const auto bytes = Encode(seq, configs[i]);
        rows[i].config = configs[i];
        rows[i].rate = Account(bytes);
        rows[i].fidelity = Fidelity(seq, Decode(bytes, configs[i].codec_options));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(configs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string SweepCsvHeader() {
  return "mode,q,refresh,codec,codec_param,temporal,total_bytes,kbps,header_bytes,"
         "stats_bytes,minmax_bytes,framing_bytes,payload_bytes,mse,psnr_db,"
         "mean_drift,std_drift,mean_drift_rel,std_drift_rel,accuracy";
}

std::string SweepCsv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << SweepCsvHeader() << "\n";
  for (const auto& r : rows) {
    const auto& c = r.config;
    const auto& f = r.fidelity.overall;
    out << ModeName(c.mode) << ',' << c.bit_depth << ',' << c.refresh_period << ','
        << CodecName(c.codec) << ',' << c.codec_options.requant_bits << ','
        << (c.temporal ? 1 : 0) << ',' << r.rate.total_bytes << ',' << Number(r.rate.kbps)
        << ',' << r.rate.header_bytes << ',' << r.rate.stats_bytes << ','
        << r.rate.minmax_bytes << ',' << r.rate.framing_bytes << ',' << r.rate.payload_bytes
        << ',' << Number(f.mse) << ',' << Number(f.psnr_db) << ',' << Number(f.mean_drift)
        << ',' << Number(f.std_drift) << ',' << Number(f.mean_drift_rel) << ','
        << Number(f.std_drift_rel) << ',' << Number(r.fidelity.proxy_accuracy()) << "\n";
  }
  return out.str();
}

std::string SweepJson(std::span<const SweepRow> rows) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : rows) {
    const auto& f = r.fidelity.overall;
    doc.push_back({
        {"config", FormatConfig(r.config)},
        {"mode", ModeName(r.config.mode)},
        {"q", r.config.bit_depth},
        {"refresh", r.config.refresh_period},
        {"codec", CodecName(r.config.codec)},
        {"codec_param", r.config.codec_options.requant_bits},
        {"temporal", r.config.temporal},
        {"total_bytes", r.rate.total_bytes},
        {"kbps", r.rate.kbps},
        {"header_bytes", r.rate.header_bytes},
        {"stats_bytes", r.rate.stats_bytes},
        {"minmax_bytes", r.rate.minmax_bytes},
        {"framing_bytes", r.rate.framing_bytes},
        {"payload_bytes", r.rate.payload_bytes},
        {"mse", f.mse},
        {"psnr_db", f.psnr_db},
        {"mean_drift", f.mean_drift},
        {"std_drift", f.std_drift},
        {"mean_drift_rel", f.mean_drift_rel},
        {"std_drift_rel", f.std_drift_rel},
        {"accuracy", r.fidelity.proxy_accuracy()},
    });
  }
  return doc.dump(2);
}

std::vector<RateAccuracyPoint> ParseCurveCsv(std::string_view csv, std::string_view rate_column,
                                             std::string_view accuracy_column) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kInvalidInput, "empty CSV");
  const auto header = SplitCsvLine(line);
  auto column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      Fail(ErrorCode::kInvalidInput, "CSV has no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t rate_idx = column(rate_column);
  const std::size_t acc_idx = column(accuracy_column);
  std::vector<RateAccuracyPoint> points;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    const auto cells = SplitCsvLine(line);
    if (cells.size() <= std::max(rate_idx, acc_idx)) {
      Fail(ErrorCode::kInvalidInput, "short CSV row: " + line);
    }
    try {
      points.push_back({std::stod(cells[rate_idx]), std::stod(cells[acc_idx])});
    } catch (const std::exception&) {
      Fail(ErrorCode::kInvalidInput, "non-numeric CSV cell in row: " + line);
    }
  }
  return points;
}

}  // namespace fcm
