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

#ifndef FCM_METRICS_H_
#define FCM_METRICS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcm/bitstream.h"
#include "fcm/config.h"
#include "fcm/tensor.h"

namespace fcm {

// Reported when reconstruction is exact or the ratio exceeds it.
inline constexpr double kMaxDecibels = 150.0;

struct TensorFidelity {
  double mse = 0.0;
  double psnr_db = kMaxDecibels;  // w.r.t. the original's dynamic range
  double snr_db = kMaxDecibels;   // original variance energy / error energy
  // Worst frame of |mu_orig - mu_rec| and |sigma_orig - sigma_rec|.
  double mean_drift = 0.0;
  double std_drift = 0.0;
  // Same, divided by |mu_orig| and sigma_orig of that frame.
  double mean_drift_rel = 0.0;
  double std_drift_rel = 0.0;
};

struct FidelityReport {
  std::vector<TensorFidelity> per_tensor;
  // Aggregates: MSE/PSNR/SNR over all elements, drifts as the worst tensor.
  TensorFidelity overall;

  // Proxy accuracy score used for rate-accuracy curves. Feature-space SNR;
  // not comparable to task metrics such as mAP or MOTA.
  double proxy_accuracy() const { return overall.snr_db; }
};

FidelityReport Fidelity(const Sequence& original, const Sequence& reconstructed);

struct RateAccuracyPoint {
  double rate = 0.0;
  double accuracy = 0.0;
};

// Bjontegaard delta rate in percent: natural cubic spline of log(rate)
// against accuracy for each curve, integrated over the shared accuracy
// interval. Negative means `test` needs less rate for the same accuracy.
// Needs >= 4 points per curve with strictly increasing rates and distinct
// accuracies; disjoint accuracy ranges raise NoOverlap.
double BdRate(std::span<const RateAccuracyPoint> anchor,
              std::span<const RateAccuracyPoint> test);

struct SweepRow {
  EncodeConfig config;
  BitrateReport rate;
  FidelityReport fidelity;
};

// Encodes and decodes `seq` once per config. Rows come back in config order
// regardless of `workers`.
std::vector<SweepRow> Sweep(const Sequence& seq, std::span<const EncodeConfig> configs,
                            unsigned workers = 1);

// Column order:
// mode,q,refresh,codec,codec_param,temporal,total_bytes,kbps,header_bytes,
// stats_bytes,minmax_bytes,framing_bytes,payload_bytes,mse,psnr_db,
// mean_drift,std_drift,mean_drift_rel,std_drift_rel,accuracy
std::string SweepCsvHeader();
std::string SweepCsv(std::span<const SweepRow> rows);
std::string SweepJson(std::span<const SweepRow> rows);

// Reads (rate, accuracy) pairs from named columns of a CSV with a header row.
std::vector<RateAccuracyPoint> ParseCurveCsv(std::string_view csv,
                                             std::string_view rate_column = "kbps",
                                             std::string_view accuracy_column = "accuracy");

}  // namespace fcm

#endif  // FCM_METRICS_H_
