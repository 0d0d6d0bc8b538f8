// Copyright 2026 The entail-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTAIL_FORGE_DEGRADE_H_
#define ENTAIL_FORGE_DEGRADE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "entail_forge/pairgen.h"

namespace entail_forge::degrade {

// Accuracies are on the 0-100 percentage scale throughout.
struct DegradationRecord {
  std::string model;
  double data_pct = 100.0;  // (0, 100]
  double test_loss = 0.0;
  double test_acc = 0.0;  // [0, 100]

  friend bool operator==(const DegradationRecord&, const DegradationRecord&) = default;
};

// round(n * pct / 100), halves rounded away from zero.
std::size_t subsample_size(std::size_t n, double pct);

// Seeded draw without replacement of subsample_size(|train|, pct) pairs,
// returned in their original train order. With stratify, each label's share
// is rounded separately and the larger label gives up (or, when short,
// takes) pairs until the total matches. Throws UsageError unless
// 0 < pct <= 100.
std::vector<pairgen::NLIPair> subsample_train(const std::vector<pairgen::NLIPair>& train,
                                              double pct, std::uint64_t seed,
                                              bool stratify = true);

// acc_100 - acc_p; positive when accuracy dropped.
double accuracy_degradation(double acc_100, double acc_p);

// ad / acc_100 * 100. Throws DataError when acc_100 is zero.
double degradation_percentage(double ad, double acc_100);

// Population standard deviation of the degradation percentages. Throws
// DataError with fewer than two values.
double degradation_speed(std::span<const double> dps);

struct ReportRow {
  double data_pct = 0.0;
  double test_loss = 0.0;
  double test_acc = 0.0;
  std::optional<double> acc_deg;  // empty on the 100% row
  std::optional<double> deg_pct;
};

struct ModelReport {
  std::string model;
  double acc_100 = 0.0;
  std::vector<ReportRow> rows;  // descending data_pct, 100% first
  std::optional<double> degradation_speed;  // needs two or more reduced rows
};

struct DegradationReport {
  std::vector<ModelReport> models;  // in order of first appearance
};

// Validates the records (ranges, one per (model, data_pct), a 100% record
// per model plus at least one reduced record) and computes every derived
// column. The speed is left empty for a model with a single reduced record.
DegradationReport build_report(const std::vector<DegradationRecord>& records);

// Two decimals, halves rounded away from zero.
std::string format_fixed2(double value);

enum class TableStyle {
  kPaper,  // negated accuracy degradation and % suffixes
  kPlain,  // values as computed
};

// model,data_pct,test_loss,test_acc,acc_deg,deg_pct,deg_speed
void write_report_csv(std::ostream& out, const DegradationReport& report);
// Markdown table with one block of rows per model.
std::string render_table(const DegradationReport& report, TableStyle style);

// CSV with header model,data_pct,test_loss,test_acc (double quotes allowed).
std::vector<DegradationRecord> parse_records_csv(std::istream& in,
                                                 const std::string& source_name);
std::vector<DegradationRecord> read_records_csv(const std::filesystem::path& path);
void write_records_csv(std::ostream& out, const std::vector<DegradationRecord>& records);

}  // namespace entail_forge::degrade

#endif  // ENTAIL_FORGE_DEGRADE_H_
