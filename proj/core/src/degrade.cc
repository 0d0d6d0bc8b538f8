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

#include "entail_forge/degrade.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "entail_forge/error.h"
#include "entail_forge/random.h"

namespace entail_forge::degrade {
namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw InvariantError("number formatting failed");
  return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, const std::string& at) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back().push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(ch);
    }
  }
  if (quoted) throw DataError(at + "unterminated quote");
  return fields;
}

double parse_number(const std::string& text, const char* field, const std::string& at) {
  std::string s = text;
  s.erase(0, s.find_first_not_of(' '));
  s.erase(s.find_last_not_of(' ') + 1);
  if (!s.empty() && s.back() == '%') s.pop_back();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DataError(at + "bad " + field + " value \"" + text + "\"");
  }
  return v;
}

void validate(const DegradationRecord& r, const std::string& at) {
  if (r.model.empty()) throw DataError(at + "empty model name");
  if (!(r.data_pct > 0.0 && r.data_pct <= 100.0)) {
    throw DataError(at + "data_pct must be in (0, 100]");
  }
  if (!(r.test_loss >= 0.0) || !std::isfinite(r.test_loss)) {
    throw DataError(at + "test_loss must be a finite non-negative number");
  }
  if (!(r.test_acc >= 0.0 && r.test_acc <= 100.0)) {
    throw DataError(at + "test_acc must be in [0, 100]");
  }
}

std::string pct_label(double pct) { return shortest(pct) + "%"; }

}  // namespace

std::size_t subsample_size(std::size_t n, double pct) {
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * pct / 100.0));
}

std::vector<pairgen::NLIPair> subsample_train(const std::vector<pairgen::NLIPair>& train,
                                              double pct, std::uint64_t seed,
                                              bool stratify) {
  if (!(pct > 0.0 && pct <= 100.0)) {
    throw UsageError("subsample_train: pct must be in (0, 100], got " + shortest(pct));
  }
  const std::size_t target = subsample_size(train.size(), pct);
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  if (!stratify) {
    chosen = rng.sample_without_replacement(train.size(), target);
  } else {
    std::array<std::vector<std::size_t>, 2> by_label;
    for (std::size_t i = 0; i < train.size(); ++i) {
      by_label[train[i].label == pairgen::Label::kEntailment ? 0 : 1].push_back(i);
    }
    std::array<std::size_t, 2> take = {subsample_size(by_label[0].size(), pct),
                                       subsample_size(by_label[1].size(), pct)};
    while (take[0] + take[1] > target) {
      --take[take[0] >= take[1] ? 0 : 1];
    }
    while (take[0] + take[1] < target) {
      const std::size_t spare0 = by_label[0].size() - take[0];
      const std::size_t spare1 = by_label[1].size() - take[1];
      ++take[spare0 >= spare1 ? 0 : 1];
    }
    for (std::size_t l = 0; l < 2; ++l) {
      for (std::size_t k : rng.sample_without_replacement(by_label[l].size(), take[l])) {
        chosen.push_back(by_label[l][k]);
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<pairgen::NLIPair> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(train[i]);
  return out;
}

double accuracy_degradation(double acc_100, double acc_p) { return acc_100 - acc_p; }

double degradation_percentage(double ad, double acc_100) {
  if (acc_100 == 0.0) {
    throw DataError("degradation_percentage: full-data accuracy is zero");
  }
  return ad / acc_100 * 100.0;
}

double degradation_speed(std::span<const double> dps) {
  if (dps.size() < 2) {
    throw DataError("degradation_speed: need ≥ 2 values, got " +
                    std::to_string(dps.size()));
  }
  double mean = 0.0;
  for (double d : dps) mean += d;
  mean /= static_cast<double>(dps.size());
  double ss = 0.0;
  for (double d : dps) ss += (d - mean) * (d - mean);
  return std::sqrt(ss / static_cast<double>(dps.size()));
}

DegradationReport build_report(const std::vector<DegradationRecord>& records) {
  std::map<std::string, std::map<double, DegradationRecord, std::greater<>>> by_model;
  std::vector<std::string> order;  // first appearance
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    validate(r, "record " + std::to_string(i + 1) + ": ");
    if (by_model.find(r.model) == by_model.end()) order.push_back(r.model);
    if (!by_model[r.model].emplace(r.data_pct, r).second) {
      throw DataError("build_report: duplicate record for model \"" + r.model +
                      "\" at " + pct_label(r.data_pct));
    }
  }
  if (by_model.empty()) throw DataError("build_report: no records");
  DegradationReport report;
  for (const auto& model : order) {
    const auto& rows = by_model.at(model);
    auto full = rows.find(100.0);
    if (full == rows.end()) {
      throw DataError("build_report: model \"" + model + "\" has no 100% record");
    }
    ModelReport m;
    m.model = model;
    m.acc_100 = full->second.test_acc;
    std::vector<double> dps;
    for (const auto& [pct, r] : rows) {
      ReportRow row{pct, r.test_loss, r.test_acc, std::nullopt, std::nullopt};
      if (pct != 100.0) {
        row.acc_deg = accuracy_degradation(m.acc_100, r.test_acc);
        row.deg_pct = degradation_percentage(*row.acc_deg, m.acc_100);
        dps.push_back(*row.deg_pct);
      }
      m.rows.push_back(row);
    }
    if (dps.empty()) {
      throw DataError("build_report: model \"" + model + "\" has only a 100% record");
    }
    if (dps.size() >= 2) m.degradation_speed = degradation_speed(dps);
    report.models.push_back(std::move(m));
  }
  return report;
}

std::string format_fixed2(double value) {
  // Nudge by a relative epsilon so decimal halves stored just below .5 in
  // binary still round away from zero.
  const double scaled = value * 100.0;
  double rounded = std::round(scaled + std::copysign(std::abs(scaled) * 1e-12, scaled));
  if (rounded == 0.0) rounded = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", rounded / 100.0);
  return buf;
}

void write_report_csv(std::ostream& out, const DegradationReport& report) {
  out << "model,data_pct,test_loss,test_acc,acc_deg,deg_pct,deg_speed\n";
  for (const auto& m : report.models) {
    for (const auto& row : m.rows) {
      out << csv_field(m.model) << ',' << shortest(row.data_pct) << ','
          << shortest(row.test_loss) << ',' << shortest(row.test_acc) << ','
          << (row.acc_deg ? format_fixed2(*row.acc_deg) : "") << ','
          << (row.deg_pct ? format_fixed2(*row.deg_pct) : "") << ','
          << (m.degradation_speed ? format_fixed2(*m.degradation_speed) : "") << '\n';
    }
  }
}

std::string render_table(const DegradationReport& report, TableStyle style) {
  const bool paper = style == TableStyle::kPaper;
  std::ostringstream out;
  out << "| Model | Data % | Test Loss | Test Acc | Acc. Deg. | Deg. % | "
         "Degradation Speed |\n";
  out << "|---|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& m : report.models) {
    // The speed sits on the middle row of each model block.
    const std::size_t speed_row = m.rows.size() / 2;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      const auto& row = m.rows[i];
      char loss[32];
      std::snprintf(loss, sizeof(loss), "%.4f", row.test_loss);
      out << "| " << (i == 0 ? m.model : "") << " | " << pct_label(row.data_pct)
          << " | " << loss << " | " << format_fixed2(row.test_acc)
          << (paper ? "%" : "") << " | ";
      if (row.acc_deg) out << format_fixed2(paper ? -*row.acc_deg : *row.acc_deg);
      out << " | ";
      if (row.deg_pct) out << format_fixed2(*row.deg_pct) << (paper ? "%" : "");
      out << " | ";
      if (i == speed_row && m.degradation_speed) out << format_fixed2(*m.degradation_speed);
      out << " |\n";
    }
  }
  return out.str();
}

std::vector<DegradationRecord> parse_records_csv(std::istream& in,
                                                 const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    header = split_csv_line(line, source_name + ":" + std::to_string(line_no) + ": ");
  }
  const std::vector<std::string> expected = {"model", "data_pct", "test_loss", "test_acc"};
  if (header != expected) {
    throw DataError(source_name + ": expected header model,data_pct,test_loss,test_acc");
  }
  std::vector<DegradationRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string at = source_name + ":" + std::to_string(line_no) + ": ";
    auto fields = split_csv_line(line, at);
    if (fields.size() != 4) throw DataError(at + "expected 4 fields");
    DegradationRecord r;
    r.model = fields[0];
    r.data_pct = parse_number(fields[1], "data_pct", at);
    r.test_loss = parse_number(fields[2], "test_loss", at);
    r.test_acc = parse_number(fields[3], "test_acc", at);
    validate(r, at);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<DegradationRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read records file: " + path.string());
  return parse_records_csv(in, path.string());
}

void write_records_csv(std::ostream& out, const std::vector<DegradationRecord>& records) {
  out << "model,data_pct,test_loss,test_acc\n";
  for (const auto& r : records) {
    out << csv_field(r.model) << ',' << shortest(r.data_pct) << ','
        << shortest(r.test_loss) << ',' << shortest(r.test_acc) << '\n';
  }
}

}  // namespace entail_forge::degrade
