// Copyright 2026 The BITS Audit Authors.
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

#ifndef BITS_REPORT_H_
#define BITS_REPORT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bits/bias.h"
#include "bits/corpus.h"
#include "bits/scoring.h"

namespace bits {

// A standardized score joined with its probe's provenance.
struct ScoredItem {
  std::string scorer;
  std::string template_id;
  std::string group;
  std::string group_term;
  double score = 0.0;
};

// Joins in score order. Throws kInconsistentInputs for a score whose
// sentence id is not in `probes`.
std::vector<ScoredItem> JoinScores(const std::vector<ProbeSentence> &probes,
                                   const std::vector<ScoreRecord> &scores);

enum class RowKey { kTemplate, kModel };

struct MeanTable {
  std::string title;
  RowKey row_key = RowKey::kModel;
  std::vector<std::string> rows;
  std::vector<std::string> columns;          // groups, canonical order
  std::vector<std::vector<double>> cells;    // [row][column]
  std::vector<std::vector<size_t>> counts;   // records behind each cell
  std::vector<size_t> min_column;            // leftmost minimum per row
};

// Template rows require items from a single scorer. Throws kEmptyCell
// when a row/group combination has no records.
MeanTable BuildMeanTable(const std::vector<ScoredItem> &items, RowKey row_key,
                         std::string title = {});

inline constexpr const char *kHeatmapGroups[] = {"DSBL", "DSBL_S"};

struct HeatmapData {
  std::vector<std::string> rows;        // group terms
  std::vector<std::string> row_groups;  // group of each term
  std::vector<std::string> columns;     // scorer names
  std::vector<std::vector<double>> cells;
  double display_light = 0.0;
  double display_dark = -0.6;

  bool empty() const { return rows.empty(); }
};

// Mean score per (DSBL or DSBL_S term, scorer). Empty when no such items.
HeatmapData BuildHeatmap(const std::vector<ScoredItem> &items);

// "0.467", "3.5e-06"; values below 2e-16 print as "2e-16".
std::string FormatPValue(double p);
// FormatPValue followed by the star code: "3.5e-06***".
std::string RenderSignificance(double p);

enum class ReportFormat { kDelimited, kMarkdown, kStructured };

struct ReportInputs {
  MeanTable model_means;
  std::vector<MeanTable> template_means;  // one per scorer, may be empty
  std::vector<BiasReport> bias_reports;
  HeatmapData heatmap;
  std::optional<std::string> generated_at;  // omitted in deterministic runs
};

// Returns file name -> content. Pure: identical inputs give identical
// bytes. Throws kInconsistentInputs when the parts disagree on scorers.
std::map<std::string, std::string> RenderReport(const ReportInputs &inputs,
                                                ReportFormat format);

}  // namespace bits

#endif  // BITS_REPORT_H_
