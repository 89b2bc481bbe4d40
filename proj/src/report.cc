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

#include "bits/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bits/error.h"
#include "bits/lexicon.h"
#include "bits/text_util.h"

namespace bits {

using ordered_json = nlohmann::ordered_json;

std::vector<ScoredItem> JoinScores(const std::vector<ProbeSentence> &probes,
                                   const std::vector<ScoreRecord> &scores) {
  std::unordered_map<std::string, const ProbeSentence *> index;
  for (const auto &p : probes) index.emplace(p.id, &p);
  std::vector<ScoredItem> items;
  items.reserve(scores.size());
  for (const auto &s : scores) {
    auto it = index.find(s.sentence_id);
    if (it == index.end()) {
      throw Error(ErrorCode::kInconsistentInputs,
                  "score for unknown sentence " + s.sentence_id);
    }
    const auto &p = *it->second;
    items.push_back({s.scorer_name, p.template_id, p.group, p.group_term, s.standardized});
  }
  return items;
}

namespace {

template <typename Less>
std::vector<std::string> Distinct(std::vector<std::string> v, Less less) {
  std::sort(v.begin(), v.end(), less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::string> FirstAppearance(const std::vector<std::string> &v) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto &s : v) {
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

size_t IndexOf(const std::vector<std::string> &v, const std::string &s) {
  return static_cast<size_t>(std::find(v.begin(), v.end(), s) - v.begin());
}

}  // namespace

MeanTable BuildMeanTable(const std::vector<ScoredItem> &items, RowKey row_key,
                         std::string title) {
  if (items.empty()) throw Error(ErrorCode::kEmptyCell, "no records for mean table");
  MeanTable t;
  t.title = std::move(title);
  t.row_key = row_key;
  std::vector<std::string> groups, row_values;
  for (const auto &it : items) {
    groups.push_back(it.group);
    row_values.push_back(row_key == RowKey::kTemplate ? it.template_id : it.scorer);
  }
  if (row_key == RowKey::kTemplate) {
    for (const auto &it : items) {
      if (it.scorer != items.front().scorer) {
        throw Error(ErrorCode::kInconsistentInputs,
                    "template mean table mixes scorers " + items.front().scorer +
                        " and " + it.scorer);
      }
    }
    t.rows = Distinct(row_values, [](const auto &a, const auto &b) {
      return NaturalLess(a, b);
    });
  } else {
    t.rows = FirstAppearance(row_values);
  }
  t.columns = Distinct(groups, [](const auto &a, const auto &b) { return GroupLess(a, b); });

  std::vector<std::vector<double>> sums(t.rows.size(),
                                        std::vector<double>(t.columns.size(), 0.0));
  t.counts.assign(t.rows.size(), std::vector<size_t>(t.columns.size(), 0));
  std::unordered_map<std::string, size_t> row_index, col_index;
  for (size_t r = 0; r < t.rows.size(); ++r) row_index[t.rows[r]] = r;
  for (size_t c = 0; c < t.columns.size(); ++c) col_index[t.columns[c]] = c;
  for (size_t i = 0; i < items.size(); ++i) {
    size_t r = row_index.at(row_values[i]), c = col_index.at(groups[i]);
    sums[r][c] += items[i].score;
    ++t.counts[r][c];
  }
  t.cells = sums;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    for (size_t c = 0; c < t.columns.size(); ++c) {
      if (t.counts[r][c] == 0) {
        throw Error(ErrorCode::kEmptyCell,
                    "no records for " + t.rows[r] + " x " + t.columns[c]);
      }
      t.cells[r][c] = sums[r][c] / static_cast<double>(t.counts[r][c]);
    }
    size_t best = 0;
    for (size_t c = 1; c < t.columns.size(); ++c) {
      if (t.cells[r][c] < t.cells[r][best]) best = c;
    }
    t.min_column.push_back(best);
  }
  return t;
}

HeatmapData BuildHeatmap(const std::vector<ScoredItem> &items) {
  HeatmapData h;
  std::vector<std::string> scorers;
  std::vector<std::pair<std::string, std::string>> terms;  // (group, term)
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto &it : items) {
    if (std::find(std::begin(kHeatmapGroups), std::end(kHeatmapGroups), it.group) ==
        std::end(kHeatmapGroups)) {
      continue;
    }
    scorers.push_back(it.scorer);
    if (seen.insert({it.group, it.group_term}).second) {
      terms.emplace_back(it.group, it.group_term);
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const auto &a, const auto &b) {
    return GroupLess(a.first, b.first);
  });
  h.columns = FirstAppearance(scorers);
  for (const auto &[g, term] : terms) {
    h.row_groups.push_back(g);
    h.rows.push_back(term);
  }
  std::vector<std::vector<double>> sums(h.rows.size(),
                                        std::vector<double>(h.columns.size(), 0.0));
  std::vector<std::vector<size_t>> counts(h.rows.size(),
                                          std::vector<size_t>(h.columns.size(), 0));
  for (const auto &it : items) {
    size_t c = IndexOf(h.columns, it.scorer);
    if (c == h.columns.size()) continue;
    size_t r = 0;
    while (r < h.rows.size() && !(h.rows[r] == it.group_term && h.row_groups[r] == it.group)) {
      ++r;
    }
    if (r == h.rows.size()) continue;
    sums[r][c] += it.score;
    ++counts[r][c];
  }
  h.cells = sums;
  for (size_t r = 0; r < h.rows.size(); ++r) {
    for (size_t c = 0; c < h.columns.size(); ++c) {
      if (counts[r][c] == 0) {
        throw Error(ErrorCode::kEmptyCell, "no records for term " + h.rows[r] +
                                               " under scorer " + h.columns[c]);
      }
      h.cells[r][c] = sums[r][c] / static_cast<double>(counts[r][c]);
    }
  }
  return h;
}

std::string FormatPValue(double p) {
  constexpr double kFloor = 2e-16;
  if (p < kFloor) p = kFloor;
  char buf[32];
  if (p >= 0.001) {
    std::snprintf(buf, sizeof(buf), "%.3f", p);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3g", p);
  }
  return buf;
}

std::string RenderSignificance(double p) {
  return FormatPValue(p) + std::string(StarCode(p));
}

namespace {

std::string Csv(const std::string &field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string FileSafe(const std::string &name) {
  std::string out;
  for (char c : name) out += (IsWordChar(c) || c == '-' || c == '.') ? c : '_';
  return out;
}

std::string RowHeader(RowKey key) { return key == RowKey::kTemplate ? "template" : "model"; }

std::string MeanTableCsv(const MeanTable &t) {
  std::string out = RowHeader(t.row_key);
  for (const auto &c : t.columns) out += "," + Csv(c);
  out += ",min_group\n";
  for (size_t r = 0; r < t.rows.size(); ++r) {
    out += Csv(t.rows[r]);
    for (double v : t.cells[r]) out += "," + FormatExact(v);
    out += "," + Csv(t.columns[t.min_column[r]]) + "\n";
  }
  return out;
}

std::string MeanTableMarkdown(const MeanTable &t) {
  std::string out = "| " + RowHeader(t.row_key) + " |";
  for (const auto &c : t.columns) out += " " + c + " |";
  out += "\n|---|";
  for (size_t c = 0; c < t.columns.size(); ++c) out += "---:|";
  out += "\n";
  for (size_t r = 0; r < t.rows.size(); ++r) {
    out += "| " + t.rows[r] + " |";
    for (size_t c = 0; c < t.columns.size(); ++c) {
      std::string v = FormatFixed(t.cells[r][c], 2);
      out += " " + (c == t.min_column[r] ? "**" + v + "**" : v) + " |";
    }
    out += "\n";
  }
  return out;
}

ordered_json MeanTableJson(const MeanTable &t) {
  ordered_json j;
  j["title"] = t.title;
  j["row_key"] = RowHeader(t.row_key);
  j["rows"] = t.rows;
  j["columns"] = t.columns;
  j["cells"] = t.cells;
  j["counts"] = t.counts;
  j["min_column"] = t.min_column;
  return j;
}

void CheckConsistent(const ReportInputs &in) {
  std::set<std::string> scorers(in.model_means.rows.begin(), in.model_means.rows.end());
  std::set<std::string> bias;
  for (const auto &b : in.bias_reports) bias.insert(b.scorer);
  if (bias != scorers) {
    throw Error(ErrorCode::kInconsistentInputs,
                "bias reports and mean tables cover different scorers");
  }
  for (const auto &t : in.template_means) {
    if (!scorers.count(t.title)) {
      throw Error(ErrorCode::kInconsistentInputs,
                  "template table for unknown scorer " + t.title);
    }
  }
  if (!in.heatmap.empty()) {
    std::set<std::string> cols(in.heatmap.columns.begin(), in.heatmap.columns.end());
    if (cols != scorers) {
      throw Error(ErrorCode::kInconsistentInputs, "heatmap covers different scorers");
    }
  }
}

std::vector<std::string> SignificanceGroups(const std::vector<BiasReport> &reports) {
  std::vector<std::string> groups;
  for (const auto &r : reports) {
    for (const auto &g : r.groups) groups.push_back(g.group);
  }
  return Distinct(groups, [](const auto &a, const auto &b) { return GroupLess(a, b); });
}

std::map<std::string, std::string> RenderDelimited(const ReportInputs &in) {
  std::map<std::string, std::string> files;
  files["means_by_model.csv"] = MeanTableCsv(in.model_means);
  for (const auto &t : in.template_means) {
    files["means_by_template_" + FileSafe(t.title) + ".csv"] = MeanTableCsv(t);
  }
  std::string stats = "scorer,group,n,mean,sample_std,single_observation\n";
  std::string sig =
      "scorer,group,coefficient,std_error,t_stat,p_value,star,biased_negative,display\n";
  for (const auto &r : in.bias_reports) {
    for (const auto &s : r.stats) {
      stats += Csv(r.scorer) + "," + Csv(s.group) + "," + std::to_string(s.n) + "," +
               FormatExact(s.mean) + "," + FormatExact(s.sample_std) + "," +
               (s.single_observation ? "true" : "false") + "\n";
    }
    for (const auto &g : r.groups) {
      sig += Csv(r.scorer) + "," + Csv(g.group) + "," + FormatExact(g.coefficient) + "," +
             FormatExact(g.std_error) + "," + FormatExact(g.t_stat) + "," +
             FormatExact(g.p_value) + "," + g.star + "," +
             (g.biased_negative ? "true" : "false") + "," + RenderSignificance(g.p_value) +
             "\n";
    }
  }
  files["group_stats.csv"] = stats;
  files["significance.csv"] = sig;
  if (!in.heatmap.empty()) {
    const auto &h = in.heatmap;
    std::string out = "term,group";
    for (const auto &c : h.columns) out += "," + Csv(c);
    out += "\n";
    for (size_t r = 0; r < h.rows.size(); ++r) {
      out += Csv(h.rows[r]) + "," + Csv(h.row_groups[r]);
      for (double v : h.cells[r]) out += "," + FormatExact(v);
      out += "\n";
    }
    files["heatmap.csv"] = out;
  }
  return files;
}

std::string RenderMarkdown(const ReportInputs &in) {
  std::ostringstream md;
  md << "# Bias audit report\n\n";
  if (in.generated_at) md << "Generated at " << *in.generated_at << ".\n\n";
  md << "## Mean standardized score by model\n\n"
     << "Lowest group per row in bold.\n\n"
     << MeanTableMarkdown(in.model_means) << "\n";
  for (const auto &t : in.template_means) {
    md << "## Mean standardized score by template: " << t.title << "\n\n"
       << MeanTableMarkdown(t) << "\n";
  }

  md << "## Standard deviation by group\n\n| group |";
  for (const auto &r : in.bias_reports) md << " " << r.scorer << " |";
  md << "\n|---|";
  for (size_t i = 0; i < in.bias_reports.size(); ++i) md << "---:|";
  md << "\n";
  std::vector<std::string> stat_groups;
  for (const auto &r : in.bias_reports) {
    for (const auto &s : r.stats) stat_groups.push_back(s.group);
  }
  stat_groups = Distinct(stat_groups, [](const auto &a, const auto &b) {
    return GroupLess(a, b);
  });
  for (const auto &g : stat_groups) {
    md << "| " << g << " |";
    for (const auto &r : in.bias_reports) {
      auto it = std::find_if(r.stats.begin(), r.stats.end(),
                             [&](const GroupStats &s) { return s.group == g; });
      if (it == r.stats.end()) {
        md << " - |";
      } else {
        md << " " << FormatFixed(it->sample_std, 3) << (it->single_observation ? " (n=1)" : "")
           << " |";
      }
    }
    md << "\n";
  }

  md << "\n## Regression p-values against the reference group\n\n"
     << "Significance codes: 0.001 '***' 0.01 '**' 0.05 '*'. "
     << "Bold entries are negative effects below alpha.\n\n| group |";
  for (const auto &r : in.bias_reports) md << " " << r.scorer << " |";
  md << "\n|---|";
  for (size_t i = 0; i < in.bias_reports.size(); ++i) md << "---|";
  md << "\n";
  for (const auto &g : SignificanceGroups(in.bias_reports)) {
    md << "| " << g << " |";
    for (const auto &r : in.bias_reports) {
      auto it = std::find_if(r.groups.begin(), r.groups.end(),
                             [&](const GroupEffect &e) { return e.group == g; });
      if (it == r.groups.end()) {
        md << " - |";
        continue;
      }
      std::string cell;
      for (char c : RenderSignificance(it->p_value)) {
        if (c == '*') cell += '\\';
        cell += c;
      }
      md << " " << (it->biased_negative ? "**" + cell + "**" : cell) << " |";
    }
    md << "\n";
  }
  if (!in.bias_reports.empty()) {
    const auto &r = in.bias_reports.front();
    md << "\nFactors: " << r.factors << "; reference group " << r.reference_group
       << "; alpha " << FormatExact(r.alpha) << ".\n";
  }

  md << "\n## Heatmap of disability terms\n\n";
  if (in.heatmap.empty()) {
    md << "Heatmap omitted: no records for DSBL or DSBL_S terms.\n";
  } else {
    const auto &h = in.heatmap;
    md << "Display range " << FormatFixed(h.display_light, 1) << " (light) to "
       << FormatFixed(h.display_dark, 1) << " (dark).\n\n| term | group |";
    for (const auto &c : h.columns) md << " " << c << " |";
    md << "\n|---|---|";
    for (size_t c = 0; c < h.columns.size(); ++c) md << "---:|";
    md << "\n";
    for (size_t r = 0; r < h.rows.size(); ++r) {
      md << "| " << h.rows[r] << " | " << h.row_groups[r] << " |";
      for (double v : h.cells[r]) md << " " << FormatFixed(v, 2) << " |";
      md << "\n";
    }
  }
  return md.str();
}

std::string RenderStructured(const ReportInputs &in) {
  ordered_json j;
  if (in.generated_at) j["generated_at"] = *in.generated_at;
  ordered_json tables = ordered_json::array();
  tables.push_back(MeanTableJson(in.model_means));
  for (const auto &t : in.template_means) tables.push_back(MeanTableJson(t));
  j["mean_tables"] = std::move(tables);
  ordered_json reports = ordered_json::array();
  for (const auto &r : in.bias_reports) {
    ordered_json rj = BiasReportToJson(r);
    ordered_json display = ordered_json::array();
    for (const auto &g : r.groups) {
      display.push_back({{"group", g.group}, {"display", RenderSignificance(g.p_value)}});
    }
    rj["display"] = std::move(display);
    reports.push_back(std::move(rj));
  }
  j["bias_reports"] = std::move(reports);
  if (in.heatmap.empty()) {
    j["heatmap"] = nullptr;
  } else {
    const auto &h = in.heatmap;
    j["heatmap"] = {{"rows", h.rows},
                    {"row_groups", h.row_groups},
                    {"columns", h.columns},
                    {"cells", h.cells},
                    {"display_range", {h.display_light, h.display_dark}}};
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::map<std::string, std::string> RenderReport(const ReportInputs &inputs,
                                                ReportFormat format) {
  CheckConsistent(inputs);
  switch (format) {
    case ReportFormat::kDelimited:
      return RenderDelimited(inputs);
    case ReportFormat::kMarkdown:
      return {{"report.md", RenderMarkdown(inputs)}};
    case ReportFormat::kStructured:
      return {{"report.json", RenderStructured(inputs)}};
  }
  return {};
}

}  // namespace bits
