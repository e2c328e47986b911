// Copyright 2026 The Contplace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "contplace/results.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "text_util.h"

namespace contplace {

namespace {

using nlohmann::json;

// NaN and infinities have no JSON literal; they travel as null.
json Num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double NumFrom(const json &j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Algorithm AlgorithmFrom(const json &j) {
  auto a = ParseAlgorithm(j.get<std::string>());
  if (!a) throw std::invalid_argument("unknown algorithm " + j.dump());
  return *a;
}

json RowToJson(const ResultRow &r) {
  return json{{"sweep_point", Num(r.sweep_point)},
              {"algorithm", AlgorithmName(r.algorithm)},
              {"seed", r.seed},
              {"feasible", r.feasible},
              {"total_cost", Num(r.total_cost)},
              {"reduced_cost", Num(r.reduced_cost)},
              {"power_cost", Num(r.power_cost)},
              {"payoff", Num(r.payoff)},
              {"rho", Num(r.rho)},
              {"avg_util", Num(r.avg_util)},
              {"psi", Num(r.psi)},
              {"runtime_ms", Num(r.runtime_ms)},
              {"psi_status", r.psi_status},
              {"pairs_examined", r.pairs_examined},
              {"error", r.error}};
}

ResultRow RowFromJson(const json &j) {
  ResultRow r;
  r.sweep_point = NumFrom(j.at("sweep_point"));
  r.algorithm = AlgorithmFrom(j.at("algorithm"));
  r.seed = j.at("seed").get<std::uint64_t>();
  r.feasible = j.at("feasible").get<bool>();
  r.total_cost = NumFrom(j.at("total_cost"));
  r.reduced_cost = NumFrom(j.at("reduced_cost"));
  r.power_cost = NumFrom(j.at("power_cost"));
  r.payoff = NumFrom(j.at("payoff"));
  r.rho = NumFrom(j.at("rho"));
  r.avg_util = NumFrom(j.at("avg_util"));
  r.psi = NumFrom(j.at("psi"));
  r.runtime_ms = NumFrom(j.at("runtime_ms"));
  r.psi_status = j.value("psi_status", "ok");
  r.pairs_examined = j.value("pairs_examined", 0L);
  r.error = j.value("error", "");
  return r;
}

json AggregateToJson(const AggregateRow &a) {
  return json{{"sweep_point", Num(a.sweep_point)},
              {"algorithm", AlgorithmName(a.algorithm)},
              {"runs", a.runs},
              {"feasible_runs", a.feasible_runs},
              {"mean_total_cost", Num(a.mean_total_cost)},
              {"mean_reduced_cost", Num(a.mean_reduced_cost)},
              {"mean_power_cost", Num(a.mean_power_cost)},
              {"mean_payoff", Num(a.mean_payoff)},
              {"mean_rho", Num(a.mean_rho)},
              {"mean_avg_util", Num(a.mean_avg_util)},
              {"mean_psi", Num(a.mean_psi)},
              {"mean_runtime_ms", Num(a.mean_runtime_ms)}};
}

AggregateRow AggregateFromJson(const json &j) {
  AggregateRow a;
  a.sweep_point = NumFrom(j.at("sweep_point"));
  a.algorithm = AlgorithmFrom(j.at("algorithm"));
  a.runs = j.at("runs").get<int>();
  a.feasible_runs = j.at("feasible_runs").get<int>();
  a.mean_total_cost = NumFrom(j.at("mean_total_cost"));
  a.mean_reduced_cost = NumFrom(j.at("mean_reduced_cost"));
  a.mean_power_cost = NumFrom(j.at("mean_power_cost"));
  a.mean_payoff = NumFrom(j.at("mean_payoff"));
  a.mean_rho = NumFrom(j.at("mean_rho"));
  a.mean_avg_util = NumFrom(j.at("mean_avg_util"));
  a.mean_psi = NumFrom(j.at("mean_psi"));
  a.mean_runtime_ms = NumFrom(j.at("mean_runtime_ms"));
  return a;
}

}  // namespace

void SortRows(std::vector<ResultRow> &rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
    return std::make_tuple(a.sweep_point, static_cast<int>(a.algorithm), a.seed) <
           std::make_tuple(b.sweep_point, static_cast<int>(b.algorithm), b.seed);
  });
}

std::vector<AggregateRow> Aggregate(const std::vector<ResultRow> &rows) {
  std::map<std::pair<double, int>, AggregateRow> cells;
  for (const ResultRow &r : rows) {
    AggregateRow &a = cells[{r.sweep_point, static_cast<int>(r.algorithm)}];
    a.sweep_point = r.sweep_point;
    a.algorithm = r.algorithm;
    ++a.runs;
    if (!r.feasible) continue;
    ++a.feasible_runs;
    a.mean_total_cost += r.total_cost;
    a.mean_reduced_cost += r.reduced_cost;
    a.mean_power_cost += r.power_cost;
    a.mean_payoff += r.payoff;
    a.mean_rho += r.rho;
    a.mean_avg_util += r.avg_util;
    a.mean_psi += r.psi;
    a.mean_runtime_ms += r.runtime_ms;
  }
  std::vector<AggregateRow> out;
  for (auto &[key, a] : cells) {
    double k = a.feasible_runs > 0 ? static_cast<double>(a.feasible_runs)
                                   : std::numeric_limits<double>::quiet_NaN();
    for (double *v : {&a.mean_total_cost, &a.mean_reduced_cost, &a.mean_power_cost,
                      &a.mean_payoff, &a.mean_rho, &a.mean_avg_util, &a.mean_psi,
                      &a.mean_runtime_ms}) {
      *v /= k;
    }
    out.push_back(a);
  }
  return out;
}

void WriteCsv(const ResultsTable &table, std::ostream &out) {
  using text::FormatDouble;
  out << kResultsCsvHeader << '\n';
  for (const ResultRow &r : table.rows) {
    out << FormatDouble(r.sweep_point) << ',' << AlgorithmName(r.algorithm) << ','
        << r.seed << ',' << (r.feasible ? "true" : "false") << ','
        << FormatDouble(r.total_cost) << ',' << FormatDouble(r.reduced_cost) << ','
        << FormatDouble(r.power_cost) << ',' << FormatDouble(r.payoff) << ','
        << FormatDouble(r.rho) << ',' << FormatDouble(r.avg_util) << ','
        << FormatDouble(r.psi) << ',' << FormatDouble(r.runtime_ms) << '\n';
  }
}

void WriteJson(const ResultsTable &table, std::ostream &out) {
  json doc;
  doc["config"] = table.config;
  doc["rows"] = json::array();
  for (const ResultRow &r : table.rows) doc["rows"].push_back(RowToJson(r));
  doc["aggregates"] = json::array();
  for (const AggregateRow &a : table.aggregates) {
    doc["aggregates"].push_back(AggregateToJson(a));
  }
  out << doc.dump(2) << '\n';
}

void EmitResults(const ResultsTable &table, ResultFormat format,
                 const std::filesystem::path &path) {
  if (table.rows.empty()) throw std::invalid_argument("no result rows to emit");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (format == ResultFormat::kCsv) {
    WriteCsv(table, out);
  } else {
    WriteJson(table, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ResultsTable ParseResultsJson(std::string_view text) {
  json doc = json::parse(text);
  ResultsTable t;
  t.config = doc.at("config");
  for (const json &r : doc.at("rows")) t.rows.push_back(RowFromJson(r));
  for (const json &a : doc.at("aggregates")) t.aggregates.push_back(AggregateFromJson(a));
  return t;
}

}  // namespace contplace
