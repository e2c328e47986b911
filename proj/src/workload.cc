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

#include "contplace/workload.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "text_util.h"

namespace contplace {

namespace {

void CheckInterval(const Interval &r, const std::string &name, bool positive_lo) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo < 0.0 || r.lo > r.hi) {
    throw ScenarioError(name + " range must satisfy 0 <= lo <= hi");
  }
  if (positive_lo && !(r.lo > 0.0)) {
    throw ScenarioError(name + " range must be strictly positive");
  }
}

double Uniform(std::mt19937_64 &rng, const Interval &r) {
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

double TruncatedNormal(std::mt19937_64 &rng, const NormalParams &p) {
  double floor = 1e-3 * std::abs(p.mean);
  if (floor <= 0.0) floor = 1e-3;
  double x = p.stddev > 0.0 ? std::normal_distribution<double>(p.mean, p.stddev)(rng)
                            : p.mean;
  return std::max(x, floor);
}

}  // namespace

void GeneratorConfig::Validate() const {
  if (machine_count < 1) throw ScenarioError("machine_count must be at least 1");
  if (application_count < 1) throw ScenarioError("application_count must be at least 1");
  if (instance_range.lo < 1 || instance_range.lo > instance_range.hi) {
    throw ScenarioError("instance range must satisfy 1 <= lo <= hi");
  }
  CheckInterval(capacity_ranges.cpu, "capacity cpu", true);
  CheckInterval(capacity_ranges.io, "capacity io", false);
  CheckInterval(capacity_ranges.nw, "capacity nw", false);
  CheckInterval(capacity_ranges.mem, "capacity mem", false);
  CheckInterval(demand_ranges.cpu, "demand cpu", true);
  CheckInterval(demand_ranges.io, "demand io", false);
  CheckInterval(demand_ranges.nw, "demand nw", false);
  CheckInterval(demand_ranges.mem, "demand mem", false);
  CheckInterval(power_idle_range, "idle power", false);
  CheckInterval(power_max_range, "max power", false);
  if (!(power_idle_range.hi < power_max_range.lo)) {
    throw ScenarioError("idle power range must lie strictly below max power range");
  }
  if (demand_ranges.cpu.lo > capacity_ranges.cpu.hi ||
      demand_ranges.io.lo > capacity_ranges.io.hi ||
      demand_ranges.nw.lo > capacity_ranges.nw.hi ||
      demand_ranges.mem.lo > capacity_ranges.mem.hi) {
    throw ScenarioError("smallest possible demand exceeds largest possible capacity");
  }
  if (!(user_affinity_density >= 0.0 && user_affinity_density <= 1.0)) {
    throw ScenarioError("user affinity density must lie in [0, 1]");
  }
  if (!(anti_affinity_fraction >= 0.0 && anti_affinity_fraction < 1.0)) {
    throw ScenarioError("anti-affinity fraction must lie in [0, 1)");
  }
  weights.Validate();
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ScenarioError("alpha must be finite and nonnegative");
  }
  if (!(pi_threshold > 0.0 && pi_threshold <= 1.0)) {
    throw ScenarioError("pi threshold outside (0, 1]");
  }
}

int AntiAffineMachinesPerApp(double fraction, int machines) {
  long k = std::lround(fraction * machines);
  return static_cast<int>(std::clamp<long>(k, 0, std::max(0, machines - 1)));
}

void GenerateAffinityMatrices(Scenario &s, double density, double fraction,
                              std::mt19937_64 &rng) {
  const int n = static_cast<int>(s.num_applications());
  const int m = static_cast<int>(s.num_machines());
  s.user_affinity = BinaryMatrix(n, m, 0);
  s.anti_affinity = BinaryMatrix(n, m, 0);
  const int k = AntiAffineMachinesPerApp(fraction, m);
  std::bernoulli_distribution affine(density);
  std::vector<int> pool(m);
  for (int i = 0; i < n; ++i) {
    std::iota(pool.begin(), pool.end(), 0);
    for (int t = 0; t < k; ++t) {
      int pick = std::uniform_int_distribution<int>(t, m - 1)(rng);
      std::swap(pool[t], pool[pick]);
      s.anti_affinity(i, pool[t]) = 1;
    }
    for (int j = 0; j < m; ++j) {
      bool u = affine(rng);
      s.user_affinity(i, j) = (u && !s.anti_affinity(i, j)) ? 1 : 0;
    }
  }
}

Scenario GenerateSynthetic(const GeneratorConfig &c) {
  c.Validate();
  std::mt19937_64 rng(c.seed);
  Scenario s;
  s.weights = c.weights;
  s.alpha = c.alpha;
  s.pi_threshold = c.pi_threshold;

  s.machines.reserve(c.machine_count);
  for (int j = 0; j < c.machine_count; ++j) {
    Machine mc;
    mc.id = j;
    mc.capacity.cpu = Uniform(rng, c.capacity_ranges.cpu);
    mc.capacity.io = Uniform(rng, c.capacity_ranges.io);
    mc.capacity.nw = Uniform(rng, c.capacity_ranges.nw);
    mc.capacity.mem = Uniform(rng, c.capacity_ranges.mem);
    mc.p_idle = Uniform(rng, c.power_idle_range);
    mc.p_max = Uniform(rng, c.power_max_range);
    s.machines.push_back(mc);
  }

  s.applications.reserve(c.application_count);
  std::uniform_int_distribution<int> instances(c.instance_range.lo, c.instance_range.hi);
  for (int i = 0; i < c.application_count; ++i) {
    Application app;
    app.id = i;
    app.demand.cpu = Uniform(rng, c.demand_ranges.cpu);
    app.demand.io = Uniform(rng, c.demand_ranges.io);
    app.demand.nw = Uniform(rng, c.demand_ranges.nw);
    app.demand.mem = Uniform(rng, c.demand_ranges.mem);
    app.instances = instances(rng);
    s.applications.push_back(app);
  }

  GenerateAffinityMatrices(s, c.user_affinity_density, c.anti_affinity_fraction, rng);
  ValidateScenario(s);
  return s;
}

// ---------------------------------------------------------------------------
// CSV ingestion

ParseError::ParseError(const std::filesystem::path &file, int line,
                       const std::string &what)
    : std::runtime_error(file.string() + (line > 0 ? ":" + std::to_string(line) : "") +
                         ": " + what),
      file_(file),
      line_(line) {}

namespace {

// One CSV file with a header row. Cells are addressed by column name.
class CsvTable {
 public:
  CsvTable(const std::filesystem::path &path, const std::vector<std::string> &required,
           const std::vector<std::string> &optional)
      : path_(path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      if (text::Trim(line).empty()) continue;
      auto cells = text::SplitCsv(line);
      if (!have_header) {
        ReadHeader(cells, line_no, required, optional);
        have_header = true;
        continue;
      }
      if (cells.size() != header_.size()) {
        throw ParseError(path, line_no,
                         "expected " + std::to_string(header_.size()) + " fields, got " +
                             std::to_string(cells.size()));
      }
      rows_.push_back({line_no, std::vector<std::string>(cells.begin(), cells.end())});
    }
    if (!have_header) throw ParseError(path, 0, "file is empty");
  }

  std::size_t size() const { return rows_.size(); }
  int line(std::size_t r) const { return rows_[r].line; }
  bool has(const std::string &col) const { return index_.count(col) > 0; }

  /// Empty optional when the column is absent or the cell is blank.
  std::optional<std::string_view> cell(std::size_t r, const std::string &col) const {
    auto it = index_.find(col);
    if (it == index_.end()) return std::nullopt;
    const std::string &v = rows_[r].cells[it->second];
    if (v.empty()) return std::nullopt;
    return std::string_view(v);
  }

  double Number(std::size_t r, const std::string &col) const {
    auto v = cell(r, col);
    if (!v) throw ParseError(path_, line(r), "missing value for " + col);
    auto d = text::ParseDouble(*v);
    if (!d) throw ParseError(path_, line(r), "bad number '" + std::string(*v) + "' in " + col);
    return *d;
  }

  long long Integer(std::size_t r, const std::string &col) const {
    auto v = cell(r, col);
    if (!v) throw ParseError(path_, line(r), "missing value for " + col);
    auto d = text::ParseInt(*v);
    if (!d) throw ParseError(path_, line(r), "bad integer '" + std::string(*v) + "' in " + col);
    return *d;
  }

  const std::filesystem::path &path() const { return path_; }

 private:
  struct Row {
    int line;
    std::vector<std::string> cells;
  };

  void ReadHeader(const std::vector<std::string_view> &cells, int line_no,
                  const std::vector<std::string> &required,
                  const std::vector<std::string> &optional) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::string name(cells[c]);
      bool known = std::find(required.begin(), required.end(), name) != required.end() ||
                   std::find(optional.begin(), optional.end(), name) != optional.end();
      if (!known) throw ParseError(path_, line_no, "unknown column '" + name + "'");
      if (!index_.emplace(name, c).second) {
        throw ParseError(path_, line_no, "duplicate column '" + name + "'");
      }
      header_.push_back(name);
    }
    for (const auto &r : required) {
      if (!index_.count(r)) throw ParseError(path_, line_no, "missing column '" + r + "'");
    }
  }

  std::filesystem::path path_;
  std::vector<std::string> header_;
  std::map<std::string, std::size_t> index_;
  std::vector<Row> rows_;
};

// Maps external ids to dense indices in file order.
std::unordered_map<long long, int> DenseIds(const CsvTable &t, const std::string &col) {
  std::unordered_map<long long, int> ids;
  for (std::size_t r = 0; r < t.size(); ++r) {
    long long id = t.Integer(r, col);
    if (id < 0) throw ParseError(t.path(), t.line(r), col + " must be nonnegative");
    if (!ids.emplace(id, static_cast<int>(r)).second) {
      throw ParseError(t.path(), t.line(r), "duplicate " + col + " " + std::to_string(id));
    }
  }
  return ids;
}

void RequirePositive(const CsvTable &t, std::size_t r, const std::string &col, double v) {
  if (!(v > 0.0)) {
    throw ScenarioError(t.path().string() + ":" + std::to_string(t.line(r)) + ": " + col +
                        " must be positive");
  }
}

void RequireNonNegative(const CsvTable &t, std::size_t r, const std::string &col,
                        double v) {
  if (v < 0.0) {
    throw ScenarioError(t.path().string() + ":" + std::to_string(t.line(r)) + ": " + col +
                        " must be nonnegative");
  }
}

}  // namespace

Scenario LoadTrace(const TracePaths &paths, const BackfillConfig &bf, std::uint64_t seed) {
  CsvTable mt(paths.machines, {"machine_id", "cpu_cap"},
              {"io_cap", "nw_cap", "mem_cap", "p_idle", "p_max"});
  CsvTable at(paths.applications, {"app_id", "cpu_req"},
              {"io_req", "nw_req", "mem_req", "instances"});
  if (mt.size() == 0) throw ParseError(paths.machines, 0, "no machine rows");
  if (at.size() == 0) throw ParseError(paths.applications, 0, "no application rows");

  if (bf.instance_range.lo < 1 || bf.instance_range.lo > bf.instance_range.hi) {
    throw ScenarioError("backfill instance range must satisfy 1 <= lo <= hi");
  }

  std::mt19937_64 rng(seed);
  auto value = [&](const CsvTable &t, std::size_t r, const std::string &col,
                   const NormalParams &fill) {
    if (t.cell(r, col)) return t.Number(r, col);
    return TruncatedNormal(rng, fill);
  };

  Scenario s;
  s.weights = bf.weights;
  s.alpha = bf.alpha;
  s.pi_threshold = bf.pi_threshold;

  auto machine_ids = DenseIds(mt, "machine_id");
  for (std::size_t r = 0; r < mt.size(); ++r) {
    Machine mc;
    mc.id = static_cast<int>(r);
    mc.capacity.cpu = mt.Number(r, "cpu_cap");
    RequirePositive(mt, r, "cpu_cap", mc.capacity.cpu);
    mc.capacity.io = value(mt, r, "io_cap", bf.io_cap);
    mc.capacity.nw = value(mt, r, "nw_cap", bf.nw_cap);
    mc.capacity.mem = value(mt, r, "mem_cap", bf.mem_cap);
    RequireNonNegative(mt, r, "io_cap", mc.capacity.io);
    RequireNonNegative(mt, r, "nw_cap", mc.capacity.nw);
    RequireNonNegative(mt, r, "mem_cap", mc.capacity.mem);
    bool idle_given = mt.cell(r, "p_idle").has_value();
    bool max_given = mt.cell(r, "p_max").has_value();
    mc.p_idle = value(mt, r, "p_idle", bf.p_idle);
    mc.p_max = value(mt, r, "p_max", bf.p_max);
    RequireNonNegative(mt, r, "p_idle", mc.p_idle);
    if (mc.p_max < mc.p_idle) {
      if (idle_given && max_given) {
        throw ScenarioError(mt.path().string() + ":" + std::to_string(mt.line(r)) +
                            ": p_max below p_idle");
      }
      mc.p_max = mc.p_idle;
    }
    s.machines.push_back(mc);
  }

  auto app_ids = DenseIds(at, "app_id");
  for (std::size_t r = 0; r < at.size(); ++r) {
    Application app;
    app.id = static_cast<int>(r);
    app.demand.cpu = at.Number(r, "cpu_req");
    RequirePositive(at, r, "cpu_req", app.demand.cpu);
    app.demand.io = value(at, r, "io_req", bf.io_req);
    app.demand.nw = value(at, r, "nw_req", bf.nw_req);
    app.demand.mem = value(at, r, "mem_req", bf.mem_req);
    RequireNonNegative(at, r, "io_req", app.demand.io);
    RequireNonNegative(at, r, "nw_req", app.demand.nw);
    RequireNonNegative(at, r, "mem_req", app.demand.mem);
    if (at.cell(r, "instances")) {
      long long k = at.Integer(r, "instances");
      if (k < 1) {
        throw ScenarioError(at.path().string() + ":" + std::to_string(at.line(r)) +
                            ": instances must be positive");
      }
      app.instances = static_cast<int>(k);
    } else {
      double x = bf.instances.stddev > 0.0
                     ? std::normal_distribution<double>(bf.instances.mean,
                                                        bf.instances.stddev)(rng)
                     : bf.instances.mean;
      app.instances = static_cast<int>(std::clamp<long>(
          std::lround(x), bf.instance_range.lo, bf.instance_range.hi));
    }
    s.applications.push_back(app);
  }

  if (paths.affinity) {
    CsvTable ft(*paths.affinity, {"app_id", "machine_id", "user_affinity", "anti_affinity"},
                {});
    s.user_affinity = BinaryMatrix(s.num_applications(), s.num_machines(), 0);
    s.anti_affinity = BinaryMatrix(s.num_applications(), s.num_machines(), 0);
    std::set<std::pair<int, int>> seen;
    for (std::size_t r = 0; r < ft.size(); ++r) {
      auto a = app_ids.find(ft.Integer(r, "app_id"));
      auto m = machine_ids.find(ft.Integer(r, "machine_id"));
      if (a == app_ids.end()) throw ParseError(ft.path(), ft.line(r), "unknown app_id");
      if (m == machine_ids.end()) {
        throw ParseError(ft.path(), ft.line(r), "unknown machine_id");
      }
      if (!seen.emplace(a->second, m->second).second) {
        throw ParseError(ft.path(), ft.line(r), "duplicate (app_id, machine_id) pair");
      }
      long long u = ft.Integer(r, "user_affinity");
      long long anti = ft.Integer(r, "anti_affinity");
      if ((u != 0 && u != 1) || (anti != 0 && anti != 1)) {
        throw ParseError(ft.path(), ft.line(r), "affinity fields must be 0 or 1");
      }
      s.user_affinity(a->second, m->second) = static_cast<std::uint8_t>(u);
      s.anti_affinity(a->second, m->second) = static_cast<std::uint8_t>(anti);
    }
  } else {
    if (!(bf.anti_affinity_fraction >= 0.0 && bf.anti_affinity_fraction < 1.0) ||
        !(bf.user_affinity_density >= 0.0 && bf.user_affinity_density <= 1.0)) {
      throw ScenarioError("backfill affinity parameters out of range");
    }
    GenerateAffinityMatrices(s, bf.user_affinity_density, bf.anti_affinity_fraction, rng);
  }

  ValidateScenario(s);
  return s;
}

TracePaths WriteScenarioCsv(const Scenario &s, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  TracePaths paths{dir / "machines.csv", dir / "applications.csv", dir / "affinity.csv"};
  auto open = [](const std::filesystem::path &p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  };
  using text::FormatDouble;

  {
    std::ofstream out = open(paths.machines);
    out << "machine_id,cpu_cap,io_cap,nw_cap,mem_cap,p_idle,p_max\n";
    for (const Machine &mc : s.machines) {
      out << mc.id << ',' << FormatDouble(mc.capacity.cpu) << ','
          << FormatDouble(mc.capacity.io) << ',' << FormatDouble(mc.capacity.nw) << ','
          << FormatDouble(mc.capacity.mem) << ',' << FormatDouble(mc.p_idle) << ','
          << FormatDouble(mc.p_max) << '\n';
    }
  }
  {
    std::ofstream out = open(paths.applications);
    out << "app_id,cpu_req,io_req,nw_req,mem_req,instances\n";
    for (const Application &app : s.applications) {
      out << app.id << ',' << FormatDouble(app.demand.cpu) << ','
          << FormatDouble(app.demand.io) << ',' << FormatDouble(app.demand.nw) << ','
          << FormatDouble(app.demand.mem) << ',' << app.instances << '\n';
    }
  }
  {
    std::ofstream out = open(*paths.affinity);
    out << "app_id,machine_id,user_affinity,anti_affinity\n";
    for (std::size_t i = 0; i < s.num_applications(); ++i) {
      for (std::size_t j = 0; j < s.num_machines(); ++j) {
        int u = s.user_affinity(i, j), a = s.anti_affinity(i, j);
        if (u || a) out << i << ',' << j << ',' << u << ',' << a << '\n';
      }
    }
  }
  return paths;
}

}  // namespace contplace
