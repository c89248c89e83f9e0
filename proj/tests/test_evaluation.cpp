// Copyright 2026 The sitsmon authors
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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "core/common.hpp"
#include "core/evaluation.hpp"
#include "core/rng.hpp"

using namespace sitsmon;
namespace fs = std::filesystem;

TEST_CASE("precision recall f1 on a hand-checked confusion") {
  // tp=2 fp=1 fn=1 tn=1
  const std::vector<bool> flags = {true, true, true, false, false};
  const std::vector<bool> labels = {true, true, false, true, false};
  const Prf1 m = prf1(flags, labels);
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(m.degenerate_note.empty());
}

TEST_CASE("degenerate cases report zero with a note") {
  const Prf1 none = prf1({false, false}, {true, false});
  CHECK(none.precision == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(!none.degenerate_note.empty());

  const Prf1 no_pos = prf1({true, false}, {false, false});
  CHECK(no_pos.recall == 0.0);
  CHECK(!no_pos.degenerate_note.empty());
}

TEST_CASE("auprc on a hand-computed ranking") {
  // residuals rank: 0.9(+), 0.8(-), 0.7(+)  => AP = 1/2*1 + 1/2*(2/3)
  const std::vector<double> residuals = {0.9, 0.8, 0.7};
  const std::vector<bool> labels = {true, false, true};
  CHECK(auprc(residuals, labels) == doctest::Approx(0.5 + 0.5 * (2.0 / 3.0)));
}

TEST_CASE("auprc groups tied residuals") {
  // both positives tied with one negative at the top
  const std::vector<double> residuals = {0.5, 0.5, 0.5, 0.1};
  const std::vector<bool> labels = {true, true, false, false};
  // single tie group: cumulative precision 2/3 over the whole positive mass
  CHECK(auprc(residuals, labels) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("auprc of a perfect ranking is 1") {
  const std::vector<double> residuals = {0.9, 0.8, 0.2, 0.1};
  const std::vector<bool> labels = {true, true, false, false};
  CHECK(auprc(residuals, labels) == doctest::Approx(1.0));
}

TEST_CASE("auprc requires positives") {
  CHECK_THROWS_AS(auprc({0.5, 0.2}, {false, false}), InvalidArgument);
}

TEST_CASE("random baseline reproduces the analytic rows") {
  // F1 = P / (P + 0.5)
  const double cases[4][2] = {
      {0.748, 0.599}, {0.982, 0.662}, {0.918, 0.647}, {0.229, 0.314}};
  for (const auto& [p, f1] : cases) {
    const MetricsReport r = random_baseline(p);
    CHECK(std::abs(r.f1 - f1) < 1e-3);
    CHECK(r.precision == doctest::Approx(p));
    CHECK(r.recall == doctest::Approx(0.5));
    CHECK(r.auprc == doctest::Approx(p));
  }
  CHECK_THROWS_AS(random_baseline(0.0), InvalidArgument);
  CHECK_THROWS_AS(random_baseline(1.2), InvalidArgument);
}

TEST_CASE("label-independent residuals give auprc near the positive rate") {
  const int n = 500;
  const double p_rate = 0.3;
  double sum = 0.0;
  const int seeds = 20;
  for (int seed = 1; seed <= seeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    std::vector<double> residuals;
    std::vector<bool> labels;
    for (int i = 0; i < n; ++i) {
      residuals.push_back(rng.uniform());
      labels.push_back(rng.uniform() < p_rate);
    }
    sum += auprc(residuals, labels);
  }
  CHECK(std::abs(sum / seeds - p_rate) < 0.05);
}

TEST_CASE("compute_metrics fills the confusion and hazard fraction") {
  std::vector<LabeledScore> rows = {
      {{2020, 1, 1}, 0.2, true, true},
      {{2020, 1, 2}, 0.1, true, false},
      {{2020, 1, 3}, -0.1, false, true},
      {{2020, 1, 4}, -0.2, false, false},
  };
  const MetricsReport m = compute_metrics(rows);
  CHECK(m.tp == 1);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.tn == 1);
  CHECK(m.n_images == 4);
  CHECK(m.hazard_fraction == doctest::Approx(0.5));
  CHECK(m.auprc > 0.0);
}

TEST_CASE("emit_report writes json, table and curve") {
  const fs::path dir = fs::temp_directory_path() / "sitsmon_test_report";
  fs::remove_all(dir);
  std::vector<LabeledScore> rows = {
      {{2020, 1, 1}, 0.3, true, true},
      {{2020, 1, 2}, 0.2, true, true},
      {{2020, 1, 3}, -0.1, false, false},
      {{2020, 1, 4}, -0.3, false, false},
  };
  emit_report(dir.string(), rows, random_baseline(0.5), 123456);

  std::ifstream jf(dir / "report.json");
  REQUIRE(jf.good());
  nlohmann::json j;
  jf >> j;
  CHECK(j["model"]["f1"].get<double>() == doctest::Approx(1.0));
  CHECK(j["model"]["parameter_count"].get<long long>() == 123456);
  CHECK(j["random_baseline"]["precision"].get<double>() == doctest::Approx(0.5));
  CHECK(j["auprc_rule"].get<std::string>() == "average_precision_grouped_ties");

  CHECK(fs::exists(dir / "report.txt"));
  CHECK(fs::exists(dir / "pr_curve.csv"));
  std::ifstream cf(dir / "pr_curve.csv");
  std::string header;
  std::getline(cf, header);
  CHECK(header == "threshold,precision,recall");
  fs::remove_all(dir);
}
