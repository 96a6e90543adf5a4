// SPDX-License-Identifier: Apache-2.0
//
// onebit-doa: one-bit single-snapshot DOA estimation for sparse linear arrays
// Copyright (C) 2026 The onebit-doa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <benchmark/benchmark.h>

#include <random>

#include "onebit_doa/dataset.hpp"
#include "onebit_doa/sbri.hpp"
#include "onebit_doa/sbrix.hpp"

namespace od = onebit_doa;

namespace {

od::SteeringDictionary dictionary(double spacing) {
  return od::build_dictionary(od::ArrayGeometry::sla18(), {-60.0, 60.0, spacing});
}

od::OneBitSnapshot pair_snapshot(double snr_db, std::uint64_t seed) {
  const od::Scene scene{{-10.28, 20.56}, {od::Complex(1, 0), od::Complex(0, 1)}};
  return od::one_bit_quantize(od::simulate_snapshot(od::ArrayGeometry::sla18(), scene, snr_db, seed));
}

void BM_XUpdate(benchmark::State& state) {
  const auto dict = dictionary(120.0 / static_cast<double>(state.range(0) - 1));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  od::CVector v(18);
  for (auto& e : v) e = {n(rng), n(rng)};
  const od::RVector w = od::RVector::LinSpaced(dict.A.cols(), 1.0, 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(od::x_update(dict.A, v, 0.3, w));
}
BENCHMARK(BM_XUpdate)->Arg(61)->Arg(121)->Arg(241);

void BM_SbriSolve(benchmark::State& state) {
  const auto mode = state.range(0) == 0 ? od::SolveMode::on_grid : od::SolveMode::off_grid;
  const auto dict = dictionary(mode == od::SolveMode::on_grid ? 1.0 : 2.0);
  const auto y = pair_snapshot(20.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(od::sbri_solve(y, dict, {}, mode));
}
BENCHMARK(BM_SbriSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SbrixSolve(benchmark::State& state) {
  const auto mode = state.range(0) == 0 ? od::SolveMode::on_grid : od::SolveMode::off_grid;
  const auto dict = dictionary(mode == od::SolveMode::on_grid ? 1.0 : 2.0);
  const auto y = pair_snapshot(20.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(od::sbrix_solve(y, dict, {}, mode));
}
BENCHMARK(BM_SbrixSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GenerateDataset(benchmark::State& state) {
  auto spec = od::default_dataset_spec(od::SolveMode::off_grid);
  spec.count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(od::generate_dataset(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateDataset)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
