// Copyright 2026 The SplitAgent Authors
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

#include "splitagent/noise.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "splitagent/status.h"

namespace splitagent {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a64(absl::string_view bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::uint64_t DeriveSeed(std::uint64_t parent, absl::string_view label) {
  return SplitMix64(parent ^ SplitMix64(Fnv1a64(label)));
}

std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index) {
  return SplitMix64(parent ^ SplitMix64(index + 0x632BE59BD9B4E019ULL));
}

double UniformOpen01(Rng& rng) {
  // 53 random mantissa bits, shifted by half an ulp to exclude 0 and 1.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t UniformIndex(Rng& rng, std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased for any n.
  const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

absl::StatusOr<double> LaplaceScale(double sensitivity, double epsilon) {
  if (epsilon == 0.0) {
    return MakeError(ErrorKind::kZeroEpsilon, "Laplace noise needs epsilon > 0");
  }
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat("negative epsilon ", epsilon));
  }
  if (!(sensitivity > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be positive, got ", sensitivity));
  }
  return sensitivity / epsilon;
}

double SampleLaplace(Rng& rng, double scale) {
  const double u = UniformOpen01(rng) - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -magnitude : magnitude;
}

double LaplaceCdf(double x, double scale) {
  if (scale <= 0.0) return x >= 0.0 ? 1.0 : 0.0;
  if (x < 0.0) return 0.5 * std::exp(x / scale);
  return 1.0 - 0.5 * std::exp(-x / scale);
}

}  // namespace splitagent
