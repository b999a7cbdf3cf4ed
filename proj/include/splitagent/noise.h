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

#ifndef SPLITAGENT_NOISE_H_
#define SPLITAGENT_NOISE_H_

#include <cstdint>
#include <random>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace splitagent {

// All randomness flows through mt19937_64, whose output sequence is fixed by
// the standard. Distributions are computed here rather than with <random>
// distribution classes, whose algorithms vary between standard libraries.
using Rng = std::mt19937_64;

std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t Fnv1a64(absl::string_view bytes);
// Stable child seed for a named sub-stream.
std::uint64_t DeriveSeed(std::uint64_t parent, absl::string_view label);
std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index);

// Uniform in the open interval (0, 1).
double UniformOpen01(Rng& rng);
// Uniform integer in [0, n). n must be positive.
std::uint64_t UniformIndex(Rng& rng, std::uint64_t n);

// b = sensitivity / epsilon. Fails with ZeroEpsilon for epsilon == 0 and
// InvalidArgument for non-positive sensitivity.
absl::StatusOr<double> LaplaceScale(double sensitivity, double epsilon);

// Laplace(0, scale) by inverse CDF.
double SampleLaplace(Rng& rng, double scale);

// P(X <= x) for X ~ Laplace(0, scale). scale == 0 degenerates to a step.
double LaplaceCdf(double x, double scale);

}  // namespace splitagent

#endif  // SPLITAGENT_NOISE_H_
