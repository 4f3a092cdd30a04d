// Copyright 2026 The qeraser Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QERASER_RNG_H
#define QERASER_RNG_H

#include <array>
#include <cstdint>

namespace qeraser {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// Counter-based stream: draw k of stream s under seed is a pure function of
/// (seed, s, k), so shots can be evaluated in any order on any worker.
class CounterRng {
   public:
    CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

    uint64_t next_u64();
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    uint64_t draws() const { return draw_; }

   private:
    uint64_t seed_;
    uint64_t stream_;
    uint64_t draw_ = 0;
};

/// Independent child seed for (seed, a, b); used to key grid points.
uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0);

}  // namespace qeraser

#endif
