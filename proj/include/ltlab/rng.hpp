/*
   Copyright 2026 The ltlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ltlab {

// Philox4x32-10 block function. Counter in, 128 random bits out.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Stream ids are partitioned by purpose so that suites never share a stream.
constexpr std::uint64_t stream_id(std::uint64_t purpose, std::uint64_t index) {
    return (purpose << 40) ^ index;
}

/// Counter-based random stream keyed by (master_seed, stream_id).
///
/// Two streams with different ids never overlap; the sequence drawn from a
/// stream depends only on the key and the number of draws made so far.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    PhiloxKey key_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int pos_ = 2;
};

} // namespace ltlab
