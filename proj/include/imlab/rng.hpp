#pragma once

#include <cstdint>

namespace imlab {

// xoshiro256++ seeded through splitmix64; normals via Box-Muller. Fully
// specified so that results depend only on (seed, draw order), never on the
// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    // uniform in [0, 1)
    double uniform01();
    // standard normal
    double normal();
    // uniform in [0, m)
    int uniform_index(int m);

private:
    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// Hash of (master seed, stream index); chunked estimators draw chunk c from
// substream_seed(seed, c) so results are independent of the worker count.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

}  // namespace imlab
