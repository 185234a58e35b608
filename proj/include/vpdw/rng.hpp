#pragma once

#include <cstdint>

namespace vpdw {

// splitmix64: seeds the main generator and derives shard substreams
inline uint64_t splitmix64(uint64_t &state)
{
	uint64_t z = (state += 0x9E3779B97F4A7C15ull);
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
	return z ^ (z >> 31);
}

// xoshiro256** with splitmix64 seeding; shards use independent substreams so
// a fixed (seed, shard count) reproduces bitwise
class Xoshiro256 {
  public:
	explicit Xoshiro256(uint64_t seed)
	{
		uint64_t sm = seed;
		for (auto &x : s_)
			x = splitmix64(sm);
	}
	static Xoshiro256 forShard(uint64_t seed, uint64_t shard)
	{
		return Xoshiro256(seed ^ (0xA3EC647659359ACDull * (shard + 1)));
	}

	uint64_t next()
	{
		auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
		uint64_t result = rotl(s_[1] * 5, 7) * 9;
		uint64_t t = s_[1] << 17;
		s_[2] ^= s_[0];
		s_[3] ^= s_[1];
		s_[1] ^= s_[2];
		s_[0] ^= s_[3];
		s_[2] ^= t;
		s_[3] = rotl(s_[3], 45);
		return result;
	}

	// uniform in [0, 1)
	double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
	uint64_t s_[4];
};

} // namespace vpdw
