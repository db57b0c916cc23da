#pragma once

// Segmented sieve of Eratosthenes over odd numbers.
//
// Bit i of the table stands for the odd number 2i+1 and is set when that number
// is NOT prime (1 included). The table is built segment by segment from the
// base primes up to sqrt(limit); segments are independent and may be sieved on
// several workers. A cumulative prime count per segment backs pi(x) queries.
//
// Cache file layout (all integers little-endian):
//   8 bytes  magic "PSGSIEVE"
//   u32      version (1)
//   u64      limit
//   u64      segment size (bits per segment)
//   u64      word count
//   u64[...] bitset words

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "psg/errors.hpp"
#include "psg/parallel.hpp"

namespace psg {

struct SieveOptions {
  std::uint64_t segment_bits = 1ull << 20;       // odd numbers per segment
  std::uint64_t max_limit = 4'000'000'000ull;    // memory cap (~250 MB of bits)
  unsigned workers = 0;                          // 0 = default budget
};

namespace detail {

/// Primes up to `limit` by a plain byte sieve; used for the base primes.
inline std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<std::uint8_t> composite(limit + 1, 0);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = 1;
  }
  return out;
}

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Marks odd composites among odd numbers 2i+1 for i in [first, first+count),
/// writing bits relative to `first` into `words` (which must be zeroed and
/// hold count bits). Odd base primes only.
inline void sieve_odd_block(std::uint64_t first, std::uint64_t count, const std::vector<std::uint32_t>& base,
                            std::uint64_t* words) {
  const std::uint64_t lo = 2 * first + 1;             // smallest odd value in block
  const std::uint64_t hi = 2 * (first + count) + 1;   // exclusive
  for (std::uint32_t p : base) {
    if (p == 2) continue;
    const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
    if (pp >= hi) break;
    // first odd multiple of p that is >= max(p*p, lo)
    std::uint64_t start = std::max(pp, ((lo + p - 1) / p) * p);
    if ((start & 1) == 0) start += p;
    for (std::uint64_t v = start; v < hi; v += 2ull * p) {
      const std::uint64_t bit = (v - 1) / 2 - first;
      words[bit >> 6] |= 1ull << (bit & 63);
    }
  }
  if (first == 0) words[0] |= 1ull;  // 1 is not prime
}

}  // namespace detail

/// Immutable primality table for 0..limit.
class PrimeTable {
 public:
  explicit PrimeTable(std::uint64_t limit, SieveOptions options = {}) : limit_(limit), options_(options) {
    if (limit < 2) throw ConfigError("sieve limit must be at least 2");
    if (limit > options.max_limit) {
      throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds cap " +
                          std::to_string(options.max_limit));
    }
    if (options.segment_bits == 0 || options.segment_bits % 64 != 0) {
      throw ConfigError("segment size must be a positive multiple of 64");
    }
    build();
  }

  std::uint64_t limit() const { return limit_; }
  std::uint64_t segment_bits() const { return options_.segment_bits; }
  std::size_t segment_count() const { return segment_prefix_.size(); }

  bool is_prime(std::uint64_t n) const {
    if (n > limit_) throw RangeError("is_prime(" + std::to_string(n) + ") above sieve limit");
    if (n < 3) return n == 2;
    if ((n & 1) == 0) return false;
    return !test_bit(n >> 1);
  }

  /// Unchecked lookup for hot loops; n must be <= limit().
  bool is_prime_unchecked(std::uint64_t n) const {
    if (n < 3) return n == 2;
    return (n & 1) && !test_bit(n >> 1);
  }

  /// pi(x), the number of primes <= x.
  std::uint64_t count(std::uint64_t x) const {
    if (x > limit_) throw RangeError("count(" + std::to_string(x) + ") above sieve limit");
    if (x < 2) return 0;
    // odd indices 0..(x-1)/2 inclusive
    const std::uint64_t last = (x - 1) / 2;
    const std::uint64_t seg = last / options_.segment_bits;
    std::uint64_t total = seg == 0 ? 0 : segment_prefix_[seg - 1];
    total += count_zero_bits(seg * options_.segment_bits, last + 1);
    return total + 1;  // the prime 2
  }

  /// All primes in [lo, hi].
  std::vector<std::uint32_t> primes(std::uint64_t lo, std::uint64_t hi) const {
    if (hi > limit_) throw RangeError("primes(): range above sieve limit");
    std::vector<std::uint32_t> out;
    if (hi < lo) return out;
    for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(static_cast<std::uint32_t>(p)); });
    return out;
  }

  std::vector<std::uint32_t> primes_upto(std::uint64_t hi) const { return primes(0, hi); }

  /// Calls f(p) for every prime p in [lo, hi] in increasing order.
  template <class F>
  void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) const {
    if (hi > limit_) throw RangeError("for_each_prime(): range above sieve limit");
    if (lo <= 2 && hi >= 2) f(std::uint64_t{2});
    if (hi < 3) return;
    std::uint64_t i = std::max<std::uint64_t>(lo, 3) >> 1;
    if (2 * i + 1 < lo) ++i;
    const std::uint64_t end = ((hi - 1) >> 1) + 1;
    while (i < end) {
      const std::uint64_t w = i >> 6;
      std::uint64_t word = ~bits_[w] & (~0ull << (i & 63));
      const std::uint64_t word_end = (w + 1) << 6;
      if (end < word_end) word &= (1ull << (end & 63)) - 1;
      while (word) {
        const int b = std::countr_zero(word);
        f(2 * ((w << 6) + static_cast<std::uint64_t>(b)) + 1);
        word &= word - 1;
      }
      i = word_end;
    }
  }

  /// Raw words of the odd-composite bitset.
  const std::vector<std::uint64_t>& words() const { return bits_; }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open sieve cache '" + path + "' for writing");
    out.write(kMagic, 8);
    put_u32(out, kVersion);
    put_u64(out, limit_);
    put_u64(out, options_.segment_bits);
    put_u64(out, bits_.size());
    for (std::uint64_t w : bits_) put_u64(out, w);
    if (!out) throw ConfigError("failed writing sieve cache '" + path + "'");
  }

  static PrimeTable load(const std::string& path, SieveOptions options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open sieve cache '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("bad sieve cache magic");
    if (get_u32(in) != kVersion) throw ConfigError("unsupported sieve cache version");
    const std::uint64_t limit = get_u64(in);
    const std::uint64_t segment = get_u64(in);
    const std::uint64_t nwords = get_u64(in);
    if (!in || limit < 2 || segment == 0 || segment % 64 != 0 || nwords != word_count(limit)) {
      throw ConfigError("corrupt sieve cache header");
    }
    if (limit > options.max_limit) throw CapacityError("cached sieve limit exceeds cap");
    options.segment_bits = segment;
    PrimeTable table(limit, options, Uninitialized{});
    table.bits_.resize(nwords);
    for (auto& w : table.bits_) w = get_u64(in);
    if (!in) throw ConfigError("truncated sieve cache");
    table.build_prefix();
    return table;
  }

 private:
  struct Uninitialized {};
  static constexpr char kMagic[8] = {'P', 'S', 'G', 'S', 'I', 'E', 'V', 'E'};
  static constexpr std::uint32_t kVersion = 1;

  PrimeTable(std::uint64_t limit, SieveOptions options, Uninitialized) : limit_(limit), options_(options) {}

  static std::uint64_t index_count(std::uint64_t limit) { return (limit - 1) / 2 + 1; }  // odd 1..limit
  static std::uint64_t word_count(std::uint64_t limit) { return (index_count(limit) + 63) / 64; }

  bool test_bit(std::uint64_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }

  std::uint64_t count_zero_bits(std::uint64_t from, std::uint64_t to) const {
    std::uint64_t total = 0;
    std::uint64_t i = from;
    while (i < to) {
      const std::uint64_t w = i >> 6;
      std::uint64_t word = ~bits_[w] & (~0ull << (i & 63));
      const std::uint64_t word_end = (w + 1) << 6;
      if (to < word_end) word &= (1ull << (to & 63)) - 1;
      total += static_cast<std::uint64_t>(std::popcount(word));
      i = word_end;
    }
    return total;
  }

  void build() {
    const std::uint64_t nidx = index_count(limit_);
    bits_.assign(word_count(limit_), 0);
    const auto base = detail::small_primes(detail::isqrt(limit_));
    const std::uint64_t seg = options_.segment_bits;
    const std::size_t nseg = static_cast<std::size_t>((nidx + seg - 1) / seg);
    parallel_chunks(nseg, options_.workers, [&](std::size_t s) {
      const std::uint64_t first = s * seg;
      const std::uint64_t count = std::min(seg, nidx - first);
      detail::sieve_odd_block(first, count, base, bits_.data() + first / 64);
    });
    // indices past the limit are marked composite so raw words stay canonical
    for (std::uint64_t i = nidx; i < bits_.size() * 64; ++i) bits_[i >> 6] |= 1ull << (i & 63);
    build_prefix();
  }

  void build_prefix() {
    const std::uint64_t nidx = index_count(limit_);
    const std::uint64_t seg = options_.segment_bits;
    const std::size_t nseg = static_cast<std::size_t>((nidx + seg - 1) / seg);
    segment_prefix_.assign(nseg, 0);
    std::uint64_t running = 0;
    for (std::size_t s = 0; s < nseg; ++s) {
      running += count_zero_bits(s * seg, std::min((s + 1) * seg, nidx));
      segment_prefix_[s] = running;
    }
  }

  static void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
  }
  static void put_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  }
  static std::uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4] = {};
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  static std::uint64_t get_u64(std::ifstream& in) {
    unsigned char b[8] = {};
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  std::uint64_t limit_;
  SieveOptions options_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> segment_prefix_;  // primes (odd) through end of segment s
};

/// Primality flags for the values in [lo, hi) from a single interval sieve.
/// Used to check that segmenting does not change the result.
inline std::vector<std::uint8_t> sieve_interval(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint8_t> flags;
  if (hi <= lo) return flags;
  flags.assign(hi - lo, 1);
  for (std::uint64_t v = lo; v < std::min<std::uint64_t>(hi, 2); ++v) flags[v - lo] = 0;
  const auto base = detail::small_primes(detail::isqrt(hi - 1));
  for (std::uint32_t p : base) {
    const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
    for (std::uint64_t v = std::max(pp, ((lo + p - 1) / p) * p); v < hi; v += p) flags[v - lo] = 0;
  }
  return flags;
}

}  // namespace psg
