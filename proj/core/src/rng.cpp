#include "lte/rng.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/random/normal_distribution.hpp>

namespace lte {

namespace detail {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

__extension__ using u128 = unsigned __int128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) noexcept {
  const u128 p = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline void round(PhiloxCounter& c, const PhiloxKey& k) noexcept {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x64_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    round(ctr, key);
  }
  return ctr;
}

}  // namespace detail

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : key_{seed, stream_id} {}

RngStream RngStream::child(std::uint64_t label) const {
  if (depth_ >= kMaxDepth) {
    throw std::length_error("RngStream::child: label depth exhausted");
  }
  if (label == std::numeric_limits<std::uint64_t>::max()) {
    throw std::out_of_range("RngStream::child: label reserved");
  }
  RngStream out(key_[0], key_[1]);
  out.ctr_ = ctr_;
  out.ctr_[0] = 0;
  out.depth_ = depth_ + 1;
  // +1 keeps a child labelled 0 distinct from its parent.
  out.ctr_[out.depth_] = label + 1;
  return out;
}

void RngStream::refill() noexcept {
  buf_ = detail::philox4x64_10(ctr_, key_);
  ++ctr_[0];
  pos_ = 0;
}

double RngStream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(*this);
}

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  if (mean < 16.0) {
    // Sequential inversion: one uniform and one exp; the exact steps call
    // this with means well below 1.
    double p = std::exp(-mean);
    double cdf = p;
    const double u = uniform();
    std::uint64_t k = 0;
    while (u > cdf && p > 0.0) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(*this);
}

}  // namespace lte
