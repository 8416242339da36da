#pragma once

// Segmented sieve of Eratosthenes over arbitrary 64-bit ranges, streamed in
// ascending order. Odd-only bitset with a 2-wheel; p = 2 is emitted
// specially so that half-open ranges starting at or below 2 keep it.

#include <cmath>
#include <optional>
#include <vector>

#include "wieferich/arith.hpp"

namespace wieferich {

struct PrimeRange
{
	u64 lo = 0;
	u64 hi = 0;                    // half-open [lo, hi)
	u64 segment_size = u64(1) << 20;

	void validate() const
	{
		if (hi > (u64(1) << 63))
			throw std::domain_error("PrimeRange: hi exceeds 2^63");
		if (hi <= lo)
			throw std::domain_error("PrimeRange: empty or inverted range");
		if (segment_size < (u64(1) << 10))
			throw std::domain_error("PrimeRange: segment_size below 2^10");
	}
};

// Monolithic odd-only sieve for the base primes; memory O(limit/16) bytes.
inline std::vector<u64> small_primes(u64 limit) // primes <= limit
{
	std::vector<u64> out;
	if (limit < 2)
		return out;
	out.push_back(2);
	u64 half = (limit - 1) / 2; // index i <-> odd number 2i+1, i >= 1
	std::vector<bool> composite(half + 1, false);
	for (u64 i = 1; 2 * i + 1 <= limit / (2 * i + 1); ++i)
	{
		if (composite[i])
			continue;
		u64 p = 2 * i + 1;
		for (u64 j = (p * p - 1) / 2; j <= half; j += p)
			composite[j] = true;
	}
	for (u64 i = 1; i <= half; ++i)
		if (!composite[i])
			out.push_back(2 * i + 1);
	return out;
}

namespace detail {

// Sieve the odd numbers of [lo, hi) against base (odd primes <= sqrt(hi)).
template <class F>
void sieve_segment(u64 lo, u64 hi, const std::vector<u64>& base, F&& emit)
{
	if (lo <= 2 && 2 < hi)
		emit(u64(2));
	u64 first = std::max<u64>(lo, 3);
	if ((first & 1) == 0)
		++first;
	if (first >= hi)
		return;
	u64 count = (hi - first + 1) / 2; // odds first, first+2, ...
	std::vector<bool> composite(count, false);
	for (u64 p : base)
	{
		if (p == 2)
			continue;
		if (p * p >= hi)
			break;
		u64 start = std::max(p * p, ((first + p - 1) / p) * p);
		if ((start & 1) == 0)
			start += p;
		for (u64 m = start; m < hi; m += 2 * p)
			composite[(m - first) / 2] = true;
	}
	for (u64 i = 0; i < count; ++i)
	{
		if (!composite[i])
		{
			u64 n = first + 2 * i;
			if (n >= 3 && n != 1)
				emit(n);
		}
	}
	// 1 never enters: first >= 3
}

} // namespace detail

// Single-consumer ascending stream over a range; memory stays bounded by
// one segment plus the base primes.
class PrimeStream
{
public:
	explicit PrimeStream(PrimeRange range) : range_(range)
	{
		range_.validate();
		u64 root = u64(std::sqrt((double)range_.hi)) + 2;
		base_ = small_primes(root);
		next_lo_ = range_.lo;
	}

	std::optional<u64> next()
	{
		while (pos_ >= buffer_.size())
		{
			if (next_lo_ >= range_.hi)
				return std::nullopt;
			u64 seg_hi = std::min(range_.hi, next_lo_ + range_.segment_size);
			buffer_.clear();
			pos_ = 0;
			detail::sieve_segment(next_lo_, seg_hi, base_, [&](u64 p) { buffer_.push_back(p); });
			next_lo_ = seg_hi;
		}
		return buffer_[pos_++];
	}

private:
	PrimeRange range_;
	std::vector<u64> base_;
	std::vector<u64> buffer_;
	std::size_t pos_ = 0;
	u64 next_lo_ = 0;
};

template <class F>
void for_each_prime(PrimeRange range, F&& f)
{
	range.validate();
	u64 root = u64(std::sqrt((double)range.hi)) + 2;
	std::vector<u64> base = small_primes(root);
	for (u64 lo = range.lo; lo < range.hi; lo += range.segment_size)
	{
		u64 hi = std::min(range.hi, lo + range.segment_size);
		detail::sieve_segment(lo, hi, base, f);
	}
}

struct PrimeCount
{
	u64 x = 0;
	u64 pi = 0;               // exact, by sieve
	double legendre_estimate; // x / log x
};

inline PrimeCount prime_count(u64 x)
{
	PrimeCount pc;
	pc.x = x;
	pc.legendre_estimate = x >= 2 ? double(x) / std::log(double(x)) : 0.0;
	if (x < 2)
		return pc;
	for_each_prime({2, x + 1}, [&](u64) { ++pc.pi; });
	return pc;
}

} // namespace wieferich
