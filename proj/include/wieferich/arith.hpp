#pragma once

// Exact integer and modular arithmetic wide enough for p^3 with p < 2^42
// and p^2 with p < 2^63 (modulus cap 2^126), plus primality and factorization.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wieferich {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

inline constexpr u128 max_modulus = u128(1) << 126;

inline std::string to_string(u128 n)
{
	if (n == 0)
		return "0";
	std::string s;
	while (n > 0)
	{
		s.insert(s.begin(), char('0' + int(n % 10)));
		n /= 10;
	}
	return s;
}

inline u128 parse_u128(std::string_view s)
{
	if (s.empty())
		throw std::domain_error("empty integer literal");
	u128 n = 0;
	for (char c : s)
	{
		if (c < '0' || c > '9')
			throw std::domain_error("bad integer literal: " + std::string(s));
		u128 next = n * 10 + u128(c - '0');
		if (next < n)
			throw std::domain_error("integer literal overflows 128 bits");
		n = next;
	}
	return n;
}

inline u64 gcd_u64(u64 a, u64 b)
{
	while (b != 0)
	{
		u64 t = a % b;
		a = b;
		b = t;
	}
	return a;
}

inline u128 gcd_u128(u128 a, u128 b)
{
	while (b != 0)
	{
		u128 t = a % b;
		a = b;
		b = t;
	}
	return a;
}

inline u128 lcm_u128(u128 a, u128 b)
{
	if (a == 0 || b == 0)
		return 0;
	return a / gcd_u128(a, b) * b;
}

// (a*b) mod m for m <= 2^126. Fast path: m fits 64 bits, so the product fits
// u128. Wide path: add-and-double; every intermediate stays below 2^127,
// which is the reason for the 2^126 cap. Inputs must already be reduced.
inline u128 mulmod(u128 a, u128 b, u128 m)
{
	if (m == 0)
		throw std::domain_error("mulmod: modulus is zero");
	if (m > max_modulus)
		throw std::domain_error("mulmod: modulus exceeds 2^126");
	if (a >= m)
		a %= m;
	if (b >= m)
		b %= m;
	if (m <= u128(UINT64_MAX))
		return (a * b) % m;
	if (a < b)
		std::swap(a, b);
	u128 r = 0;
	while (b != 0)
	{
		if (b & 1)
		{
			r += a;
			if (r >= m)
				r -= m;
		}
		a <<= 1;
		if (a >= m)
			a -= m;
		b >>= 1;
	}
	return r;
}

// b^e mod m by square-and-multiply; e = 0 gives 1 mod m.
inline u128 powmod(u128 b, u128 e, u128 m)
{
	if (m == 0)
		throw std::domain_error("powmod: modulus is zero");
	if (m > max_modulus)
		throw std::domain_error("powmod: modulus exceeds 2^126");
	if (m == 1)
		return 0;
	b %= m;
	if (m <= u128(UINT64_MAX))
	{
		u64 mm = u64(m), bb = u64(b), r = 1;
		while (e != 0)
		{
			if (e & 1)
				r = u64((u128(r) * bb) % mm);
			bb = u64((u128(bb) * bb) % mm);
			e >>= 1;
		}
		return r;
	}
	u128 r = 1;
	while (e != 0)
	{
		if (e & 1)
			r = mulmod(r, b, m);
		b = mulmod(b, b, m);
		e >>= 1;
	}
	return r;
}

namespace detail {

inline u64 splitmix64(u64& state)
{
	u64 z = (state += 0x9e3779b97f4a7c15ULL);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

inline bool miller_rabin_round(u128 n, u128 a, u128 d, int s)
{
	a %= n;
	if (a == 0)
		return true;
	u128 x = powmod(a, d, n);
	if (x == 1 || x == n - 1)
		return true;
	for (int i = 1; i < s; ++i)
	{
		x = mulmod(x, x, n);
		if (x == n - 1)
			return true;
	}
	return false;
}

} // namespace detail

// Deterministic for n < 2^64 via the standard 12-witness set
// {2,3,5,7,11,13,17,19,23,29,31,37}. For wider n: Miller-Rabin with 40
// rounds, witnesses drawn from splitmix64 seeded with the fixed constant
// 0x77ec2fa9d3f05c41 (same verdict on every run).
inline bool is_prime(u128 n)
{
	if (n < 2)
		return false;
	for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
	{
		if (n == p)
			return true;
		if (n % p == 0)
			return false;
	}
	u128 d = n - 1;
	int s = 0;
	while ((d & 1) == 0)
	{
		d >>= 1;
		++s;
	}
	if (n < (u128(1) << 64))
	{
		for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
			if (!detail::miller_rabin_round(n, a, d, s))
				return false;
		return true;
	}
	u64 state = 0x77ec2fa9d3f05c41ULL;
	for (int round = 0; round < 40; ++round)
	{
		u128 a = 2 + (u128(detail::splitmix64(state)) << 64 | detail::splitmix64(state)) % (n - 3);
		if (!detail::miller_rabin_round(n, a, d, s))
			return false;
	}
	return true;
}

struct Factorization
{
	u128 n = 1;
	std::vector<std::pair<u128, unsigned>> factors; // (prime, exponent), primes ascending
};

namespace detail {

// Pollard rho, Brent variant.
inline u128 pollard_brent(u128 n, u64& state)
{
	if ((n & 1) == 0)
		return 2;
	while (true)
	{
		u128 y = 2 + splitmix64(state) % (n - 3);
		u128 c = 1 + splitmix64(state) % (n - 2);
		u128 x = y, d = 1;
		u64 r = 1;
		u128 q = 1, ys = y;
		while (d == 1)
		{
			x = y;
			for (u64 i = 0; i < r; ++i)
				y = (mulmod(y, y, n) + c) % n;
			u64 k = 0;
			while (k < r && d == 1)
			{
				ys = y;
				u64 lim = std::min<u64>(128, r - k);
				for (u64 i = 0; i < lim; ++i)
				{
					y = (mulmod(y, y, n) + c) % n;
					u128 diff = x > y ? x - y : y - x;
					q = mulmod(q, diff == 0 ? 1 : diff, n);
				}
				d = gcd_u128(q, n);
				k += lim;
			}
			r *= 2;
		}
		if (d == n)
		{
			d = 1;
			while (d == 1)
			{
				ys = (mulmod(ys, ys, n) + c) % n;
				u128 diff = x > ys ? x - ys : ys - x;
				d = gcd_u128(diff == 0 ? 1 : diff, n);
			}
		}
		if (d != n)
			return d;
	}
}

inline void factor_rec(u128 n, std::vector<u128>& out, u64& state)
{
	if (n == 1)
		return;
	if (is_prime(n))
	{
		out.push_back(n);
		return;
	}
	u128 d = pollard_brent(n, state);
	factor_rec(d, out, state);
	factor_rec(n / d, out, state);
}

inline constexpr u64 trial_division_bound = 10000;

} // namespace detail

// Trial division below a fixed bound, then rho on the cofactor, with
// Miller-Rabin certification of every part.
inline Factorization factorize(u128 n)
{
	if (n < 2)
		throw std::domain_error("factorize: n must be >= 2");
	if (n >= (u128(1) << 96))
		throw std::domain_error("factorize: n must be < 2^96");
	Factorization f;
	f.n = n;
	std::vector<u128> primes;
	for (u64 d : {2ull, 3ull, 5ull})
		while (n % d == 0)
		{
			primes.push_back(d);
			n /= d;
		}
	static constexpr u64 wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
	u64 d = 7;
	int w = 0;
	while (d <= detail::trial_division_bound && u128(d) * d <= n)
	{
		while (n % d == 0)
		{
			primes.push_back(d);
			n /= d;
		}
		d += wheel[w];
		w = (w + 1) & 7;
	}
	if (n > 1)
	{
		u64 state = 0x6a09e667f3bcc909ULL;
		detail::factor_rec(n, primes, state);
	}
	std::sort(primes.begin(), primes.end());
	for (u128 p : primes)
	{
		if (!f.factors.empty() && f.factors.back().first == p)
			++f.factors.back().second;
		else
			f.factors.push_back({p, 1});
	}
	return f;
}

} // namespace wieferich
