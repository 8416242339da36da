#pragma once

// Totient functions, multiplicative order in (Z/nZ)^x, and primitive-root
// machinery, all exact via factorization.

#include "wieferich/arith.hpp"

namespace wieferich {

inline u128 euler_phi(const Factorization& f)
{
	u128 phi = 1;
	for (auto [p, e] : f.factors)
	{
		phi *= p - 1;
		for (unsigned i = 1; i < e; ++i)
			phi *= p;
	}
	return phi;
}

inline u128 euler_phi(u128 n)
{
	if (n < 1)
		throw std::domain_error("euler_phi: n must be >= 1");
	if (n == 1)
		return 1;
	return euler_phi(factorize(n));
}

// lambda(2)=1, lambda(4)=2, lambda(2^e)=2^(e-2) for e >= 3,
// lambda(p^e)=phi(p^e) for odd p; lcm over the prime powers.
inline u128 carmichael_lambda(u128 n)
{
	if (n < 1)
		throw std::domain_error("carmichael_lambda: n must be >= 1");
	if (n == 1)
		return 1;
	u128 lam = 1;
	for (auto [p, e] : factorize(n).factors)
	{
		u128 part;
		if (p == 2)
			part = e <= 2 ? (u128(1) << (e - 1)) : (u128(1) << (e - 2));
		else
		{
			part = p - 1;
			for (unsigned i = 1; i < e; ++i)
				part *= p;
		}
		lam = lcm_u128(lam, part);
	}
	return lam;
}

inline int mobius(u64 n)
{
	if (n == 0)
		throw std::domain_error("mobius: n must be >= 1");
	if (n == 1)
		return 1;
	int sign = 1;
	for (auto [p, e] : factorize(n).factors)
	{
		if (e > 1)
			return 0;
		sign = -sign;
	}
	return sign;
}

struct OrderProfile
{
	u128 n = 0;
	u128 v = 0;
	u128 phi = 0;    // phi(n)
	u128 lambda = 0; // lambda(n)
	u128 xi = 0;     // phi / lambda, number of maximal cyclic subgroups
	u128 ord = 0;    // ord_n(v)
	u128 index = 0;  // lambda / ord
};

// Exact order: start from lambda(n) and strip each of its primes while the
// reduced power still fixes 1 (O(log^2 n) powmods).
inline OrderProfile mult_order(u128 v, u128 n)
{
	if (n < 2)
		throw std::domain_error("mult_order: modulus must be >= 2");
	v %= n;
	if (gcd_u128(v, n) != 1)
		throw std::domain_error("mult_order: base not coprime to modulus");
	OrderProfile prof;
	prof.n = n;
	prof.v = v;
	Factorization nf = factorize(n);
	prof.phi = euler_phi(nf);
	prof.lambda = carmichael_lambda(n);
	if (prof.phi % prof.lambda != 0)
		throw std::logic_error("mult_order: lambda does not divide phi");
	prof.xi = prof.phi / prof.lambda;
	u128 ord = prof.lambda;
	if (ord > 1)
		for (auto [q, e] : factorize(prof.lambda).factors)
		{
			(void)e;
			while (ord % q == 0 && powmod(v, ord / q, n) == 1)
				ord /= q;
		}
	prof.ord = ord;
	if (prof.lambda % ord != 0)
		throw std::logic_error("mult_order: ord does not divide lambda");
	prof.index = prof.lambda / ord;
	return prof;
}

// k = 1: the classic test a^((p-1)/q) != 1 mod p over prime divisors q of
// p-1. k >= 2: additionally a^(p-1) != 1 mod p^2 (the lift criterion); a
// primitive root mod p lifts to every p^k exactly when it is not nilpotent.
inline bool is_primitive_root(u64 a, u64 p, int k)
{
	if (p < 3 || (p & 1) == 0 || !is_prime(p))
		throw std::domain_error("is_primitive_root: p must be an odd prime");
	if (k < 1)
		throw std::domain_error("is_primitive_root: k must be >= 1");
	if (a % p == 0)
		return false;
	for (auto [q, e] : factorize(p - 1).factors)
	{
		(void)e;
		if (powmod(a % p, (p - 1) / u64(q), p) == 1)
			return false;
	}
	if (k == 1)
		return true;
	u128 p2 = u128(p) * p;
	return powmod(a % p2, p - 1, p2) != 1;
}

inline u64 least_primitive_root(u64 p, int k)
{
	if (k != 1 && k != 2)
		throw std::domain_error("least_primitive_root: k must be 1 or 2");
	for (u64 a = 2;; ++a)
		if (is_primitive_root(a, p, k))
			return a;
}

// A generator of (Z/p^2)^x: the least primitive root mod p, shifted by p
// when it happens to be nilpotent (the shifted lift always works).
inline u64 primitive_root_mod_p2(u64 p)
{
	u64 g = least_primitive_root(p, 1);
	u128 p2 = u128(p) * p;
	if (powmod(g, p - 1, p2) != 1)
		return g;
	return g + p;
}

} // namespace wieferich
