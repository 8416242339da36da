#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wieferich/arith.hpp"

using namespace wieferich;

TEST(Arith, MulmodBasics)
{
	EXPECT_EQ(mulmod(0, 12345, 997), 0u);
	EXPECT_EQ(mulmod(1, 12345, 99991), 12345u % 99991u);
	EXPECT_THROW(mulmod(1, 1, 0), std::domain_error);
	EXPECT_THROW(mulmod(1, 1, (u128(1) << 126) + 1), std::domain_error);
}

TEST(Arith, MulmodNearTheCap)
{
	u128 a = (u128(1) << 63) - 1;
	u128 m = (u128(1) << 126) - 1;
	EXPECT_EQ(mulmod(a, a, m), oracle::mulmod(a, a, m));
}

TEST(Arith, MulmodPowmodAgainstLimbOracle)
{
	std::mt19937_64 rng(20250810);
	for (int i = 0; i < 10000; ++i)
	{
		int bits = 2 + int(rng() % 125);
		u128 m = ((u128(rng()) << 64) | rng()) >> (128 - bits);
		if (m < 2)
			m = 2;
		u128 a = ((u128(rng()) << 64) | rng()) % m;
		u128 b = ((u128(rng()) << 64) | rng()) % m;
		ASSERT_EQ(mulmod(a, b, m), oracle::mulmod(a, b, m));
		if (i % 20 == 0)
		{
			u64 e = rng() % 1000;
			ASSERT_EQ(powmod(a, e, m), oracle::powmod(a, e, m));
		}
	}
}

TEST(Arith, PowmodBasics)
{
	EXPECT_EQ(powmod(7, 0, 13), 1u);
	EXPECT_EQ(powmod(7, 0, 1), 0u); // 1 mod 1
	EXPECT_THROW(powmod(2, 3, 0), std::domain_error);
}

TEST(Arith, PowmodWieferichCongruences)
{
	u128 p2 = u128(1093) * 1093;
	EXPECT_EQ(powmod(2, 1092, p2), 1u);
	u128 p3 = u128(1093) * 1093 * 1093;
	EXPECT_EQ(powmod(2, 1092, p3), oracle::powmod(2, 1092, p3));
	EXPECT_NE(powmod(2, 1092, p3), 1u);
	EXPECT_EQ(u64(powmod(2, 1092, p3)), 581794064u); // not a mod-p^3 solution
}

TEST(Arith, IsPrimeSmall)
{
	EXPECT_FALSE(is_prime(0));
	EXPECT_FALSE(is_prime(1));
	EXPECT_TRUE(is_prime(2));
	EXPECT_TRUE(is_prime(1093));
	EXPECT_TRUE(is_prime(3511));
	EXPECT_TRUE(is_prime(1006003));
	EXPECT_FALSE(is_prime(1093 * 3511ull));
}

TEST(Arith, IsPrimeMatchesSieve)
{
	auto primes = oracle::sieve(100000);
	std::size_t k = 0;
	for (u64 n = 2; n <= 100000; ++n)
	{
		bool expect = k < primes.size() && primes[k] == n;
		if (expect)
			++k;
		ASSERT_EQ(is_prime(n), expect) << n;
	}
}

TEST(Arith, IsPrimeWide)
{
	// 2^89 - 1 is a Mersenne prime; 2^87 - 1 = 3 * 7 * ...
	EXPECT_TRUE(is_prime((u128(1) << 89) - 1));
	EXPECT_FALSE(is_prime((u128(1) << 87) - 1));
}

TEST(Arith, FactorizeExamples)
{
	Factorization f = factorize(1092);
	std::vector<std::pair<u128, unsigned>> want{{2, 2}, {3, 1}, {7, 1}, {13, 1}};
	EXPECT_EQ(f.factors, want);

	f = factorize(4);
	want = {{2, 2}};
	EXPECT_EQ(f.factors, want);

	f = factorize(40486);
	want = {{2, 1}, {31, 1}, {653, 1}};
	EXPECT_EQ(f.factors, want);

	EXPECT_THROW(factorize(1), std::domain_error);
	EXPECT_THROW(factorize(u128(1) << 96), std::domain_error);
}

TEST(Arith, FactorizeRecomposesAndCertifies)
{
	for (u64 n = 2; n <= 100000; ++n)
	{
		Factorization f = factorize(n);
		u128 prod = 1;
		u128 last = 0;
		for (auto [p, e] : f.factors)
		{
			ASSERT_TRUE(is_prime(p)) << n;
			ASSERT_GT(p, last) << n;
			last = p;
			for (unsigned i = 0; i < e; ++i)
				prod *= p;
		}
		ASSERT_EQ(prod, u128(n));
	}
	std::mt19937_64 rng(7);
	for (int i = 0; i < 1000; ++i)
	{
		u64 n = rng();
		if (n < 2)
			continue;
		Factorization f = factorize(n);
		u128 prod = 1;
		for (auto [p, e] : f.factors)
		{
			ASSERT_TRUE(is_prime(p));
			for (unsigned j = 0; j < e; ++j)
				prod *= p;
		}
		ASSERT_EQ(prod, u128(n));
	}
}

TEST(Arith, FermatEulerProperty)
{
	// a^phi(m) = 1 mod m for random coprime pairs
	std::mt19937_64 rng(42);
	int done = 0;
	while (done < 1000)
	{
		u64 m = 2 + rng() % 1000000;
		u64 a = 1 + rng() % (m - 1);
		if (std::gcd(a, m) != 1)
			continue;
		u64 phi = 1;
		for (auto [p, e] : oracle::trial_factor(m))
		{
			phi *= p - 1;
			for (unsigned i = 1; i < e; ++i)
				phi *= p;
		}
		ASSERT_EQ(powmod(a, phi, m), 1u) << a << " " << m;
		++done;
	}
}

TEST(Arith, U128Strings)
{
	EXPECT_EQ(to_string(u128(0)), "0");
	EXPECT_EQ(to_string((u128(1) << 126)), "85070591730234615865843651857942052864");
	EXPECT_EQ(parse_u128("85070591730234615865843651857942052864"), u128(1) << 126);
	EXPECT_THROW(parse_u128("12x"), std::domain_error);
	EXPECT_THROW(parse_u128(""), std::domain_error);
}
