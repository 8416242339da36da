#pragma once

// Numerical evaluation of the exponential-sum indicator functions for
// element orders mod p^2, as a cross-check against direct order
// computation at tiny moduli.
//
// The inner geometric sum tests divisibility of the integer difference
// tau^(dpn) - v (canonical residues, range (-p^2, p^2)) by phi(p^2). That
// is the construction as given; it is not equivalent to congruence mod p^2
// and can fire when the difference equals +-phi(p^2). Such cases are
// reported through the discrepancy flag rather than corrected away.

#include <cmath>
#include <complex>
#include <numbers>

#include "wieferich/orders.hpp"

namespace wieferich {

struct IndicatorEval
{
	u64 p = 0;
	u64 v = 0;
	u64 tau = 0;
	double value = 0;       // real part of the double sum
	double imag = 0;        // imaginary part, reported for the rounding check
	bool direct = false;    // ground truth from the orders module
	bool discrepancy = false;
	// Same triple sum with the outer index over the full interval
	// [1, p-1) instead of [1, (p-1)/d]; only indicator_order_divides
	// distinguishes the two (see that function).
	double wide_value = 0;
};

namespace detail {

// Kahan-compensated accumulation of e^(2*pi*i*k/m) terms indexed mod m.
class RootAccumulator
{
public:
	explicit RootAccumulator(u64 m) : m_(m), roots_(m)
	{
		for (u64 j = 0; j < m; ++j)
		{
			double ang = 2.0 * std::numbers::pi * double(j) / double(m);
			roots_[j] = {std::cos(ang), std::sin(ang)};
		}
	}

	void add_geometric(i64 step, long double weight, double& re, double& im) const
	{
		// sum over m' in [0, m) of e^(2 pi i * step * m' / m), times weight
		u64 s = u64(((step % i64(m_)) + i64(m_)) % i64(m_));
		long double cre = 0, cim = 0, ere = 0, eim = 0;
		u64 idx = 0;
		for (u64 k = 0; k < m_; ++k)
		{
			kahan(cre, ere, roots_[idx].real());
			kahan(cim, eim, roots_[idx].imag());
			idx += s;
			if (idx >= m_)
				idx -= m_;
		}
		re += double(cre * weight);
		im += double(cim * weight);
	}

private:
	static void kahan(long double& sum, long double& err, long double x)
	{
		long double y = x - err;
		long double t = sum + y;
		err = (t - sum) - y;
		sum = t;
	}

	u64 m_;
	std::vector<std::complex<double>> roots_;
};

inline void require_indicator_domain(u64 v, u64 p, u64 tau, u128& p2, u128& phi)
{
	if (p < 3 || p > 101 || !is_prime(p))
		throw std::domain_error("indicator: p must be an odd prime <= 101");
	if (v % p == 0)
		throw std::domain_error("indicator: base must be coprime to p");
	p2 = u128(p) * p;
	phi = u128(p) * (p - 1);
	if (mult_order(u128(tau) % p2, p2).ord != phi)
		throw std::domain_error("indicator: tau is not a primitive root mod p^2");
}

} // namespace detail

// Detects ord_{p^2}(v) == p-1: outer sum over n in [1, p-1) coprime to
// p-1, inner geometric sum of length phi(p^2).
inline IndicatorEval indicator_order_equal(u64 v, u64 p, u64 tau)
{
	u128 p2, phi;
	detail::require_indicator_domain(v, p, tau, p2, phi);
	IndicatorEval ev;
	ev.p = p;
	ev.v = v;
	ev.tau = tau;
	detail::RootAccumulator acc{u64(phi)};
	long double w = 1.0L / (long double)(u64(phi));
	i64 vres = i64(u64(u128(v) % p2));
	for (u64 n = 1; n < p - 1; ++n)
	{
		if (gcd_u64(n, p - 1) != 1)
			continue;
		i64 t = i64(u64(powmod(tau, u128(p) * n, p2)));
		acc.add_geometric(t - vres, w, ev.value, ev.imag);
	}
	ev.wide_value = ev.value;
	ev.direct = mult_order(u128(v) % p2, p2).ord == p - 1;
	ev.discrepancy = (std::llround(ev.value) == 1) != ev.direct;
	return ev;
}

// Detects ord_{p^2}(v) | p-1 via the divisor decomposition: for each
// d | p-1 the outer index runs over n in [1, (p-1)/d] coprime to
// (p-1)/d, which makes the (d, n) pairs partition the order-(p-1)
// subgroup (sum of phi((p-1)/d) terms = p-1). wide_value keeps the
// variant with n over the whole interval [1, p-1), which over-counts for
// d > 1 and is reported for comparison.
inline IndicatorEval indicator_order_divides(u64 v, u64 p, u64 tau)
{
	u128 p2, phi;
	detail::require_indicator_domain(v, p, tau, p2, phi);
	IndicatorEval ev;
	ev.p = p;
	ev.v = v;
	ev.tau = tau;
	detail::RootAccumulator acc{u64(phi)};
	long double w = 1.0L / (long double)(u64(phi));
	i64 vres = i64(u64(u128(v) % p2));
	double wide_im = 0;
	for (u64 d = 1; d <= p - 1; ++d)
	{
		if ((p - 1) % d != 0)
			continue;
		u64 m = (p - 1) / d;
		for (u64 n = 1; n < p - 1; ++n)
		{
			if (gcd_u64(n, m) != 1)
				continue;
			i64 t = i64(u64(powmod(tau, u128(d) * p * n, p2)));
			acc.add_geometric(t - vres, w, ev.wide_value, wide_im);
			if (n <= m)
				acc.add_geometric(t - vres, w, ev.value, ev.imag);
		}
	}
	ev.direct = (p - 1) % u64(mult_order(u128(v) % p2, p2).ord) == 0;
	ev.discrepancy = (std::llround(ev.value) == 1) != ev.direct;
	return ev;
}

struct CoprimeSumEval
{
	u64 t = 0, p = 0, d = 0;
	std::complex<double> direct;  // sum over n <= (p-1)/d, gcd(n, (p-1)/d) = 1 of w^(tn)
	std::complex<double> closed;  // Mobius form over divisors e | (p-1)/d
	double bound = 0;             // 2 p log p / (pi t)
	double identity_error = 0;    // |direct - closed|
	bool identity_holds = false;  // identity_error < 1e-9
	bool bound_holds = false;
	bool excluded_case = false;   // degenerate denominator 1 - w^(et) hit
};

// Geometric sum over a coprime index set, with its closed form and the
// modulus bound checked at evaluation time.
inline CoprimeSumEval geometric_coprime_sum(u64 t, u64 p, u64 d)
{
	if (p < 3 || !is_prime(p))
		throw std::domain_error("geometric_coprime_sum: p must be an odd prime");
	if (t < 1 || t > p - 1)
		throw std::domain_error("geometric_coprime_sum: t must lie in [1, p-1]");
	if (d < 1 || (p - 1) % d != 0)
		throw std::domain_error("geometric_coprime_sum: d must divide p-1");
	CoprimeSumEval ev;
	ev.t = t;
	ev.p = p;
	ev.d = d;
	const u64 N = (p - 1) / d;
	auto omega_pow = [&](u64 k) {
		double ang = 2.0 * std::numbers::pi * double(k % p) / double(p);
		return std::complex<double>(std::cos(ang), std::sin(ang));
	};
	std::complex<double> direct = 0;
	for (u64 n = 1; n <= N; ++n)
		if (gcd_u64(n, N) == 1)
			direct += omega_pow(t * n);
	ev.direct = direct;

	std::complex<double> closed = 0;
	for (u64 e = 1; e <= N; ++e)
	{
		if (N % e != 0)
			continue;
		int mu = mobius(e);
		if (mu == 0)
			continue;
		u64 et = e * t;
		if (et % p == 0)
		{
			// w^(et) = 1: the closed-form denominator vanishes; sum the
			// geometric run directly and mark the excluded case.
			ev.excluded_case = true;
			closed += double(mu) * std::complex<double>(double(N / e), 0.0);
			continue;
		}
		std::complex<double> z = omega_pow(et);
		u64 M = N / e;
		// sum_{m=1..M} z^m = (z - z^(M+1)) / (1 - z)
		std::complex<double> zM1 = omega_pow(et * (M + 1) % p);
		closed += double(mu) * (z - zM1) / (1.0 - z);
	}
	ev.closed = closed;
	ev.identity_error = std::abs(direct - closed);
	ev.identity_holds = ev.identity_error < 1e-9;
	ev.bound = 2.0 * double(p) * std::log(double(p)) / (std::numbers::pi * double(t));
	ev.bound_holds = std::abs(direct) <= ev.bound + 1e-12;
	return ev;
}

} // namespace wieferich
