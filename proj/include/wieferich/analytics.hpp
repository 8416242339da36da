#pragma once

// Constants, asymptotic models, series bounds, correction factors and
// next-prime interval predictions. Sums accumulate in long double with
// Neumaier compensation and report 16 significant digits.

#include <cmath>
#include <cstdio>
#include <string>

#include "wieferich/search.hpp"

namespace wieferich {

// Euler-Mascheroni constant; cross-checked against the prime product
// sweep in the test suite.
inline constexpr long double euler_gamma = 0.577215664901532860606512090082402431042L;
// Mertens constant b0 in sum_{p<=x} 1/p = log log x + b0 + o(1);
// cross-checked numerically by fitting the sieve at large x.
inline constexpr long double mertens_b0 = 0.261497212847642783755426838608695859051L;

inline std::string dec_str(long double v, int digits = 16)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
	return buf;
}

class Kahan
{
public:
	void add(long double x)
	{
		long double t = sum_ + x;
		if (std::fabs(sum_) >= std::fabs(x))
			comp_ += (sum_ - t) + x;
		else
			comp_ += (x - t) + sum_;
		sum_ = t;
	}
	long double value() const { return sum_ + comp_; }

private:
	long double sum_ = 0, comp_ = 0;
};

struct SeriesComponent
{
	std::string label;
	long double value = 0;
	std::string provenance;
};

struct SeriesReport
{
	std::string name;
	long double partial_sum = 0;
	u64 terms = 0;
	long double tail_bound = 0;
	std::string tail_formula;
	long double total_bound = 0; // partial_sum + tail_bound
	std::vector<SeriesComponent> components;
};

struct MertensSumEval
{
	u64 x = 0;
	long double sum = 0;        // sum_{p<=x} 1/p
	long double asymptote = 0;  // log log x + b0
	long double deviation = 0;  // |sum - asymptote|
	long double bound = 0;      // 1/(10 log^2 x) + 4/(15 log^3 x)
	bool bound_holds = false;   // claimed for x >= 10400
};

namespace detail {

inline MertensSumEval mertens_sum_eval(u64 x, long double sum)
{
	MertensSumEval ev;
	ev.x = x;
	ev.sum = sum;
	long double lx = std::log((long double)x);
	ev.asymptote = std::log(lx) + mertens_b0;
	ev.deviation = std::fabs(sum - ev.asymptote);
	ev.bound = 1.0L / (10.0L * lx * lx) + 4.0L / (15.0L * lx * lx * lx);
	ev.bound_holds = ev.deviation < ev.bound;
	return ev;
}

} // namespace detail

inline MertensSumEval mertens_sum(u64 x)
{
	if (x < 2 || x > 100000000)
		throw std::domain_error("mertens_sum: x must lie in [2, 10^8]");
	Kahan s;
	for_each_prime({2, x + 1}, [&](u64 p) { s.add(1.0L / (long double)p); });
	return detail::mertens_sum_eval(x, s.value());
}

// One sieve pass, evaluated at each checkpoint (ascending).
inline std::vector<MertensSumEval> mertens_sum_sweep(std::vector<u64> xs)
{
	std::sort(xs.begin(), xs.end());
	if (xs.empty())
		return {};
	if (xs.front() < 2 || xs.back() > 100000000)
		throw std::domain_error("mertens_sum_sweep: x must lie in [2, 10^8]");
	std::vector<MertensSumEval> out;
	Kahan s;
	std::size_t i = 0;
	for_each_prime({2, xs.back() + 1}, [&](u64 p) {
		while (i < xs.size() && xs[i] < p)
			out.push_back(detail::mertens_sum_eval(xs[i++], s.value()));
		s.add(1.0L / (long double)p);
	});
	while (i < xs.size())
		out.push_back(detail::mertens_sum_eval(xs[i++], s.value()));
	return out;
}

struct MertensProductEval
{
	u64 x = 0;
	long double product = 0;     // prod_{p<=x} (1 - 1/p)
	long double mertens_form = 0; // 1 / (e^gamma log x)
	long double lower = 0, upper = 0; // two-sided band, factor 1 -+ 0.2/log^2 x
	bool bound_holds = false;
};

namespace detail {

inline MertensProductEval mertens_product_eval(u64 x, long double log_product)
{
	MertensProductEval ev;
	ev.x = x;
	ev.product = std::exp(log_product);
	long double lx = std::log((long double)x);
	ev.mertens_form = 1.0L / (std::exp(euler_gamma) * lx);
	long double eps = 0.2L / (lx * lx);
	ev.lower = ev.mertens_form * (1.0L - eps);
	ev.upper = ev.mertens_form * (1.0L + eps);
	ev.bound_holds = ev.lower < ev.product && ev.product < ev.upper;
	return ev;
}

} // namespace detail

inline MertensProductEval mertens_product(u64 x)
{
	if (x < 2 || x > 100000000)
		throw std::domain_error("mertens_product: x must lie in [2, 10^8]");
	Kahan lg; // product in log-space
	for_each_prime({2, x + 1}, [&](u64 p) { lg.add(std::log(1.0L - 1.0L / (long double)p)); });
	return detail::mertens_product_eval(x, lg.value());
}

inline std::vector<MertensProductEval> mertens_product_sweep(std::vector<u64> xs)
{
	std::sort(xs.begin(), xs.end());
	if (xs.empty())
		return {};
	if (xs.front() < 2 || xs.back() > 100000000)
		throw std::domain_error("mertens_product_sweep: x must lie in [2, 10^8]");
	std::vector<MertensProductEval> out;
	Kahan lg;
	std::size_t i = 0;
	for_each_prime({2, xs.back() + 1}, [&](u64 p) {
		while (i < xs.size() && xs[i] < p)
			out.push_back(detail::mertens_product_eval(xs[i++], lg.value()));
		lg.add(std::log(1.0L - 1.0L / (long double)p));
	});
	while (i < xs.size())
		out.push_back(detail::mertens_product_eval(xs[i++], lg.value()));
	return out;
}

struct ArtinEval
{
	u64 cutoff = 0;
	long double value = 0;     // prod_{p<=P} (1 - 1/(p(p-1)))
	long double remainder = 0; // O(1/P) estimate for the dropped tail
};

inline ArtinEval artin_constant(u64 P)
{
	if (P < 2)
		throw std::domain_error("artin_constant: cutoff must be >= 2");
	Kahan lg;
	for_each_prime({2, P + 1}, [&](u64 p) {
		lg.add(std::log(1.0L - 1.0L / ((long double)p * (long double)(p - 1))));
	});
	ArtinEval ev;
	ev.cutoff = P;
	ev.value = std::exp(lg.value());
	ev.remainder = 1.0L / ((long double)P * std::log((long double)P));
	return ev;
}

struct CorrectionTerm
{
	u64 n = 0, d = 0;
	long double plain = 0;     // mu(n) gcd(dn,k) / (dn phi(dn))
	long double corrected = 0; // doubled when dn | 2a and a = 1 mod 4
};

struct CorrectionFactor
{
	u64 v = 0;
	u64 a = 0;  // squarefree part
	u64 b = 1;
	int k = 1;  // maximal with v = a * b^k
	u64 truncation = 0;
	long double plain = 0;
	long double value = 0;           // with the factor-2 index correction
	long double convergence_gap = 0; // |c(N) - c(2N)|, corrected variant
	std::vector<CorrectionTerm> terms; // nonzero terms up to the truncation
};

namespace detail {

// v = a * b^k with a squarefree and k maximal: k is the largest integer
// for which every prime exponent of v is 0 or 1 mod k.
inline void power_decompose(u64 v, u64& a, u64& b, int& k)
{
	Factorization f = factorize(v);
	unsigned max_e = 0;
	for (auto [p, e] : f.factors)
		max_e = std::max(max_e, e);
	k = 1;
	for (unsigned cand = max_e; cand >= 2; --cand)
	{
		bool ok = true;
		for (auto [p, e] : f.factors)
			if (e % cand > 1)
				ok = false;
		if (ok)
		{
			k = int(cand);
			break;
		}
	}
	a = 1;
	b = 1;
	if (k == 1)
	{
		// squarefree v (k = 2 always works otherwise): a is v itself
		a = v;
		return;
	}
	for (auto [p, e] : f.factors)
	{
		if (e % unsigned(k) == 1)
			a *= u64(p);
		for (unsigned i = 0; i < e / unsigned(k); ++i)
			b *= u64(p);
	}
}

} // namespace detail

// Truncated double sum sum_{n<=N} sum_{d|n} mu(n) gcd(dn,k) / (dn phi(dn)).
// Both the plain sum and the variant with the factor-2 index correction
// (r = dn | 2a with a = 1 mod 4 doubles the term) are computed; the
// convergence gap compares truncation at N against 2N.
inline CorrectionFactor correction_factor(u64 v, u64 N)
{
	if (v < 2)
		throw std::domain_error("correction_factor: base must be >= 2");
	if (N < 1 || N > 100000)
		throw std::domain_error("correction_factor: truncation must lie in [1, 10^5]");
	CorrectionFactor cf;
	cf.v = v;
	cf.truncation = N;
	detail::power_decompose(v, cf.a, cf.b, cf.k);
	const u64 twoa = 2 * cf.a;
	const bool a_1mod4 = cf.a % 4 == 1;

	// mu and phi by smallest-prime-factor sieve up to 2N. For d | n the
	// primes of d all divide n, so phi(dn) = d * phi(n).
	Kahan plain_N, corr_N, plain_2N, corr_2N;
	const u64 M = 2 * N;
	std::vector<int> mu(M + 1, 1);
	std::vector<u64> phi(M + 1);
	{
		std::vector<u32> spf(M + 1, 0);
		for (u64 i = 2; i <= M; ++i)
			if (spf[i] == 0)
				for (u64 j = i; j <= M; j += i)
					if (spf[j] == 0)
						spf[j] = u32(i);
		phi[1] = 1;
		for (u64 i = 2; i <= M; ++i)
		{
			u64 m = i, ph = 1;
			int cnt = 0;
			bool sqfree = true;
			while (m > 1)
			{
				u64 p = spf[m];
				u64 pe = p, e = 1;
				m /= p;
				while (m % p == 0)
				{
					m /= p;
					pe *= p;
					++e;
				}
				ph *= pe / p * (p - 1);
				++cnt;
				if (e > 1)
					sqfree = false;
			}
			phi[i] = ph;
			mu[i] = sqfree ? (cnt % 2 ? -1 : 1) : 0;
		}
	}

	for (u64 n = 1; n <= M; ++n)
	{
		if (mu[n] == 0)
			continue;
		for (u64 d = 1; d <= n; ++d)
		{
			if (n % d != 0)
				continue;
			u64 r = d * n;
			long double phi_r = (long double)d * (long double)phi[n];
			long double term = (long double)mu[n] * (long double)gcd_u64(r, u64(cf.k)) /
			                   ((long double)r * phi_r);
			long double cterm = term;
			if (a_1mod4 && twoa % r == 0)
				cterm *= 2.0L;
			plain_2N.add(term);
			corr_2N.add(cterm);
			if (n <= N)
			{
				plain_N.add(term);
				corr_N.add(cterm);
				cf.terms.push_back({n, d, term, cterm});
			}
		}
	}
	cf.plain = plain_N.value();
	cf.value = corr_N.value();
	cf.convergence_gap = std::fabs(corr_N.value() - corr_2N.value());
	return cf;
}

// c * (log log (x+z) - log log x)
inline long double count_model(long double x, long double z, long double c)
{
	if (x < 3)
		throw std::domain_error("count_model: x must be >= 3");
	if (z < 0)
		throw std::domain_error("count_model: z must be >= 0");
	if (z == 0)
		return 0;
	return c * (std::log(std::log(x + z)) - std::log(std::log(x)));
}

struct PredictionReport
{
	long double x = 0;
	long double c = 0;
	long double solved_exponent = 0; // D: predicted interval [x, 10^D]
	std::string model;               // "unit-density" or "balanced"
};

// Solve c (log log X - log log x) = 1: X = exp(log(x) e^(1/c)),
// D = log10 X.
inline PredictionReport predict_next(long double x, long double c)
{
	if (c <= 0)
		throw std::domain_error("predict_next: density must be positive");
	if (x < 100)
		throw std::domain_error("predict_next: x must be >= 100");
	PredictionReport pr;
	pr.x = x;
	pr.c = c;
	pr.solved_exponent = std::log(x) * std::exp(1.0L / c) / std::log(10.0L);
	pr.model = std::fabs(c - 1.0L) < 1e-12L ? "unit-density" : "balanced";
	return pr;
}

// Partial sum of 1/p over scan hits up to the limit plus the integral tail
// bound driven by W_v(t) <= 4 v log log t, evaluated as 4*v*c*loglog(L)/L
// with c = 2.
inline SeriesReport wieferich_constant(u64 v, u64 scan_limit, unsigned workers = 0)
{
	ScanJob job;
	job.base = v;
	job.range = {2, scan_limit + 1};
	job.workers = workers;
	ScanResult res = scan(job);
	SeriesReport rep;
	rep.name = "wieferich-constant-base-" + std::to_string(v);
	Kahan s;
	for (const WieferichHit& h : res.hits)
	{
		long double term = 1.0L / (long double)h.prime;
		s.add(term);
		rep.components.push_back({"1/" + std::to_string(h.prime), term, "scan hit"});
	}
	rep.partial_sum = s.value();
	rep.terms = res.hits.size();
	long double L = (long double)scan_limit;
	rep.tail_bound = 4.0L * (long double)v * 2.0L * std::log(std::log(L)) / L;
	rep.tail_formula = "4*v*c*loglog(L)/L, c=2";
	rep.total_bound = rep.partial_sum + rep.tail_bound;
	rep.components.push_back({"tail", rep.tail_bound, rep.tail_formula});
	rep.components.push_back({"total", rep.total_bound, "partial_sum + tail"});
	return rep;
}

// sum_{p <= x_cut} 1/(p ord_p(2)) (p = 2 excluded: the order is undefined
// there), the Wieferich subsum 1/ord_{p^2}(2) over scanned hits, the tail
// 2/log(x_cut) and the assembled total.
inline SeriesReport omega_series(u64 x_cut, unsigned workers = 0)
{
	if (x_cut < 3 || x_cut > 1000000)
		throw std::domain_error("omega_series: cut must lie in [3, 10^6]");
	SeriesReport rep;
	rep.name = "omega-series";
	Kahan main_sum;
	u64 terms = 0;
	for_each_prime({3, x_cut + 1}, [&](u64 p) {
		u64 ord = u64(mult_order(2, p).ord);
		main_sum.add(1.0L / ((long double)p * (long double)ord));
		++terms;
	});
	rep.partial_sum = main_sum.value();
	rep.terms = terms;
	rep.tail_bound = 2.0L / std::log((long double)x_cut);
	rep.tail_formula = "2/log(x_cut)";
	rep.total_bound = rep.partial_sum + rep.tail_bound;
	rep.components.push_back({"main_sum", rep.partial_sum, "sieve + order, p in [3, x_cut]"});

	ScanJob job;
	job.base = 2;
	job.range = {2, x_cut + 1};
	job.workers = workers;
	Kahan wsub;
	for (const WieferichHit& h : scan(job).hits)
	{
		u128 p2 = u128(h.prime) * h.prime;
		wsub.add(1.0L / (long double)(u64)mult_order(2, p2).ord);
	}
	rep.components.push_back({"wieferich_subsum", wsub.value(), "1/ord_{p^2}(2) over scan hits"});
	rep.components.push_back({"tail", rep.tail_bound, rep.tail_formula});
	rep.components.push_back({"total", rep.total_bound, "main_sum + tail"});
	return rep;
}

// Adaptive Simpson for li(x) = integral_2^x dt/log t.
namespace detail {

inline long double simpson(long double a, long double b, long double fa, long double fm, long double fb)
{
	return (b - a) / 6.0L * (fa + 4.0L * fm + fb);
}

inline long double li_rec(long double a, long double b, long double fa, long double fm, long double fb,
                          long double whole, long double tol, int depth)
{
	long double m = (a + b) / 2;
	long double lm = (a + m) / 2, rm = (m + b) / 2;
	long double flm = 1.0L / std::log(lm), frm = 1.0L / std::log(rm);
	long double left = simpson(a, m, fa, flm, fm);
	long double right = simpson(m, b, fm, frm, fb);
	if (depth <= 0 || std::fabs(left + right - whole) < 15.0L * tol)
		return left + right + (left + right - whole) / 15.0L;
	return li_rec(a, m, fa, flm, fm, left, tol / 2, depth - 1) +
	       li_rec(m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

} // namespace detail

inline long double li(long double x)
{
	if (x < 2)
		throw std::domain_error("li: x must be >= 2");
	if (x == 2)
		return 0;
	long double a = 2, b = x;
	long double fa = 1.0L / std::log(a), fb = 1.0L / std::log(b);
	long double m = (a + b) / 2, fm = 1.0L / std::log(m);
	long double whole = detail::simpson(a, b, fa, fm, fb);
	return detail::li_rec(a, b, fa, fm, fb, whole, 1e-13L, 60);
}

struct PhiRatioEval
{
	u64 x = 0;
	long double sum = 0;    // sum_{p<=x} phi(p-1)/(p-1)
	long double li_x = 0;
	long double ratio = 0;  // sum / li(x), compare against the Artin-type constant
};

inline PhiRatioEval phi_ratio_prime_sum(u64 x)
{
	if (x < 3 || x > 10000000)
		throw std::domain_error("phi_ratio_prime_sum: x must lie in [3, 10^7]");
	// phi table by sieve, then one pass over the primes
	std::vector<u32> phi(x + 1);
	for (u64 i = 0; i <= x; ++i)
		phi[i] = u32(i);
	for (u64 i = 2; i <= x; ++i)
		if (phi[i] == i) // i prime
			for (u64 j = i; j <= x; j += i)
				phi[j] -= phi[j] / u32(i);
	Kahan s;
	PhiRatioEval ev;
	ev.x = x;
	for_each_prime({2, x + 1}, [&](u64 p) { s.add((long double)phi[p - 1] / (long double)(p - 1)); });
	ev.sum = s.value();
	ev.li_x = li((long double)x);
	ev.ratio = ev.sum / ev.li_x;
	return ev;
}

// Harmonic sum mod p^2 vanishes for every prime p > 3.
inline bool wolstenholme_check(u64 p)
{
	if (p <= 3 || !is_prime(p))
		throw std::domain_error("wolstenholme_check: p must be a prime > 3");
	if (p >= (u64(1) << 31))
		throw std::domain_error("wolstenholme_check: p too large");
	u64 p2 = p * p;
	u64 acc = 0;
	for (u64 m = 1; m < p; ++m)
	{
		// inverse of m mod p^2 by extended Euclid
		i64 t = 0, newt = 1;
		i64 r = i64(p2), newr = i64(m);
		while (newr != 0)
		{
			i64 q = r / newr;
			t = std::exchange(newt, t - q * newt);
			r = std::exchange(newr, r - q * newr);
		}
		u64 inv = u64(t < 0 ? t + i64(p2) : t);
		acc = (acc + inv) % p2;
	}
	return acc == 0;
}

} // namespace wieferich
