#pragma once

// Congruence detectors and the parallel interval scans. Work is cut into
// fixed-width chunks claimed by a worker pool; results are merged strictly
// in chunk order, so output is independent of the worker count and a
// completed chunk prefix is a valid resume point.

#include <atomic>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>

#include "wieferich/orders.hpp"
#include "wieferich/primes.hpp"

namespace wieferich {

struct WieferichHit
{
	u64 base = 0;
	u64 prime = 0;
	int power = 2;      // solution modulus is prime^power
	u64 quotient = 0;   // Fermat quotient, always 0 for a hit with power >= 2
	bool balanced = false; // ord_{p^2}(base) == p-1
};

struct ScanJob
{
	u64 base = 2;
	PrimeRange range;
	int power = 2;
	u64 chunk = u64(1) << 20; // candidates per work unit
	unsigned workers = 0;     // 0 = hardware concurrency

	void validate() const
	{
		range.validate();
		if (base < 2)
			throw std::domain_error("ScanJob: base must be >= 2");
		if (power < 2)
			throw std::domain_error("ScanJob: power must be >= 2");
		if (chunk == 0)
			throw std::domain_error("ScanJob: chunk must be positive");
	}
};

// (v^(p-1) - 1) / p mod p, computed from v^(p-1) mod p^2.
inline u64 fermat_quotient(u64 v, u64 p)
{
	if (!is_prime(p))
		throw std::domain_error("fermat_quotient: p must be prime");
	if (v % p == 0)
		throw std::domain_error("fermat_quotient: p divides the base");
	u128 p2 = u128(p) * p;
	u128 r = powmod(u128(v) % p2, p - 1, p2);
	// Fermat: r = 1 + t*p with 0 <= t < p
	return u64(((r - 1) / p) % p);
}

// v^(p-1) == 1 mod p^k. Primes dividing v are not solutions (the Fermat
// quotient map is undefined there), so they report false rather than error
// and scans need no special-casing.
inline bool is_wieferich(u64 v, u64 p, int k)
{
	if (k < 2)
		throw std::domain_error("is_wieferich: power must be >= 2");
	if (v % p == 0)
		return false;
	u128 m = 1;
	for (int i = 0; i < k; ++i)
	{
		if (m > max_modulus / p)
			throw std::domain_error("is_wieferich: p^k exceeds 2^126");
		m *= p;
	}
	return powmod(u128(v) % m, p - 1, m) == 1;
}

inline bool is_balanced(u64 v, u64 p)
{
	if (!is_prime(p))
		throw std::domain_error("is_balanced: p must be prime");
	if (v % p == 0)
		throw std::domain_error("is_balanced: p divides the base");
	u128 p2 = u128(p) * p;
	return mult_order(u128(v) % p2, p2).ord == p - 1;
}

// Primitive root mod p that is simultaneously a Wieferich witness, i.e. it
// fails to lift to a primitive root mod p^2.
inline bool is_nilpotent_proot(u64 v, u64 p)
{
	if (v % p == 0)
		throw std::domain_error("is_nilpotent_proot: p divides the base");
	return is_primitive_root(v, p, 1) && is_wieferich(v, p, 2);
}

struct ScanResult
{
	std::vector<WieferichHit> hits; // ascending by prime
	u64 completed_hi = 0;           // candidates below this bound fully scanned
	bool completed = false;         // false when cancelled via the progress sink
};

using HitSink = std::function<void(const WieferichHit&)>;
// Called after each chunk-prefix completes (hits already emitted);
// return false to stop at this boundary.
using ProgressSink = std::function<bool(u64 completed_hi)>;

namespace detail {

inline WieferichHit make_hit(u64 v, u64 p, int k)
{
	WieferichHit h;
	h.base = v;
	h.prime = p;
	h.power = k;
	h.quotient = fermat_quotient(v, p);
	u128 p2 = u128(p) * p;
	h.balanced = mult_order(u128(v) % p2, p2).ord == p - 1;
	return h;
}

} // namespace detail

inline ScanResult scan(const ScanJob& job, const HitSink& on_hit = {}, const ProgressSink& on_progress = {})
{
	job.validate();
	const u64 lo = job.range.lo, hi = job.range.hi;
	const u64 n_chunks = (hi - lo + job.chunk - 1) / job.chunk;
	unsigned workers = job.workers != 0 ? job.workers : std::max(1u, std::thread::hardware_concurrency());
	workers = unsigned(std::min<u64>(workers, n_chunks));

	u64 root = u64(std::sqrt((double)hi)) + 2;
	const std::vector<u64> base_primes = small_primes(root);

	std::vector<std::vector<WieferichHit>> chunk_hits(n_chunks);
	std::vector<char> chunk_done(n_chunks, 0);
	std::atomic<u64> next_chunk{0};
	std::atomic<bool> cancelled{false};
	std::mutex mtx;
	std::condition_variable cv;

	auto worker = [&]() {
		while (!cancelled.load(std::memory_order_relaxed))
		{
			u64 c = next_chunk.fetch_add(1);
			if (c >= n_chunks)
				return;
			u64 c_lo = lo + c * job.chunk;
			u64 c_hi = std::min(hi, c_lo + job.chunk);
			std::vector<WieferichHit> found;
			detail::sieve_segment(c_lo, c_hi, base_primes, [&](u64 p) {
				if (job.base % p == 0)
					return;
				if (is_wieferich(job.base, p, job.power))
					found.push_back(detail::make_hit(job.base, p, job.power));
			});
			{
				std::lock_guard<std::mutex> lock(mtx);
				chunk_hits[c] = std::move(found);
				chunk_done[c] = 1;
			}
			cv.notify_one();
		}
	};

	std::vector<std::thread> pool;
	for (unsigned i = 0; i < workers; ++i)
		pool.emplace_back(worker);

	// Merge loop: consume chunks strictly in order.
	ScanResult result;
	result.completed_hi = lo;
	u64 merged = 0;
	{
		std::unique_lock<std::mutex> lock(mtx);
		while (merged < n_chunks && !cancelled.load())
		{
			cv.wait(lock, [&] { return chunk_done[merged] != 0 || cancelled.load(); });
			while (merged < n_chunks && chunk_done[merged])
			{
				for (const WieferichHit& h : chunk_hits[merged])
				{
					result.hits.push_back(h);
					if (on_hit)
						on_hit(h);
				}
				chunk_hits[merged].clear();
				++merged;
				result.completed_hi = std::min(hi, lo + merged * job.chunk);
				if (on_progress && !on_progress(result.completed_hi))
				{
					cancelled.store(true);
					cv.notify_all();
					break;
				}
			}
		}
	}

	for (auto& t : pool)
		t.join();
	result.completed = merged == n_chunks;
	return result;
}

struct WieferichCount
{
	u64 wieferich = 0;     // W_v(x)
	u64 pi = 0;            // pi(x)
	u64 non_wieferich = 0; // pi(x) - W_v(x)
};

inline WieferichCount count_wieferich(u64 v, u64 x, int k = 2, unsigned workers = 0)
{
	ScanJob job;
	job.base = v;
	job.range = {2, x + 1};
	job.power = k;
	job.workers = workers;
	WieferichCount c;
	c.wieferich = scan(job).hits.size();
	c.pi = prime_count(x).pi;
	c.non_wieferich = c.pi - c.wieferich;
	return c;
}

inline bool is_wieferich_pair(u64 p, u64 q)
{
	return is_wieferich(p, q, 2) && is_wieferich(q, p, 2);
}

// All unordered prime pairs p < q <= limit with p^(q-1) = 1 mod q^2 and
// q^(p-1) = 1 mod p^2. For each p the second congruence is solved
// structurally: q mod p^2 must lie in the order-(p-1) subgroup of
// (Z/p^2)^x, which is walked via powers of g^p for a generator g; only the
// walk's survivors are tested against the first congruence.
inline std::vector<std::pair<u64, u64>> pair_scan(u64 limit, unsigned workers = 0)
{
	if (limit > 1000000)
		throw std::domain_error("pair_scan: limit capped at 10^6");
	std::vector<u64> primes;
	if (limit >= 2)
		for_each_prime({2, limit + 1}, [&](u64 p) { primes.push_back(p); });

	unsigned nw = workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
	nw = unsigned(std::min<std::size_t>(nw, primes.size() ? primes.size() : 1));
	std::vector<std::vector<std::pair<u64, u64>>> per_prime(primes.size());
	std::atomic<std::size_t> next{0};

	auto test_candidate = [&](u64 p, u64 q, std::vector<std::pair<u64, u64>>& out) {
		if (q > p && q <= limit && is_prime(q) && is_wieferich(p, q, 2))
			out.push_back({p, q});
	};
	auto run = [&]() {
		while (true)
		{
			std::size_t i = next.fetch_add(1);
			if (i >= primes.size())
				return;
			u64 p = primes[i];
			u128 p2 = u128(p) * p;
			auto& out = per_prime[i];
			if (p == 2)
			{
				for (u64 q = 1 + 4; q <= limit; q += 4)
					test_candidate(2, q, out);
			}
			else
			{
				u64 g = primitive_root_mod_p2(p);
				u128 tau = powmod(g, p, p2); // generates the order-(p-1) subgroup
				u128 h = 1;
				for (u64 j = 0; j < p - 1; ++j)
				{
					for (u128 q = h; q <= limit; q += p2)
						if (q > 1)
							test_candidate(p, u64(q), out);
					h = mulmod(h, tau, p2);
				}
			}
			std::sort(out.begin(), out.end());
		}
	};
	std::vector<std::thread> pool;
	for (unsigned i = 1; i < nw; ++i)
		pool.emplace_back(run);
	run();
	for (auto& t : pool)
		t.join();

	std::vector<std::pair<u64, u64>> pairs;
	for (auto& v : per_prime)
		pairs.insert(pairs.end(), v.begin(), v.end());
	return pairs;
}

// Composite generalization: n <= limit with v^(lambda(n)) = 1 mod n^2,
// gcd(v, n) = 1 (prime n reduce to the k = 2 Wieferich test).
inline std::vector<u64> abel_scan(u64 v, u64 limit, unsigned workers = 0)
{
	if (limit > 100000)
		throw std::domain_error("abel_scan: limit capped at 10^5");
	if (v < 2)
		throw std::domain_error("abel_scan: base must be >= 2");
	unsigned nw = workers != 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
	const u64 block = 2048;
	const u64 n_blocks = limit >= 2 ? (limit - 1 + block - 1) / block : 0;
	std::vector<std::vector<u64>> per_block(n_blocks);
	std::atomic<u64> next{0};
	auto run = [&]() {
		while (true)
		{
			u64 b = next.fetch_add(1);
			if (b >= n_blocks)
				return;
			u64 lo = 2 + b * block;
			u64 hi = std::min(limit + 1, lo + block);
			for (u64 n = lo; n < hi; ++n)
			{
				if (gcd_u64(v, n) != 1)
					continue;
				u128 n2 = u128(n) * n;
				if (powmod(u128(v) % n2, carmichael_lambda(n), n2) == 1)
					per_block[b].push_back(n);
			}
		}
	};
	std::vector<std::thread> pool;
	for (unsigned i = 1; i < nw; ++i)
		pool.emplace_back(run);
	run();
	for (auto& t : pool)
		t.join();
	std::vector<u64> out;
	for (auto& v2 : per_block)
		out.insert(out.end(), v2.begin(), v2.end());
	return out;
}

} // namespace wieferich
