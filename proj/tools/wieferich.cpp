// Command-line surface for the Wieferich search toolkit. Every subcommand
// emits machine-readable output: JSONL for scans and pairs, JSON documents
// for reports, CSV for the indicator cross-check table.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "wieferich/analytics.hpp"
#include "wieferich/charfun.hpp"
#include "wieferich/store.hpp"

using nlohmann::ordered_json;
using namespace wieferich;

namespace {

int g_precision = 16;

std::string dec(long double v)
{
	return dec_str(v, g_precision);
}

ordered_json u128_json(u128 v)
{
	if (v <= u128(UINT64_MAX))
		return ordered_json(u64(v));
	return ordered_json(to_string(v));
}

ordered_json series_json(const SeriesReport& rep)
{
	ordered_json j;
	j["name"] = rep.name;
	j["partial_sum"] = dec(rep.partial_sum);
	j["terms"] = rep.terms;
	j["tail_bound"] = dec(rep.tail_bound);
	j["tail_formula"] = rep.tail_formula;
	j["total_bound"] = dec(rep.total_bound);
	j["components"] = ordered_json::array();
	for (const auto& c : rep.components)
		j["components"].push_back({{"label", c.label}, {"value", dec(c.value)}, {"provenance", c.provenance}});
	return j;
}

std::ostream& out_stream(std::ofstream& file, const std::string& path)
{
	if (path.empty() || path == "-")
		return std::cout;
	file.open(path);
	if (!file)
		throw std::runtime_error("cannot open output file: " + path);
	return file;
}

unsigned default_workers()
{
	if (const char* env = std::getenv("WIEFERICH_WORKERS"))
	{
		int n = std::atoi(env);
		if (n > 0)
			return unsigned(n);
	}
	return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Wieferich prime search and analytic constants toolkit"};
	app.require_subcommand(1);
	app.set_config("--config");

	unsigned workers = default_workers();
	u64 chunk = u64(1) << 20;
	std::string out_path;
	app.add_option("--workers", workers, "worker threads for parallel subcommands");
	app.add_option("--chunk", chunk, "candidates per scan work unit");
	app.add_option("--precision", g_precision, "significant digits for decimal output");
	app.add_option("--out", out_path, "output file (default stdout)");

	// scan
	auto* sc = app.add_subcommand("scan", "search an interval for base-v Wieferich primes");
	u64 sc_base = 2, sc_from = 2, sc_to = 0;
	int sc_power = 2;
	std::string sc_ckpt;
	bool sc_fresh = false;
	sc->add_option("--base", sc_base, "base v")->required();
	sc->add_option("--from", sc_from, "range start (inclusive)");
	sc->add_option("--to", sc_to, "range end (exclusive)")->required();
	sc->add_option("--power", sc_power, "detect v^(p-1) = 1 mod p^power");
	sc->add_option("--checkpoint", sc_ckpt, "checkpoint path (default <out>.ckpt)");
	sc->add_flag("--fresh", sc_fresh, "ignore an existing checkpoint and restart");

	// quotient
	auto* qt = app.add_subcommand("quotient", "Fermat quotient q_v(p)");
	u64 qt_base = 0, qt_prime = 0;
	qt->add_option("--base", qt_base)->required();
	qt->add_option("--prime", qt_prime)->required();

	// order
	auto* od = app.add_subcommand("order", "order profile of v in (Z/nZ)^x");
	u64 od_base = 0;
	std::string od_mod;
	od->add_option("--base", od_base)->required();
	od->add_option("--mod", od_mod)->required();

	// constants
	auto* ct = app.add_subcommand("constants", "series reports and constants");
	std::string ct_which;
	double ct_x = 0;
	u64 ct_base = 2, ct_trunc = 10000;
	ct->add_option("--which", ct_which, "mertens|artin|omega-series|wieferich-constant|correction")
	    ->required()
	    ->check(CLI::IsMember({"mertens", "artin", "omega-series", "wieferich-constant", "correction"}));
	ct->add_option("--x", ct_x, "cutoff");
	ct->add_option("--base", ct_base, "base v");
	ct->add_option("--trunc", ct_trunc, "truncation for the correction factor");

	// predict
	auto* pd = app.add_subcommand("predict", "solved interval exponent for the next prime");
	double pd_x = 0, pd_c = 0;
	pd->add_option("--x", pd_x)->required();
	pd->add_option("--c", pd_c)->required();

	// pairs
	auto* pr = app.add_subcommand("pairs", "Wieferich prime pairs up to a limit");
	u64 pr_limit = 0;
	pr->add_option("--limit", pr_limit)->required();

	// abel
	auto* ab = app.add_subcommand("abel", "composite solutions of v^lambda(n) = 1 mod n^2");
	u64 ab_base = 2, ab_limit = 0;
	ab->add_option("--base", ab_base)->required();
	ab->add_option("--limit", ab_limit)->required();

	// verify-oracle
	auto* vo = app.add_subcommand("verify-oracle", "indicator vs direct order test, CSV");
	u64 vo_pmax = 31;
	vo->add_option("--pmax", vo_pmax, "largest odd prime modulus (<= 101)");

	// proot
	auto* pt = app.add_subcommand("proot", "least primitive root g(p) or h(p^2)");
	u64 pt_prime = 0;
	bool pt_square = false;
	pt->add_option("--prime", pt_prime)->required();
	pt->add_flag("--square", pt_square, "least primitive root mod p^2");

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::CallForHelp& e)
	{
		return app.exit(e);
	}
	catch (const CLI::ParseError& e)
	{
		app.exit(e);
		return 2;
	}

	try
	{
		std::ofstream file;
		std::ostream& os = out_stream(file, out_path);

		if (sc->parsed())
		{
			ScanJob job;
			job.base = sc_base;
			job.range = {sc_from, sc_to};
			job.power = sc_power;
			job.chunk = chunk;
			job.workers = workers;
			if (!out_path.empty() && out_path != "-")
			{
				file.close();
				std::string ckpt = sc_ckpt.empty() ? out_path + ".ckpt" : sc_ckpt;
				if (sc_fresh)
				{
					std::remove(ckpt.c_str());
				}
				FileScanResult res = scan_to_files(job, out_path, ckpt);
				fmt::print(stderr, "scan base={} range=[{},{}) power={}: {} new hit(s){}\n", sc_base,
				           sc_from, sc_to, sc_power, res.appended, res.resumed ? " (resumed)" : "");
			}
			else
			{
				fmt::print("# {}\n", job_fingerprint(job));
				scan(job, [&](const WieferichHit& h) { fmt::print("{}\n", hit_json_line(h)); });
			}
			return 0;
		}
		if (qt->parsed())
		{
			os << fermat_quotient(qt_base, qt_prime) << "\n";
			return 0;
		}
		if (od->parsed())
		{
			OrderProfile p = mult_order(od_base, parse_u128(od_mod));
			ordered_json j;
			j["n"] = u128_json(p.n);
			j["v"] = u128_json(p.v);
			j["phi"] = u128_json(p.phi);
			j["lambda"] = u128_json(p.lambda);
			j["xi"] = u128_json(p.xi);
			j["ord"] = u128_json(p.ord);
			j["index"] = u128_json(p.index);
			os << j.dump(2) << "\n";
			return 0;
		}
		if (ct->parsed())
		{
			ordered_json j;
			if (ct_which == "mertens")
			{
				u64 x = u64(ct_x);
				MertensSumEval s = mertens_sum(x);
				MertensProductEval p = mertens_product(x);
				j["which"] = "mertens";
				j["x"] = x;
				j["sum"] = {{"value", dec(s.sum)},
				            {"asymptote", dec(s.asymptote)},
				            {"deviation", dec(s.deviation)},
				            {"bound", dec(s.bound)},
				            {"bound_holds", s.bound_holds}};
				j["product"] = {{"value", dec(p.product)},
				                {"mertens_form", dec(p.mertens_form)},
				                {"lower", dec(p.lower)},
				                {"upper", dec(p.upper)},
				                {"bound_holds", p.bound_holds}};
			}
			else if (ct_which == "artin")
			{
				ArtinEval a = artin_constant(u64(ct_x));
				j["which"] = "artin";
				j["cutoff"] = a.cutoff;
				j["value"] = dec(a.value);
				j["remainder"] = dec(a.remainder);
			}
			else if (ct_which == "omega-series")
			{
				j = series_json(omega_series(u64(ct_x), workers));
				j["which"] = "omega-series";
			}
			else if (ct_which == "wieferich-constant")
			{
				j = series_json(wieferich_constant(ct_base, u64(ct_x), workers));
				j["which"] = "wieferich-constant";
			}
			else if (ct_which == "correction")
			{
				CorrectionFactor cf = correction_factor(ct_base, ct_trunc);
				j["which"] = "correction";
				j["v"] = cf.v;
				j["a"] = cf.a;
				j["b"] = cf.b;
				j["k"] = cf.k;
				j["truncation"] = cf.truncation;
				j["plain"] = dec(cf.plain);
				j["value"] = dec(cf.value);
				j["convergence_gap"] = dec(cf.convergence_gap);
				const std::size_t cap = 100;
				j["terms"] = ordered_json::array();
				for (std::size_t i = 0; i < cf.terms.size() && i < cap; ++i)
					j["terms"].push_back({{"n", cf.terms[i].n},
					                      {"d", cf.terms[i].d},
					                      {"contribution", dec(cf.terms[i].corrected)}});
				j["terms_total"] = cf.terms.size();
			}
			os << j.dump(2) << "\n";
			return 0;
		}
		if (pd->parsed())
		{
			PredictionReport rep = predict_next((long double)pd_x, (long double)pd_c);
			ordered_json j;
			j["x"] = dec(rep.x);
			j["c"] = dec(rep.c);
			j["solved_exponent"] = dec(rep.solved_exponent);
			j["model"] = rep.model;
			os << j.dump(2) << "\n";
			return 0;
		}
		if (pr->parsed())
		{
			for (auto [p, q] : pair_scan(pr_limit, workers))
			{
				ordered_json j;
				j["p"] = p;
				j["q"] = q;
				os << j.dump() << "\n";
			}
			return 0;
		}
		if (ab->parsed())
		{
			for (u64 n : abel_scan(ab_base, ab_limit, workers))
				os << n << "\n";
			return 0;
		}
		if (vo->parsed())
		{
			if (vo_pmax > 101)
				throw std::domain_error("verify-oracle: pmax capped at 101");
			os << "p,v,indicator,direct\n";
			u64 disc = 0, rows = 0;
			for_each_prime({3, vo_pmax + 1}, [&](u64 p) {
				u64 tau = primitive_root_mod_p2(p);
				for (u64 v = 1; v < p * p; ++v)
				{
					if (v % p == 0)
						continue;
					IndicatorEval ev = indicator_order_divides(v, p, tau);
					os << p << "," << v << "," << std::llround(ev.value) << "," << (ev.direct ? 1 : 0)
					   << "\n";
					++rows;
					if (ev.discrepancy)
						++disc;
				}
			});
			fmt::print(stderr, "verify-oracle: {} rows, {} discrepancies\n", rows, disc);
			return 0;
		}
		if (pt->parsed())
		{
			os << least_primitive_root(pt_prime, pt_square ? 2 : 1) << "\n";
			return 0;
		}
	}
	catch (const std::exception& e)
	{
		fmt::print(stderr, "error: {}\n", e.what());
		return 1;
	}
	return 0;
}
