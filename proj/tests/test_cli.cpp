#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string cli_bin()
{
	const char* p = std::getenv("WIEFERICH_CLI_BIN");
	return p ? p : "./tools/wieferich";
}

struct CliResult
{
	int exit_code = -1;
	std::string out;
};

CliResult run_cli(const std::string& args)
{
	CliResult r;
	std::string cmd = cli_bin() + " " + args + " 2>/dev/null";
	FILE* fp = popen(cmd.c_str(), "r");
	if (!fp)
		return r;
	char buf[4096];
	std::size_t n;
	while ((n = fread(buf, 1, sizeof buf, fp)) > 0)
		r.out.append(buf, n);
	int status = pclose(fp);
	r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
	return r;
}

std::vector<std::string> lines_of(const std::string& s)
{
	std::vector<std::string> out;
	std::stringstream ss(s);
	std::string line;
	while (std::getline(ss, line))
		if (!line.empty())
			out.push_back(line);
	return out;
}

std::string slurp(const std::string& path)
{
	std::ifstream in(path);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

} // namespace

TEST(Cli, QuotientPrintsNumber)
{
	CliResult r = run_cli("quotient --base 2 --prime 3");
	EXPECT_EQ(r.exit_code, 0);
	EXPECT_EQ(r.out, "1\n");
}

TEST(Cli, ScanStdoutFindsBase2Hits)
{
	CliResult r = run_cli("scan --base 2 --from 2 --to 1000000");
	ASSERT_EQ(r.exit_code, 0);
	auto lines = lines_of(r.out);
	ASSERT_EQ(lines.size(), 3u); // header + two hits
	EXPECT_EQ(lines[0][0], '#');
	EXPECT_EQ(lines[1], R"({"v":2,"p":1093,"k":2,"q":0,"balanced":false})");
	EXPECT_EQ(lines[2], R"({"v":2,"p":3511,"k":2,"q":0,"balanced":false})");
}

TEST(Cli, ScanCleanExitWithoutHits)
{
	CliResult r = run_cli("scan --base 2 --from 2 --to 1000");
	EXPECT_EQ(r.exit_code, 0);
	auto lines = lines_of(r.out);
	ASSERT_EQ(lines.size(), 1u);
	EXPECT_EQ(lines[0][0], '#');
}

TEST(Cli, ScanWorkerCountsProduceIdenticalFiles)
{
	fs::path dir = fs::temp_directory_path() / "wf_cli_scan";
	fs::create_directories(dir);
	std::string f1 = (dir / "w1.jsonl").string();
	std::string f8 = (dir / "w8.jsonl").string();
	fs::remove(f1);
	fs::remove(f8);
	fs::remove(f1 + ".ckpt");
	fs::remove(f8 + ".ckpt");
	EXPECT_EQ(run_cli("--workers 1 --out " + f1 + " scan --base 5 --from 2 --to 100000").exit_code, 0);
	EXPECT_EQ(run_cli("--workers 8 --out " + f8 + " scan --base 5 --from 2 --to 100000").exit_code, 0);
	std::string a = slurp(f1), b = slurp(f8);
	EXPECT_FALSE(a.empty());
	EXPECT_EQ(a, b);
	auto lines = lines_of(a);
	ASSERT_EQ(lines.size(), 4u); // header + {2, 20771, 40487}
	auto j = nlohmann::json::parse(lines[1]);
	EXPECT_EQ(j["p"], 2);
	EXPECT_EQ(j["v"], 5);
	fs::remove_all(dir);
}

TEST(Cli, OrderProfileJson)
{
	CliResult r = run_cli("order --base 2 --mod 1194649"); // 1093^2
	ASSERT_EQ(r.exit_code, 0);
	auto j = nlohmann::json::parse(r.out);
	EXPECT_EQ(j["ord"], 364);
	EXPECT_EQ(j["phi"], 1093 * 1092);
	EXPECT_EQ(j["lambda"], 1093 * 1092);
	EXPECT_EQ(j["xi"], 1);
	EXPECT_EQ(j["index"], 1093 * 1092 / 364);
}

TEST(Cli, PredictJson)
{
	CliResult r = run_cli("predict --x 1e15 --c 1");
	ASSERT_EQ(r.exit_code, 0);
	auto j = nlohmann::json::parse(r.out);
	double d = std::stod(j["solved_exponent"].get<std::string>());
	EXPECT_NEAR(d, 40.77, 0.01);
	EXPECT_EQ(j["model"], "unit-density");
}

TEST(Cli, ConstantsOmegaSeriesRoundTrips)
{
	CliResult r = run_cli("constants --which omega-series --x 10000");
	ASSERT_EQ(r.exit_code, 0);
	auto j = nlohmann::json::parse(r.out);
	EXPECT_EQ(j["terms"], 1228); // odd primes up to 10^4
	double partial = std::stod(j["partial_sum"].get<std::string>());
	double tail = std::stod(j["tail_bound"].get<std::string>());
	double total = std::stod(j["total_bound"].get<std::string>());
	EXPECT_NEAR(partial + tail, total, 1e-12);
	ASSERT_TRUE(j["components"].is_array());
	EXPECT_EQ(j["components"][0]["label"], "main_sum");
}

TEST(Cli, ConstantsCorrectionJson)
{
	CliResult r = run_cli("constants --which correction --base 5 --trunc 200");
	ASSERT_EQ(r.exit_code, 0);
	auto j = nlohmann::json::parse(r.out);
	EXPECT_EQ(j["a"], 5);
	EXPECT_EQ(j["k"], 1);
	double plain = std::stod(j["plain"].get<std::string>());
	double corrected = std::stod(j["value"].get<std::string>());
	EXPECT_GT(corrected, plain);
}

TEST(Cli, PairsJsonl)
{
	CliResult r = run_cli("pairs --limit 5000");
	ASSERT_EQ(r.exit_code, 0);
	auto lines = lines_of(r.out);
	ASSERT_EQ(lines.size(), 2u);
	auto j0 = nlohmann::json::parse(lines[0]);
	auto j1 = nlohmann::json::parse(lines[1]);
	EXPECT_EQ(j0["p"], 2);
	EXPECT_EQ(j0["q"], 1093);
	EXPECT_EQ(j1["p"], 83);
	EXPECT_EQ(j1["q"], 4871);
}

TEST(Cli, AbelList)
{
	CliResult r = run_cli("abel --base 2 --limit 3600");
	ASSERT_EQ(r.exit_code, 0);
	auto lines = lines_of(r.out);
	std::vector<std::string> want{"1093", "3279", "3511"};
	EXPECT_EQ(lines, want);
}

TEST(Cli, VerifyOracleCsv)
{
	CliResult r = run_cli("verify-oracle --pmax 7");
	ASSERT_EQ(r.exit_code, 0);
	auto lines = lines_of(r.out);
	ASSERT_FALSE(lines.empty());
	EXPECT_EQ(lines[0], "p,v,indicator,direct");
	// rows: phi(9) + phi(25) + phi(49) = 6 + 20 + 42
	EXPECT_EQ(lines.size(), 1u + 6 + 20 + 42);
	for (std::size_t i = 1; i < lines.size(); ++i)
	{
		int p, v, ind, dir;
		ASSERT_EQ(std::sscanf(lines[i].c_str(), "%d,%d,%d,%d", &p, &v, &ind, &dir), 4) << lines[i];
		ASSERT_TRUE(ind == 0 || ind == 1);
		ASSERT_TRUE(dir == 0 || dir == 1);
	}
}

TEST(Cli, ProotValues)
{
	EXPECT_EQ(run_cli("proot --prime 40487").out, "5\n");
	EXPECT_EQ(run_cli("proot --prime 40487 --square").out, "10\n");
	EXPECT_EQ(run_cli("proot --prime 5 --square").out, "2\n");
}

TEST(Cli, ConfigFileWithFlagPrecedence)
{
	fs::path dir = fs::temp_directory_path() / "wf_cli_cfg";
	fs::create_directories(dir);
	std::string cfg = (dir / "cfg.ini").string();
	{
		std::ofstream out(cfg);
		out << "precision=3\n";
	}
	CliResult r = run_cli("--config " + cfg + " predict --x 1e15 --c 1");
	ASSERT_EQ(r.exit_code, 0);
	auto j = nlohmann::json::parse(r.out);
	EXPECT_EQ(j["solved_exponent"], "40.8"); // 3 significant digits from the config
	r = run_cli("--config " + cfg + " --precision 6 predict --x 1e15 --c 1");
	ASSERT_EQ(r.exit_code, 0);
	j = nlohmann::json::parse(r.out);
	EXPECT_EQ(j["solved_exponent"], "40.7742"); // flag wins over the config
	fs::remove_all(dir);
}

TEST(Cli, ExitCodes)
{
	EXPECT_EQ(run_cli("no-such-command").exit_code, 2);
	EXPECT_EQ(run_cli("quotient --base 2").exit_code, 2); // missing required flag
	EXPECT_EQ(run_cli("quotient --base 10 --prime 5").exit_code, 1); // domain error
	EXPECT_EQ(run_cli("order --base 2 --mod 4").exit_code, 1);       // gcd != 1
}
