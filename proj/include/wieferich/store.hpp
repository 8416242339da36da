#pragma once

// Persistence for scan results and resumable checkpoints. Hits go to an
// append-only JSONL file (one object per line, '#' header comment); the
// checkpoint is a single small JSON document written via temp-file rename.

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "wieferich/search.hpp"

namespace wieferich {

inline constexpr const char* store_version_tag = "1";

struct Checkpoint
{
	std::string fingerprint;
	u64 last_complete = 0; // highest candidate bound fully scanned
	u64 hits = 0;
	std::string written_at; // ISO 8601 UTC
};

inline std::string job_fingerprint(const ScanJob& job)
{
	std::ostringstream os;
	os << "v=" << job.base << ";lo=" << job.range.lo << ";hi=" << job.range.hi
	   << ";k=" << job.power << ";chunk=" << job.chunk << ";ver=" << store_version_tag;
	return os.str();
}

inline std::string iso8601_now()
{
	std::time_t t = std::time(nullptr);
	char buf[32];
	std::tm tm{};
	gmtime_r(&t, &tm);
	std::strftime(buf, sizeof buf, "%FT%TZ", &tm);
	return buf;
}

inline std::string hit_json_line(const WieferichHit& h)
{
	nlohmann::ordered_json j;
	j["v"] = h.base;
	j["p"] = h.prime;
	j["k"] = h.power;
	j["q"] = h.quotient;
	j["balanced"] = h.balanced;
	return j.dump();
}

inline WieferichHit hit_from_json_line(const std::string& line)
{
	auto j = nlohmann::json::parse(line);
	WieferichHit h;
	h.base = j.at("v").get<u64>();
	h.prime = j.at("p").get<u64>();
	h.power = j.at("k").get<int>();
	h.quotient = j.at("q").get<u64>();
	h.balanced = j.at("balanced").get<bool>();
	return h;
}

// Line-buffered append-only hit log; fsync happens on flush(), which the
// scan driver couples to checkpoint writes.
class HitLog
{
public:
	HitLog(const std::string& path, bool fresh, const std::string& header) : path_(path)
	{
		fp_ = std::fopen(path.c_str(), fresh ? "w" : "a");
		if (!fp_)
			throw std::runtime_error("cannot open hit log: " + path);
		if (fresh && !header.empty())
			std::fprintf(fp_, "# %s\n", header.c_str());
	}
	HitLog(const HitLog&) = delete;
	HitLog& operator=(const HitLog&) = delete;
	~HitLog()
	{
		if (fp_)
			std::fclose(fp_);
	}

	void append(const WieferichHit& h)
	{
		std::string line = hit_json_line(h);
		if (std::fprintf(fp_, "%s\n", line.c_str()) < 0)
			throw std::runtime_error("write failed on hit log: " + path_);
	}

	void flush()
	{
		if (std::fflush(fp_) != 0)
			throw std::runtime_error("flush failed on hit log: " + path_);
		::fsync(fileno(fp_));
	}

private:
	std::string path_;
	std::FILE* fp_ = nullptr;
};

inline std::vector<WieferichHit> read_hit_log(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw std::runtime_error("cannot read hit log: " + path);
	std::vector<WieferichHit> hits;
	std::string line;
	while (std::getline(in, line))
	{
		if (line.empty() || line[0] == '#')
			continue;
		hits.push_back(hit_from_json_line(line));
	}
	return hits;
}

inline void write_checkpoint(const std::string& path, const Checkpoint& cp)
{
	nlohmann::ordered_json j;
	j["fingerprint"] = cp.fingerprint;
	j["last_complete"] = cp.last_complete;
	j["hits"] = cp.hits;
	j["ts"] = cp.written_at.empty() ? iso8601_now() : cp.written_at;
	std::string tmp = path + ".tmp";
	{
		std::FILE* fp = std::fopen(tmp.c_str(), "w");
		if (!fp)
			throw std::runtime_error("cannot write checkpoint: " + tmp);
		std::string body = j.dump();
		std::fwrite(body.data(), 1, body.size(), fp);
		std::fputc('\n', fp);
		std::fflush(fp);
		::fsync(fileno(fp));
		std::fclose(fp);
	}
	std::filesystem::rename(tmp, path);
}

inline std::optional<Checkpoint> read_checkpoint(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		return std::nullopt;
	nlohmann::json j;
	in >> j;
	Checkpoint cp;
	cp.fingerprint = j.at("fingerprint").get<std::string>();
	cp.last_complete = j.at("last_complete").get<u64>();
	cp.hits = j.at("hits").get<u64>();
	cp.written_at = j.at("ts").get<std::string>();
	return cp;
}

// Raise the job's start to the checkpointed bound. A checkpoint from a
// different job must not silently alter results, so the fingerprint has to
// match exactly.
inline ScanJob resume(const ScanJob& job, const Checkpoint& cp)
{
	if (cp.fingerprint != job_fingerprint(job))
		throw std::domain_error("resume: checkpoint fingerprint mismatch (fresh start required)");
	ScanJob adjusted = job;
	adjusted.range.lo = std::max(job.range.lo, cp.last_complete);
	return adjusted;
}

struct FileScanResult
{
	ScanResult scan;
	u64 appended = 0;       // hits written by this run
	bool resumed = false;
};

// Scan with persistence: hits stream to a JSONL log, the checkpoint
// advances with the completed chunk prefix, and an existing matching
// checkpoint resumes the job. Single-writer: one call owns both files.
inline FileScanResult scan_to_files(const ScanJob& job, const std::string& hits_path,
                                    const std::string& ckpt_path,
                                    const ProgressSink& keep_going = {})
{
	job.validate();
	std::string fp = job_fingerprint(job);
	FileScanResult out;
	ScanJob effective = job;
	bool fresh = true;
	if (auto cp = read_checkpoint(ckpt_path))
	{
		effective = resume(job, *cp); // throws on mismatch
		fresh = false;
		out.resumed = true;
		if (effective.range.lo >= effective.range.hi)
		{
			// nothing left to scan; hits live in the log already
			out.scan.completed = true;
			out.scan.completed_hi = cp->last_complete;
			return out;
		}
	}
	HitLog log(hits_path, fresh, fp);
	u64 written = out.resumed ? read_checkpoint(ckpt_path)->hits : 0;
	auto on_hit = [&](const WieferichHit& h) {
		log.append(h);
		++written;
		++out.appended;
	};
	auto on_progress = [&](u64 completed_hi) {
		log.flush();
		Checkpoint cp;
		cp.fingerprint = fp;
		cp.last_complete = completed_hi;
		cp.hits = written;
		write_checkpoint(ckpt_path, cp);
		return keep_going ? keep_going(completed_hi) : true;
	};
	out.scan = scan(effective, on_hit, on_progress);
	return out;
}

} // namespace wieferich
