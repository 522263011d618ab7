#pragma once

#include <filesystem>
#include <string>

#include "zomirror/optimizer.hpp"

namespace zomirror {

inline constexpr const char* kTraceCsvHeader = "iter,oracle_calls,F,stationarity_sq,eta,wallclock_ms";

// CSV rendering of a run trace; numbers are printed with %.17g so replays of
// the same configuration compare byte-for-byte.
std::string trace_to_csv(const RunTrace& trace);

// write-temp-then-rename so concurrent workers never expose partial files
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// FNV-1a over a canonical string rendering; used as the config hash
std::string fnv1a_hex(const std::string& payload);

}  // namespace zomirror
