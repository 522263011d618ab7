#include "zomirror/trace_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace zomirror {

std::string trace_to_csv(const RunTrace& trace) {
    std::string out = kTraceCsvHeader;
    out += '\n';
    char line[256];
    for (const IterRecord& r : trace.records) {
        std::snprintf(line, sizeof(line), "%d,%lld,%.17g,%.17g,%.17g,%.3f\n", r.iter, r.oracle_calls,
                      r.objective, r.stationarity_sq, r.eta, r.wallclock_ms);
        out += line;
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string fnv1a_hex(const std::string& payload) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

}  // namespace zomirror
