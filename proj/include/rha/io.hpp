#pragma once

#include "rha/sampler.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rha {

// .sym16: "# rha seed=<u64> schedule=<spec> n=<len>\n" then little-endian
// uint16 payload. Text form: same header, one decimal symbol per line.
void write_sym16(const std::string& path, const SymbolSequence& seq);
SymbolSequence read_sym16(const std::string& path);
void write_sym_text(const std::string& path, const SymbolSequence& seq);
SymbolSequence read_sym_text(const std::string& path);
// dispatches on extension: .sym16 binary, anything else text
SymbolSequence read_sequence(const std::string& path);

// shortest representation that round-trips, stable across runs ("%.12g")
std::string format_g12(double v);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::string buf_;
    size_t width_;
    bool closed_ = false;

  public:
    void close(); // flushes; destructor calls it too
    ~CsvWriter();
};

std::string sha256_hex(const void* data, size_t len);
std::string sha256_file(const std::string& path);

// MANIFEST.txt: sorted meta lines, then "file <sha256> <name>" lines.
// Contains no timestamps so reruns are byte-identical.
std::string write_manifest(const std::string& dir,
                           const std::vector<std::pair<std::string, std::string>>& meta,
                           const std::vector<std::string>& files);

void ensure_dir(const std::string& dir);

} // namespace rha
