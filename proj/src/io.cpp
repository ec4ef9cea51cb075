#include "rha/io.hpp"

#include "rha/config.hpp"
#include "rha/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rha {

namespace {

std::string header_line(const SymbolSequence& seq) {
    return "# rha seed=" + std::to_string(seq.seed) + " schedule=" +
           seq.schedule_spec + " n=" + std::to_string(seq.symbols.size());
}

// fills seed/schedule/alphabet and returns declared length
size_t parse_header(const std::string& line, SymbolSequence& seq) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok != "#") throw config_error("missing '# rha' header");
    ss >> tok;
    if (tok != "rha") throw config_error("missing '# rha' header");
    size_t declared = SIZE_MAX;
    while (ss >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos)
            throw config_error("bad header token '" + tok + "'");
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "seed")
            seq.seed = parse_u64_token(val);
        else if (key == "schedule")
            seq.schedule_spec = val;
        else if (key == "n")
            declared = parse_u64_token(val);
        else
            throw config_error("unknown header key '" + key + "'");
    }
    if (declared == SIZE_MAX || seq.schedule_spec.empty())
        throw config_error("header must carry seed, schedule and n");
    seq.alphabet_size = parse_schedule(seq.schedule_spec).alphabet();
    return declared;
}

} // namespace

void write_sym16(const std::string& path, const SymbolSequence& seq) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << header_line(seq) << '\n';
    std::vector<unsigned char> bytes(seq.symbols.size() * 2);
    for (size_t i = 0; i < seq.symbols.size(); ++i) {
        bytes[2 * i] = static_cast<unsigned char>(seq.symbols[i] & 0xff);
        bytes[2 * i + 1] = static_cast<unsigned char>(seq.symbols[i] >> 8);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw config_error("short write to '" + path + "'");
}

SymbolSequence read_sym16(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty file '" + path + "'");
    SymbolSequence seq;
    size_t n = parse_header(line, seq);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() != 2 * n)
        throw config_error("payload of '" + path + "' is " +
                           std::to_string(bytes.size()) + " bytes, expected " +
                           std::to_string(2 * n));
    seq.symbols.resize(n);
    for (size_t i = 0; i < n; ++i)
        seq.symbols[i] = static_cast<symbol>(bytes[2 * i] |
                                             (static_cast<unsigned>(bytes[2 * i + 1]) << 8));
    return seq;
}

void write_sym_text(const std::string& path, const SymbolSequence& seq) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << header_line(seq) << '\n';
    for (symbol s : seq.symbols) out << s << '\n';
    if (!out) throw config_error("short write to '" + path + "'");
}

SymbolSequence read_sym_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty file '" + path + "'");
    SymbolSequence seq;
    size_t n = parse_header(line, seq);
    seq.symbols.reserve(n);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        uint64_t v = parse_u64_token(line);
        if (v > 65535) throw config_error("symbol out of 16-bit range");
        seq.symbols.push_back(static_cast<symbol>(v));
    }
    if (seq.symbols.size() != n)
        throw config_error("text payload length mismatch in '" + path + "'");
    return seq;
}

SymbolSequence read_sequence(const std::string& path) {
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".sym16")
        return read_sym16(path);
    return read_sym_text(path);
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), width_(header.size()) {
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
        throw invariant_error("csv row width " + std::to_string(cells.size()) +
                              " != " + std::to_string(width_));
    for (size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find_first_of(",\n\"") != std::string::npos)
            throw invariant_error("csv cell needs quoting, not supported: " + cells[i]);
        buf_ += cells[i];
        buf_ += (i + 1 == cells.size()) ? '\n' : ',';
    }
}

void CsvWriter::close() {
    if (closed_) return;
    closed_ = true;
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path_ + "' for writing");
    out << buf_;
    if (!out) throw config_error("short write to '" + path_ + "'");
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
        // destructor must not throw; an explicit close() reports errors
    }
}

std::string sha256_hex(const void* data, size_t len) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int mdlen = 0;
    if (!EVP_Digest(data, len, md, &mdlen, EVP_sha256(), nullptr))
        throw invariant_error("sha256 failure");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(mdlen * 2);
    for (unsigned int i = 0; i < mdlen; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    return sha256_hex(bytes.data(), bytes.size());
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw config_error("cannot create directory '" + dir + "': " + ec.message());
}

std::string write_manifest(
    const std::string& dir,
    const std::vector<std::pair<std::string, std::string>>& meta,
    const std::vector<std::string>& files) {
    std::vector<std::pair<std::string, std::string>> m = meta;
    std::sort(m.begin(), m.end());
    std::vector<std::string> f = files;
    std::sort(f.begin(), f.end());
    std::string text = "rha-manifest v1\n";
    for (const auto& [k, v] : m) text += k + "=" + v + "\n";
    for (const std::string& name : f)
        text += "file " + sha256_file(dir + "/" + name) + " " + name + "\n";
    std::string path = dir + "/MANIFEST.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw config_error("short write to '" + path + "'");
    return path;
}

} // namespace rha
