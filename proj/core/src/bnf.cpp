#include "vckit/bnf.hpp"

#include "vckit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace vckit {

namespace {

void write_u32(std::ostream &out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char *>(b), 4);
}

uint32_t read_u32(std::istream &in, const std::string &path) {
    unsigned char b[4];
    in.read(reinterpret_cast<char *>(b), 4);
    if (!in)
        throw FormatError("truncated bnf file: " + path);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

} // namespace

void write_bnf(const std::string &path, const BnfMatrix &bnf) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out.write("BNF1", 4);
    write_u32(out, static_cast<uint32_t>(bnf.values.rows));
    write_u32(out, static_cast<uint32_t>(bnf.values.cols));
    write_u32(out, bnf.source_hop_ms);
    for (double v : bnf.values.data) {
        const float f = static_cast<float>(v);
        uint32_t u;
        std::memcpy(&u, &f, 4);
        write_u32(out, u);
    }
    if (!out)
        throw IoError("write failed: " + path);
}

BnfMatrix read_bnf(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open bnf file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "BNF1", 4) != 0)
        throw FormatError("bad BNF1 magic: " + path);
    const uint32_t T = read_u32(in, path);
    const uint32_t D = read_u32(in, path);
    const uint32_t hop = read_u32(in, path);
    const uint64_t total = static_cast<uint64_t>(T) * D;
    if (T == 0 || D == 0 || total > (1ull << 31))
        throw FormatError("implausible bnf dimensions " + std::to_string(T) + "x" +
                          std::to_string(D) + ": " + path);

    BnfMatrix bnf;
    bnf.source_hop_ms = hop;
    bnf.values = FeatureMatrix(static_cast<int>(T), static_cast<int>(D));
    for (uint64_t i = 0; i < total; ++i) {
        const uint32_t u = read_u32(in, path);
        float f;
        std::memcpy(&f, &u, 4);
        bnf.values.data[i] = static_cast<double>(f);
    }
    // header T*D must equal the payload length exactly
    char extra;
    if (in.read(&extra, 1))
        throw FormatError("bnf payload longer than header claims: " + path);
    return bnf;
}

void write_bnf_csv(const std::string &path, const BnfMatrix &bnf) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    char buf[48];
    for (int t = 0; t < bnf.values.rows; ++t) {
        for (int d = 0; d < bnf.values.cols; ++d) {
            std::snprintf(buf, sizeof(buf), "%.9g", bnf.values.at(t, d));
            out << (d ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out)
        throw IoError("write failed: " + path);
}

BnfMatrix read_bnf_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open bnf csv: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("ragged bnf csv row: " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw FormatError("empty bnf csv: " + path);
    BnfMatrix bnf;
    bnf.values = FeatureMatrix(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t t = 0; t < rows.size(); ++t)
        for (size_t d = 0; d < rows[t].size(); ++d)
            bnf.values.at(static_cast<int>(t), static_cast<int>(d)) = rows[t][d];
    return bnf;
}

FeatureMatrix align_bnf(const BnfMatrix &bnf, int target_t) {
    const FeatureMatrix &src = bnf.values;
    if (src.rows < 1)
        throw ParamError("align_bnf: need at least one source frame");
    if (target_t < 1)
        throw ParamError("align_bnf: target frame count must be positive");
    if (src.rows == target_t)
        return src;

    FeatureMatrix out(target_t, src.cols);
    for (int t = 0; t < target_t; ++t) {
        // endpoints map to endpoints
        const double pos = target_t == 1
                               ? 0.0
                               : static_cast<double>(t) * (src.rows - 1) / (target_t - 1);
        const int lo = static_cast<int>(pos);
        const int hi = std::min(lo + 1, src.rows - 1);
        const double frac = pos - lo;
        for (int d = 0; d < src.cols; ++d)
            out.at(t, d) = (1.0 - frac) * src.at(lo, d) + frac * src.at(hi, d);
    }
    return out;
}

} // namespace vckit
