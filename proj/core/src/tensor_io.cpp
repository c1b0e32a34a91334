#include "vckit/tensor_io.hpp"

#include "vckit/errors.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace vckit {

const Tensor *NamedTensors::find(const std::string &name) const {
    for (const auto &[k, v] : items)
        if (k == name)
            return &v;
    return nullptr;
}

Tensor &NamedTensors::require(const std::string &name) {
    for (auto &[k, v] : items)
        if (k == name)
            return v;
    throw ParamError("missing tensor: " + name);
}

const Tensor &NamedTensors::require(const std::string &name) const {
    const Tensor *t = find(name);
    if (!t)
        throw ParamError("missing tensor: " + name);
    return *t;
}

void NamedTensors::put(const std::string &name, Tensor t) {
    for (auto &[k, v] : items) {
        if (k == name) {
            v = std::move(t);
            return;
        }
    }
    items.emplace_back(name, std::move(t));
}

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
        throw FormatError("truncated tensor file: " + path);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

} // namespace

void save_tensors(const std::string &path, const NamedTensors &tensors) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out.write("TSR1", 4);
    write_u32(out, static_cast<uint32_t>(tensors.items.size()));
    for (const auto &[name, t] : tensors.items) {
        if (name.size() > 255)
            throw ParamError("tensor name too long: " + name);
        const unsigned char len = static_cast<unsigned char>(name.size());
        out.write(reinterpret_cast<const char *>(&len), 1);
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_u32(out, static_cast<uint32_t>(t.shape().size()));
        for (int d : t.shape())
            write_u32(out, static_cast<uint32_t>(d));
        for (double v : t.values()) {
            const float f = static_cast<float>(v);
            uint32_t u;
            std::memcpy(&u, &f, 4);
            write_u32(out, u);
        }
    }
    if (!out)
        throw IoError("write failed: " + path);
}

NamedTensors load_tensors(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open tensor file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "TSR1", 4) != 0)
        throw FormatError("bad TSR1 magic: " + path);
    const uint32_t count = read_u32(in, path);
    NamedTensors result;
    for (uint32_t i = 0; i < count; ++i) {
        unsigned char len;
        in.read(reinterpret_cast<char *>(&len), 1);
        if (!in)
            throw FormatError("truncated tensor file: " + path);
        std::string name(len, '\0');
        in.read(name.data(), len);
        const uint32_t rank = read_u32(in, path);
        if (rank > 8)
            throw FormatError("implausible tensor rank in " + path);
        std::vector<int> shape(rank);
        uint64_t total = 1;
        for (uint32_t d = 0; d < rank; ++d) {
            shape[d] = static_cast<int>(read_u32(in, path));
            total *= static_cast<uint64_t>(shape[d]);
            if (total > (1ull << 32))
                throw FormatError("tensor too large in " + path);
        }
        std::vector<double> data(total);
        for (uint64_t e = 0; e < total; ++e) {
            const uint32_t u = read_u32(in, path);
            float f;
            std::memcpy(&f, &u, 4);
            data[e] = static_cast<double>(f);
        }
        result.put(name, Tensor::from_data(std::move(shape), std::move(data)));
    }
    return result;
}

} // namespace vckit
