#pragma once

#include "vckit/tensor.hpp"

#include <string>
#include <utility>
#include <vector>

namespace vckit {

// Ordered name -> tensor map, the unit of weight-file storage.
struct NamedTensors {
    std::vector<std::pair<std::string, Tensor>> items;

    const Tensor *find(const std::string &name) const;
    Tensor &require(const std::string &name);
    const Tensor &require(const std::string &name) const;
    void put(const std::string &name, Tensor t);
    bool empty() const { return items.empty(); }
};

// TSR1 binary: magic "TSR1", u32 tensor count, then per tensor
// u8 name length, name bytes, u32 rank, u32 dims..., f32 payload
// (all little-endian). Values are stored at f32 precision.
void save_tensors(const std::string &path, const NamedTensors &tensors);
NamedTensors load_tensors(const std::string &path);

} // namespace vckit
