#pragma once
// Binary tensor container ("STF1"): magic, u32 tensor count, then per tensor
// u32 name length + UTF-8 name, u32 rank, u32 dims, float32 payload.
// All integers and floats little-endian, data row-major.

#include <map>
#include <string>

#include "seldkit/model.hpp"

namespace seldkit {

using TensorMap = std::map<std::string, Tensor>;

void write_tensor_file(const std::string& path, const TensorMap& tensors);
TensorMap read_tensor_file(const std::string& path);

// Weight files carry a "manifest.checksum" tensor holding the FNV-1a 64
// checksum of all other tensors (names, dims, payload bytes), split into two
// float-bit-pattern halves. Readers verify it when present.
void write_weight_file(const std::string& path, const WeightSet& weights);
WeightSet read_weight_file(const std::string& path);

void write_feature_file(const std::string& path, const FeatureTensor& features);
FeatureTensor read_feature_file(const std::string& path);

}  // namespace seldkit
