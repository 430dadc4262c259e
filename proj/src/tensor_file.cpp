#include "seldkit/tensor_file.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace seldkit {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'F', '1'};
constexpr const char* kChecksumName = "manifest.checksum";

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("tensor file truncated");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

void put_floats(std::ostream& os, const float* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) put_u32(os, std::bit_cast<std::uint32_t>(data[i]));
}

void get_floats(std::istream& is, float* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) data[i] = std::bit_cast<float>(get_u32(is));
}

std::uint64_t fnv1a64(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t checksum_tensors(const TensorMap& tensors) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [name, t] : tensors) {
        if (name == kChecksumName) continue;
        h = fnv1a64(h, name.data(), name.size());
        for (std::size_t d : t.dims) {
            const auto d32 = static_cast<std::uint32_t>(d);
            h = fnv1a64(h, &d32, sizeof d32);
        }
        for (float v : t.data) {
            const auto bits = std::bit_cast<std::uint32_t>(v);
            h = fnv1a64(h, &bits, sizeof bits);
        }
    }
    return h;
}

}  // namespace

void write_tensor_file(const std::string& path, const TensorMap& tensors) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os.write(kMagic, 4);
    put_u32(os, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& [name, t] : tensors) {
        std::size_t n = 1;
        for (std::size_t d : t.dims) n *= d;
        if (n != t.data.size())
            throw std::invalid_argument("tensor '" + name + "': dims do not match payload size");
        put_u32(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(os, static_cast<std::uint32_t>(t.dims.size()));
        for (std::size_t d : t.dims) put_u32(os, static_cast<std::uint32_t>(d));
        put_floats(os, t.data.data(), t.data.size());
    }
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

TensorMap read_tensor_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("'" + path + "' is not an STF1 tensor file");
    const std::uint32_t count = get_u32(is);
    TensorMap tensors;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = get_u32(is);
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        if (!is) throw std::runtime_error("tensor file truncated");
        if (tensors.count(name)) throw std::runtime_error("duplicate tensor name '" + name + "'");
        Tensor t;
        const std::uint32_t rank = get_u32(is);
        std::size_t n = 1;
        for (std::uint32_t r = 0; r < rank; ++r) {
            t.dims.push_back(get_u32(is));
            n *= t.dims.back();
        }
        t.data.resize(n);
        get_floats(is, t.data.data(), n);
        tensors.emplace(std::move(name), std::move(t));
    }
    return tensors;
}

void write_weight_file(const std::string& path, const WeightSet& weights) {
    TensorMap out = weights;
    const std::uint64_t h = checksum_tensors(out);
    Tensor c;
    c.dims = {2};
    c.data = {std::bit_cast<float>(static_cast<std::uint32_t>(h)),
              std::bit_cast<float>(static_cast<std::uint32_t>(h >> 32))};
    out[kChecksumName] = std::move(c);
    write_tensor_file(path, out);
}

WeightSet read_weight_file(const std::string& path) {
    TensorMap tensors = read_tensor_file(path);
    auto it = tensors.find(kChecksumName);
    if (it != tensors.end()) {
        if (it->second.data.size() != 2)
            throw std::runtime_error("malformed manifest checksum in '" + path + "'");
        const std::uint64_t stored =
            std::uint64_t(std::bit_cast<std::uint32_t>(it->second.data[0])) |
            std::uint64_t(std::bit_cast<std::uint32_t>(it->second.data[1])) << 32;
        tensors.erase(it);
        if (stored != checksum_tensors(tensors))
            throw std::runtime_error("weight file checksum mismatch in '" + path + "'");
    }
    return tensors;
}

void write_feature_file(const std::string& path, const FeatureTensor& features) {
    Tensor t;
    t.dims = {features.frames, kNumMels, kNumFeatureMaps};
    t.data = features.data;
    TensorMap m;
    m.emplace("features", std::move(t));
    write_tensor_file(path, m);
}

FeatureTensor read_feature_file(const std::string& path) {
    TensorMap m = read_tensor_file(path);
    auto it = m.find("features");
    if (it == m.end()) throw std::runtime_error("no 'features' tensor in '" + path + "'");
    const Tensor& t = it->second;
    if (t.dims.size() != 3 || t.dims[1] != kNumMels || t.dims[2] != kNumFeatureMaps)
        throw std::runtime_error("'" + path + "': features tensor must be frames x 64 x 7");
    FeatureTensor out;
    out.frames = t.dims[0];
    out.data = t.data;
    return out;
}

}  // namespace seldkit
