#include "alignkit/checkpoint.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "alignkit/errors.hpp"

namespace alignkit {

namespace {

constexpr char kMagic[4] = {'M', 'T', 'A', 'C'};
constexpr std::uint32_t kVersion = 1;

void write_block(std::ofstream& out, const float* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * sizeof(float)));
}

void read_block(std::ifstream& in, float* data, std::size_t count,
                const std::filesystem::path& path, const char* what) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(float)));
    if (!in) throw DataError("checkpoint " + path.string() + ": truncated reading " + what);
    for (std::size_t i = 0; i < count; ++i)
        if (!std::isfinite(data[i]))
            throw DataError("checkpoint " + path.string() + ": non-finite value in " + what);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ProjectionHeads& heads) {
    const auto& t = heads.text;
    const auto& v = heads.visual;
    if (t.d_in() != v.d_in() || t.d_h() != v.d_h() || t.d_out() != v.d_out())
        throw DataError("checkpoint " + path.string() + ": head shapes disagree");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("checkpoint " + path.string() + ": cannot open for writing");
    out.write(kMagic, 4);
    const std::uint32_t version = kVersion;
    const std::uint32_t dims[3] = {static_cast<std::uint32_t>(t.d_in()),
                                   static_cast<std::uint32_t>(t.d_h()),
                                   static_cast<std::uint32_t>(t.d_out())};
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(dims), 12);
    for (const auto* head : {&t, &v}) {
        write_block(out, head->w1.data.data(), head->w1.data.size());
        write_block(out, head->b1.data(), head->b1.size());
        write_block(out, head->w2.data.data(), head->w2.data.size());
        write_block(out, head->b2.data(), head->b2.size());
    }
    out.write(reinterpret_cast<const char*>(&heads.train_seed), 8);
    if (!out) throw DataError("checkpoint " + path.string() + ": write failed");
}

ProjectionHeads load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("checkpoint " + path.string() + ": missing or unreadable");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("checkpoint " + path.string() + ": bad magic bytes");
    std::uint32_t version = 0, dims[3] = {0, 0, 0};
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(dims), 12);
    if (!in) throw DataError("checkpoint " + path.string() + ": truncated header");
    if (version != kVersion)
        throw DataError("checkpoint " + path.string() + ": unsupported version " +
                        std::to_string(version));
    if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0)
        throw DataError("checkpoint " + path.string() + ": zero dimension in header");

    ProjectionHeads heads;
    for (auto* head : {&heads.text, &heads.visual}) {
        head->w1.resize(dims[0], dims[1]);
        head->b1.assign(dims[1], 0.0f);
        head->w2.resize(dims[1], dims[2]);
        head->b2.assign(dims[2], 0.0f);
        read_block(in, head->w1.data.data(), head->w1.data.size(), path, "w1");
        read_block(in, head->b1.data(), head->b1.size(), path, "b1");
        read_block(in, head->w2.data.data(), head->w2.data.size(), path, "w2");
        read_block(in, head->b2.data(), head->b2.size(), path, "b2");
    }
    in.read(reinterpret_cast<char*>(&heads.train_seed), 8);
    if (!in) throw DataError("checkpoint " + path.string() + ": truncated seed footer");
    return heads;
}

std::string checkpoint_id(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("checkpoint " + path.string() + ": missing or unreadable");
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

}  // namespace alignkit
