#include "alignkit/feature_file.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "alignkit/errors.hpp"

namespace alignkit {

namespace {

constexpr char kMagic[4] = {'A', 'L', 'N', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kDtypeFloat32 = 0;

template <typename T>
void put(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::ifstream& in, const std::filesystem::path& path, const char* what) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw DataError("feature file " + path.string() + ": truncated reading " + what);
    return value;
}

}  // namespace

void write_feature_file(const std::filesystem::path& path, const Mat<float>& features,
                        const std::vector<double>& timestamps_s) {
    if (features.rows != timestamps_s.size())
        throw DataError("feature file " + path.string() + ": " + std::to_string(features.rows) +
                        " rows but " + std::to_string(timestamps_s.size()) + " timestamps");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("feature file " + path.string() + ": cannot open for writing");
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint8_t>(out, kDtypeFloat32);
    put<std::uint64_t>(out, features.rows);
    put<std::uint64_t>(out, features.cols);
    out.write(reinterpret_cast<const char*>(features.data.data()),
              static_cast<std::streamsize>(features.data.size() * sizeof(float)));
    for (double t : timestamps_s)
        put<std::uint64_t>(out, static_cast<std::uint64_t>(std::llround(t * 1000.0)));
    if (!out) throw DataError("feature file " + path.string() + ": write failed");
}

FeatureFileData read_feature_file(const std::filesystem::path& path, bool require_increasing) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("feature file " + path.string() + ": missing or unreadable");

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("feature file " + path.string() + ": bad magic bytes");
    const auto version = take<std::uint32_t>(in, path, "version");
    if (version != kVersion)
        throw DataError("feature file " + path.string() + ": unsupported version " +
                        std::to_string(version));
    const auto dtype = take<std::uint8_t>(in, path, "dtype");
    if (dtype != kDtypeFloat32)
        throw DataError("feature file " + path.string() + ": unsupported dtype code " +
                        std::to_string(dtype));
    const auto n = take<std::uint64_t>(in, path, "row count");
    const auto d = take<std::uint64_t>(in, path, "dimension");
    if (n == 0 || d == 0)
        throw DataError("feature file " + path.string() + ": empty feature matrix");
    if (n > (1ull << 32) || d > (1ull << 24))
        throw DataError("feature file " + path.string() + ": implausible dimensions");

    FeatureFileData data;
    data.features.resize(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
    in.read(reinterpret_cast<char*>(data.features.data.data()),
            static_cast<std::streamsize>(n * d * sizeof(float)));
    if (!in) throw DataError("feature file " + path.string() + ": truncated feature data");
    for (std::size_t i = 0; i < data.features.data.size(); ++i)
        if (!std::isfinite(data.features.data[i]))
            throw DataError("feature file " + path.string() + ": non-finite value in row " +
                            std::to_string(i / d));

    data.timestamps.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        data.timestamps[i] =
            static_cast<double>(take<std::uint64_t>(in, path, "timestamps")) / 1000.0;
    if (require_increasing)
        for (std::size_t i = 1; i < n; ++i)
            if (!(data.timestamps[i] > data.timestamps[i - 1]))
                throw DataError("feature file " + path.string() +
                                ": timestamps not strictly increasing at index " +
                                std::to_string(i));
    return data;
}

}  // namespace alignkit
