#ifndef FISRG_NIFTI_HPP
#define FISRG_NIFTI_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <zlib.h>

#include "fisrg/errors.hpp"
#include "fisrg/image.hpp"

namespace fisrg {

/// 3D scalar volume loaded from a NIfTI-1 file. Voxels are already rescaled
/// by the header's slope/intercept pair. No reorientation is performed;
/// axis_order records the identity permutation for downstream bookkeeping.
struct Volume {
    std::array<int, 3> dims{0, 0, 0};  // nx, ny, nz
    std::vector<double> data;          // x fastest, then y, then z
    double slope = 1.0;
    double intercept = 0.0;
    std::array<int, 3> axis_order{0, 1, 2};

    double at(int i, int j, int k) const {
        return data[static_cast<std::size_t>(k) * dims[0] * dims[1] +
                    static_cast<std::size_t>(j) * dims[0] + i];
    }
};

namespace detail {

// Explicit little-endian decoding. `swap` is set when the file was written
// big-endian (detected via sizeof_hdr), so parsed fields are identical on
// every platform.
inline std::uint16_t le_u16(const unsigned char* p, bool swap) {
    std::uint16_t v = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    return swap ? static_cast<std::uint16_t>((v >> 8) | (v << 8)) : v;
}
inline std::int16_t le_i16(const unsigned char* p, bool swap) {
    return static_cast<std::int16_t>(le_u16(p, swap));
}
inline std::uint32_t le_u32(const unsigned char* p, bool swap) {
    std::uint32_t v = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                      (static_cast<std::uint32_t>(p[2]) << 16) |
                      (static_cast<std::uint32_t>(p[3]) << 24);
    if (swap)
        v = (v >> 24) | ((v >> 8) & 0xFF00u) | ((v << 8) & 0xFF0000u) | (v << 24);
    return v;
}
inline std::int32_t le_i32(const unsigned char* p, bool swap) {
    return static_cast<std::int32_t>(le_u32(p, swap));
}
inline float le_f32(const unsigned char* p, bool swap) {
    std::uint32_t v = le_u32(p, swap);
    float f;
    std::memcpy(&f, &v, sizeof f);
    return f;
}

struct GzFile {
    gzFile f = nullptr;
    explicit GzFile(const std::filesystem::path& path) {
        f = gzopen(path.string().c_str(), "rb");
    }
    ~GzFile() {
        if (f) gzclose(f);
    }
    GzFile(const GzFile&) = delete;
    GzFile& operator=(const GzFile&) = delete;
};

} // namespace detail

// NIfTI-1 datatype codes supported by load_volume.
inline constexpr std::int16_t kNiftiUint8 = 2;
inline constexpr std::int16_t kNiftiInt16 = 4;
inline constexpr std::int16_t kNiftiFloat32 = 16;
inline constexpr std::int16_t kNiftiUint16 = 512;

/// Load a single-file NIfTI-1 volume (.nii or .nii.gz; gzip is detected from
/// the stream, not the extension). Supports uint8, int16, uint16 and float32
/// voxels; values are rescaled as raw * scl_slope + scl_inter (a zero slope
/// means "unscaled" per the NIfTI convention). Two-file .hdr/.img pairs and
/// NIfTI-2 are rejected.
inline Volume load_volume(const std::filesystem::path& path) {
    detail::GzFile gz(path);
    if (!gz.f) throw FileError("cannot open " + path.string());

    unsigned char hdr[348];
    if (gzread(gz.f, hdr, 348) != 348)
        throw MalformedHeader(path.string() + ": file shorter than a NIfTI-1 header");

    bool swap = false;
    std::int32_t sizeof_hdr = detail::le_i32(hdr, false);
    if (sizeof_hdr != 348) {
        if (detail::le_i32(hdr, true) == 348)
            swap = true;
        else
            throw MalformedHeader(path.string() + ": sizeof_hdr is not 348");
    }

    const char* magic = reinterpret_cast<const char*>(hdr + 344);
    if (std::strncmp(magic, "ni1", 3) == 0)
        throw MalformedHeader(path.string() + ": two-file NIfTI (.hdr/.img) is not supported");
    if (std::strncmp(magic, "n+1", 3) != 0 || magic[3] != '\0')
        throw MalformedHeader(path.string() + ": bad magic");

    std::int16_t dim[8];
    for (int i = 0; i < 8; ++i) dim[i] = detail::le_i16(hdr + 40 + 2 * i, swap);
    if (dim[0] < 1 || dim[0] > 7)
        throw MalformedHeader(path.string() + ": dim[0] out of range");
    for (int i = 4; i <= dim[0]; ++i)
        if (dim[i] > 1)
            throw DimensionMismatch(path.string() + ": volumes with a 4th dimension > 1 are not supported");

    Volume v;
    v.dims = {dim[1], dim[0] >= 2 ? static_cast<int>(dim[2]) : 1,
              dim[0] >= 3 ? static_cast<int>(dim[3]) : 1};
    for (int d = 0; d < 3; ++d)
        if (v.dims[d] < 1) throw MalformedHeader(path.string() + ": non-positive dimension");

    const std::int16_t datatype = detail::le_i16(hdr + 70, swap);
    const float vox_offset = detail::le_f32(hdr + 108, swap);
    const float scl_slope = detail::le_f32(hdr + 112, swap);
    const float scl_inter = detail::le_f32(hdr + 116, swap);
    v.slope = scl_slope == 0.0f ? 1.0 : static_cast<double>(scl_slope);
    v.intercept = scl_slope == 0.0f ? 0.0 : static_cast<double>(scl_inter);

    int elem_size = 0;
    switch (datatype) {
        case kNiftiUint8: elem_size = 1; break;
        case kNiftiInt16: elem_size = 2; break;
        case kNiftiUint16: elem_size = 2; break;
        case kNiftiFloat32: elem_size = 4; break;
        default:
            throw UnsupportedDatatype(path.string() + ": datatype code " + std::to_string(datatype));
    }

    const long offset = static_cast<long>(vox_offset);
    if (offset < 348) throw MalformedHeader(path.string() + ": vox_offset before end of header");
    for (long skip = offset - 348; skip > 0;) {
        unsigned char sink[512];
        const int chunk = static_cast<int>(skip > 512 ? 512 : skip);
        if (gzread(gz.f, sink, chunk) != chunk)
            throw DimensionMismatch(path.string() + ": payload missing at vox_offset");
        skip -= chunk;
    }

    const std::size_t nvox = static_cast<std::size_t>(v.dims[0]) * v.dims[1] * v.dims[2];
    std::vector<unsigned char> raw(nvox * elem_size);
    std::size_t got = 0;
    while (got < raw.size()) {
        const std::size_t want = std::min<std::size_t>(raw.size() - got, 1u << 28);
        const int r = gzread(gz.f, raw.data() + got, static_cast<unsigned>(want));
        if (r <= 0) break;
        got += static_cast<std::size_t>(r);
    }
    if (got != raw.size())
        throw DimensionMismatch(path.string() + ": payload has " + std::to_string(got) +
                                " bytes, header declares " + std::to_string(raw.size()));

    v.data.resize(nvox);
    const unsigned char* p = raw.data();
    switch (datatype) {
        case kNiftiUint8:
            for (std::size_t i = 0; i < nvox; ++i) v.data[i] = v.slope * p[i] + v.intercept;
            break;
        case kNiftiInt16:
            for (std::size_t i = 0; i < nvox; ++i)
                v.data[i] = v.slope * detail::le_i16(p + 2 * i, swap) + v.intercept;
            break;
        case kNiftiUint16:
            for (std::size_t i = 0; i < nvox; ++i)
                v.data[i] = v.slope * detail::le_u16(p + 2 * i, swap) + v.intercept;
            break;
        case kNiftiFloat32:
            for (std::size_t i = 0; i < nvox; ++i)
                v.data[i] = v.slope * detail::le_f32(p + 4 * i, swap) + v.intercept;
            break;
    }
    return v;
}

/// Extract the 2D plane at `index` along `axis` and min-max normalize it to
/// [0,1]. A constant plane maps to all-zeros.
inline GrayImage extract_slice(const Volume& v, int axis, int index) {
    if (axis < 0 || axis > 2) throw IndexOutOfRange("extract_slice: axis must be 0, 1 or 2");
    if (index < 0 || index >= v.dims[axis])
        throw IndexOutOfRange("extract_slice: index " + std::to_string(index) +
                              " outside [0, " + std::to_string(v.dims[axis]) + ")");

    int w = 0, h = 0;
    switch (axis) {
        case 0: w = v.dims[1]; h = v.dims[2]; break;
        case 1: w = v.dims[0]; h = v.dims[2]; break;
        case 2: w = v.dims[0]; h = v.dims[1]; break;
    }
    GrayImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double val = 0.0;
            switch (axis) {
                case 0: val = v.at(index, x, y); break;
                case 1: val = v.at(x, index, y); break;
                case 2: val = v.at(x, y, index); break;
            }
            img.at(x, y) = val;
        }
    }

    double lo = img.data[0], hi = img.data[0];
    for (double d : img.data) {
        if (d < lo) lo = d;
        if (d > hi) hi = d;
    }
    if (hi == lo) {
        std::fill(img.data.begin(), img.data.end(), 0.0);
    } else {
        const double scale = 1.0 / (hi - lo);
        for (double& d : img.data) d = (d - lo) * scale;
    }
    return img;
}

} // namespace fisrg

#endif // FISRG_NIFTI_HPP
