#include "lanekit/png_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "lanekit/io.hpp"

namespace lanekit {

namespace {

const unsigned char kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

uint32_t get_u32(const unsigned char* p) {
    return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
           (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

void append_chunk(std::vector<unsigned char>& out, const char type[4],
                  const std::vector<unsigned char>& data) {
    put_u32(out, static_cast<uint32_t>(data.size()));
    std::vector<unsigned char> body(type, type + 4);
    body.insert(body.end(), data.begin(), data.end());
    out.insert(out.end(), body.begin(), body.end());
    put_u32(out, static_cast<uint32_t>(crc32(0, body.data(), static_cast<uInt>(body.size()))));
}

void write_gray8(const std::string& path, int width, int height,
                 const std::vector<unsigned char>& gray) {
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<size_t>(height) * (width + 1));
    for (int r = 0; r < height; ++r) {
        raw.push_back(0);  // filter: none
        raw.insert(raw.end(), gray.begin() + static_cast<size_t>(r) * width,
                   gray.begin() + static_cast<size_t>(r + 1) * width);
    }
    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> zdata(zlen);
    if (compress2(zdata.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError("png write: deflate failed for " + path);
    zdata.resize(zlen);

    std::vector<unsigned char> ihdr;
    put_u32(ihdr, static_cast<uint32_t>(width));
    put_u32(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(0);  // color type: grayscale
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace

    std::vector<unsigned char> file(kSignature, kSignature + 8);
    append_chunk(file, "IHDR", ihdr);
    append_chunk(file, "IDAT", zdata);
    append_chunk(file, "IEND", {});

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(file.data()), static_cast<std::streamsize>(file.size()));
    if (!out) throw IoError("write failed for " + path);
}

unsigned char paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<unsigned char>(a);
    if (pb <= pc) return static_cast<unsigned char>(b);
    return static_cast<unsigned char>(c);
}

}  // namespace

void write_png_gray(const std::string& path, const Image& image) {
    std::vector<unsigned char> gray(image.size());
    for (size_t i = 0; i < image.size(); ++i) {
        const float v = std::clamp(image.px[i], 0.0f, 1.0f);
        gray[i] = static_cast<unsigned char>(std::lround(v * 255.0f));
    }
    write_gray8(path, image.width, image.height, gray);
}

void write_png_mask(const std::string& path, const Mask& mask) {
    std::vector<unsigned char> gray(mask.px.size());
    for (size_t i = 0; i < mask.px.size(); ++i) gray[i] = mask.px[i] ? 255 : 0;
    write_gray8(path, mask.width, mask.height, gray);
}

Image read_png_gray(const std::string& path) {
    const std::string blob = read_text_file(path);
    const auto* p = reinterpret_cast<const unsigned char*>(blob.data());
    const size_t n = blob.size();
    if (n < 8 || std::memcmp(p, kSignature, 8) != 0)
        throw ValidationError(path + ": not a PNG file");

    uint32_t width = 0, height = 0;
    int bit_depth = -1, color_type = -1;
    std::vector<unsigned char> zdata;
    size_t off = 8;
    while (off + 8 <= n) {
        const uint32_t len = get_u32(p + off);
        if (off + 12 + len > n) throw ValidationError(path + ": truncated chunk");
        const char* type = reinterpret_cast<const char*>(p + off + 4);
        const unsigned char* data = p + off + 8;
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw ValidationError(path + ": bad IHDR");
            width = get_u32(data);
            height = get_u32(data + 4);
            bit_depth = data[8];
            color_type = data[9];
            if (data[12] != 0) throw ValidationError(path + ": interlaced PNG unsupported");
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            zdata.insert(zdata.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        off += 12 + len;
    }
    if (width == 0 || height == 0) throw ValidationError(path + ": missing IHDR");
    if (bit_depth != 8 || color_type != 0)
        throw ValidationError(path + ": only 8-bit grayscale PNGs are supported");

    const size_t stride = width + 1;
    std::vector<unsigned char> raw(static_cast<size_t>(height) * stride);
    uLongf rawlen = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &rawlen, zdata.data(), static_cast<uLong>(zdata.size())) != Z_OK ||
        rawlen != raw.size())
        throw ValidationError(path + ": corrupt image data");

    Image img(static_cast<int>(width), static_cast<int>(height));
    std::vector<unsigned char> prev(width, 0), cur(width, 0);
    for (uint32_t r = 0; r < height; ++r) {
        const unsigned char filter = raw[r * stride];
        const unsigned char* line = raw.data() + r * stride + 1;
        for (uint32_t c = 0; c < width; ++c) {
            const int left = c > 0 ? cur[c - 1] : 0;
            const int up = prev[c];
            const int upleft = c > 0 ? prev[c - 1] : 0;
            int v = line[c];
            switch (filter) {
                case 0: break;
                case 1: v += left; break;
                case 2: v += up; break;
                case 3: v += (left + up) / 2; break;
                case 4: v += paeth(left, up, upleft); break;
                default: throw ValidationError(path + ": unknown PNG filter");
            }
            cur[c] = static_cast<unsigned char>(v & 0xff);
            img.at(static_cast<int>(r), static_cast<int>(c)) = cur[c] / 255.0f;
        }
        std::swap(prev, cur);
    }
    return img;
}

}  // namespace lanekit
