#include "tvct/array_file.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tvct {

namespace {

constexpr char kMagic[4] = {'T', 'V', 'C', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated payload");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    put_u32(os, static_cast<std::uint32_t>(v));
    put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

std::uint64_t get_u64(std::istream& is) {
    const std::uint64_t lo = get_u32(is);
    const std::uint64_t hi = get_u32(is);
    return lo | (hi << 32);
}

}  // namespace

void write_array(const ArrayData& a, std::ostream& os) {
    if (a.payload.size() != static_cast<std::size_t>(a.rows) * a.cols)
        throw std::invalid_argument("write_array: payload size mismatch");
    for (float f : a.payload)
        if (!std::isfinite(f)) throw std::invalid_argument("write_array: non-finite values");
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    os.put(static_cast<char>(a.kind));
    put_u32(os, a.rows);
    put_u32(os, a.cols);
    std::uint64_t meta_bits;
    std::memcpy(&meta_bits, &a.meta, 8);
    put_u64(os, meta_bits);
    for (float f : a.payload) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(os, bits);
    }
    if (!os) throw std::runtime_error("write_array: write failed");
}

ArrayData read_array(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad magic");
    const std::uint32_t version = get_u32(is);
    if (version != kVersion) throw std::runtime_error("unsupported version");
    const int kind_byte = is.get();
    if (kind_byte < 0) throw std::runtime_error("truncated payload");
    if (kind_byte > 2) throw std::runtime_error("bad kind");
    ArrayData a;
    a.kind = static_cast<ArrayKind>(kind_byte);
    a.rows = get_u32(is);
    a.cols = get_u32(is);
    const std::uint64_t meta_bits = get_u64(is);
    std::memcpy(&a.meta, &meta_bits, 8);
    const std::size_t count = static_cast<std::size_t>(a.rows) * a.cols;
    a.payload.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t bits = get_u32(is);
        float f;
        std::memcpy(&f, &bits, 4);
        if (!std::isfinite(f)) throw std::runtime_error("non-finite values");
        a.payload[i] = f;
    }
    return a;
}

void write_array(const ArrayData& a, const std::string& path) {
    if (path == "-") {
        write_array(a, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_array: cannot open " + path);
    write_array(a, os);
}

ArrayData read_array(const std::string& path) {
    if (path == "-") return read_array(std::cin);
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_array: cannot open " + path);
    return read_array(is);
}

ArrayData to_array(const Image& u) {
    ArrayData a;
    a.kind = ArrayKind::Image;
    a.rows = a.cols = static_cast<std::uint32_t>(u.geom.n);
    a.meta = u.geom.h;
    a.payload.assign(u.data.begin(), u.data.end());
    return a;
}

ArrayData to_array(const Sinogram& v) {
    ArrayData a;
    a.kind = ArrayKind::Sinogram;
    a.rows = static_cast<std::uint32_t>(v.geom.n_angles());
    a.cols = static_cast<std::uint32_t>(v.geom.m_det);
    a.meta = v.geom.delta_s;
    a.payload.assign(v.data.begin(), v.data.end());
    return a;
}

ArrayData to_array_mask(const ConstraintMask& m) {
    ArrayData a;
    a.kind = ArrayKind::Mask;
    a.rows = static_cast<std::uint32_t>(m.geom.n_angles());
    a.cols = static_cast<std::uint32_t>(m.geom.m_det);
    a.meta = m.geom.delta_s;
    a.payload.resize(m.mask.size());
    for (std::size_t i = 0; i < m.mask.size(); ++i) a.payload[i] = m.mask[i] ? 1.0f : 0.0f;
    return a;
}

ArrayData to_array_mask(const std::vector<std::uint8_t>& m, const ImageGeom& geom) {
    ArrayData a;
    a.kind = ArrayKind::Mask;
    a.rows = a.cols = static_cast<std::uint32_t>(geom.n);
    a.meta = 0.0;
    a.payload.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) a.payload[i] = m[i] ? 1.0f : 0.0f;
    return a;
}

Image image_from_array(const ArrayData& a) {
    if (a.kind != ArrayKind::Image) throw std::runtime_error("expected an image array");
    if (a.rows != a.cols) throw std::runtime_error("image arrays must be square");
    Image u(ImageGeom(static_cast<int>(a.rows), a.meta));
    u.data.assign(a.payload.begin(), a.payload.end());
    return u;
}

Sinogram sinogram_from_array(const ArrayData& a) {
    if (a.kind != ArrayKind::Sinogram) throw std::runtime_error("expected a sinogram array");
    Sinogram v(uniform_sino_geom(static_cast<int>(a.rows), static_cast<int>(a.cols), a.meta));
    v.data.assign(a.payload.begin(), a.payload.end());
    return v;
}

ConstraintMask sino_mask_from_array(const ArrayData& a) {
    if (a.kind != ArrayKind::Mask) throw std::runtime_error("expected a mask array");
    ConstraintMask m(uniform_sino_geom(static_cast<int>(a.rows), static_cast<int>(a.cols),
                                       a.meta > 0 ? a.meta : 1.0));
    for (std::size_t i = 0; i < a.payload.size(); ++i) m.mask[i] = a.payload[i] > 0.5f ? 1 : 0;
    return m;
}

std::vector<std::uint8_t> image_mask_from_array(const ArrayData& a) {
    if (a.kind != ArrayKind::Mask) throw std::runtime_error("expected a mask array");
    std::vector<std::uint8_t> m(a.payload.size());
    for (std::size_t i = 0; i < a.payload.size(); ++i) m[i] = a.payload[i] > 0.5f ? 1 : 0;
    return m;
}

void export_pgm(const Image& u, const std::string& path, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("export_pgm: need lo < hi");
    std::ostringstream header;
    header << "P5\n" << u.geom.n << " " << u.geom.n << "\n65535\n";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("export_pgm: cannot open " + path);
    os << header.str();
    // PGM rasters run top-to-bottom; emit rows of decreasing y so the image
    // renders with y up, x right.
    for (int j = u.geom.n - 1; j >= 0; --j) {
        for (int i = 0; i < u.geom.n; ++i) {
            double t = (u.at(i, j) - lo) / (hi - lo);
            t = std::min(std::max(t, 0.0), 1.0);
            const auto q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
            os.put(static_cast<char>(q >> 8));
            os.put(static_cast<char>(q & 0xff));
        }
    }
    if (!os) throw std::runtime_error("export_pgm: write failed");
}

void write_trace_csv(const ConvergenceTrace& trace, const std::string& path,
                     const std::vector<std::pair<std::string, std::string>>& comments) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_trace_csv: cannot open " + path);
    for (const auto& [k, v] : comments) os << "# " << k << " = " << v << "\n";
    os << "iter,objective,violation,rel_change\n";
    char buf[160];
    for (const auto& r : trace.records) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.iter, r.objective,
                      r.violation, r.rel_change);
        os << buf;
    }
    if (!os) throw std::runtime_error("write_trace_csv: write failed");
}

}  // namespace tvct
