#pragma once

#include <iosfwd>
#include <string>

#include "tvct/grid.hpp"
#include "tvct/solvers.hpp"

namespace tvct {

/// Binary array container: magic "TVCT", u32 LE version (1), u8 kind
/// (0 = image, 1 = sinogram, 2 = mask), u32 LE rows, u32 LE cols, one f64 LE
/// meta value (h for images, delta_s for sinograms, 0 for masks), then
/// rows*cols f32 LE values row-major (masks use 0.0/1.0).
enum class ArrayKind : std::uint8_t { Image = 0, Sinogram = 1, Mask = 2 };

struct ArrayData {
    ArrayKind kind = ArrayKind::Image;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    double meta = 0.0;
    std::vector<float> payload;
};

void write_array(const ArrayData& a, std::ostream& os);
ArrayData read_array(std::istream& is);

/// Path-based wrappers; "-" reads stdin / writes stdout.
void write_array(const ArrayData& a, const std::string& path);
ArrayData read_array(const std::string& path);

ArrayData to_array(const Image& u);
ArrayData to_array(const Sinogram& v);
/// Sinogram-shaped 0/1 mask (meta = delta_s of the geometry).
ArrayData to_array_mask(const ConstraintMask& m);
/// Image-shaped 0/1 mask.
ArrayData to_array_mask(const std::vector<std::uint8_t>& m, const ImageGeom& geom);

Image image_from_array(const ArrayData& a);
/// Angles are implied: uniform over [0, pi).
Sinogram sinogram_from_array(const ArrayData& a);
/// Mask entries only; thresholds are left zero for the caller to fill.
ConstraintMask sino_mask_from_array(const ArrayData& a);
std::vector<std::uint8_t> image_mask_from_array(const ArrayData& a);

/// 16-bit binary PGM with values affinely windowed from [lo, hi] and clamped.
void export_pgm(const Image& u, const std::string& path, double lo, double hi);

/// Trace CSV: leading "# key = value" comment lines, then the header
/// iter,objective,violation,rel_change and one row per record.
void write_trace_csv(const ConvergenceTrace& trace, const std::string& path,
                     const std::vector<std::pair<std::string, std::string>>& comments);

}  // namespace tvct
