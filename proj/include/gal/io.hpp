#pragma once

#include <string>
#include <vector>

#include "gal/anchors.hpp"
#include "gal/boxes.hpp"
#include "gal/cloud.hpp"
#include "gal/features.hpp"
#include "gal/grid.hpp"
#include "gal/ground.hpp"

namespace gal {

// All writers are atomic: content goes to a temp file in the target
// directory which is renamed over the destination.

// --- sensor clouds -------------------------------------------------------
// Headerless records of four little-endian f32: x, y, z, intensity.
// Truncated files and non-finite values raise ParseError naming the byte
// offset.
PointCloud read_kitti_bin(const std::string& path);
void write_kitti_bin(const std::string& path, const PointCloud& cloud);

// --- labels --------------------------------------------------------------
struct LabeledBox {
    Box3D box;
    std::string label;
};

// JSON array of {x,y,z,l,w,h,theta,class}. Yaw outside [-pi, pi) is
// normalized; if warnings is non-null it receives the number of entries
// that needed it.
std::vector<LabeledBox> read_labels_json(const std::string& path,
                                         int* warnings = nullptr);
void write_labels_json(const std::string& path,
                       const std::vector<LabeledBox>& boxes);

// Newline-delimited 0/1, one line per point in cloud order.
void write_ground_labels(const std::string& path, const GroundLabels& labels);

// --- grid files ----------------------------------------------------------
// Magic "GAGR", u32 rows, u32 cols, f64 x_min, f64 y_min, f64 cell_size,
// rows*cols f32 cells, then ceil(rows*cols/8) validity bytes (row-major,
// LSB first). Cell values are written as f32, so grids whose values came
// from f32 sources round-trip bit-exactly.
struct GridData {
    GridSpec spec;
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
};

void write_grid(const std::string& path, const GridSpec& spec,
                const std::vector<double>& values,
                const std::vector<std::uint8_t>& valid);
void write_grid(const std::string& path, const HeightMap& hm);
void write_grid(const std::string& path, const GroundSurface& gs);
GridData read_grid(const std::string& path);

// Same header with a u32 payload.
void write_count_grid(const std::string& path, const CountGrid& cg);
CountGrid read_count_grid(const std::string& path);

// Feature tensor: the grid layout extended with a u32 channel count
// (magic "GAF1"): rows, cols, channels, x_min, y_min, cell_size, then
// channel planes of f32 (slices first, density last), no validity bitmap.
void write_features(const std::string& path, const BevFeatures& f);
BevFeatures read_features(const std::string& path);

// 8-bit binary PGM render of a grid: valid cells min-max normalized to
// 1..255, invalid cells 0.
void write_grid_pgm(const std::string& path, const GridSpec& spec,
                    const std::vector<double>& values,
                    const std::vector<std::uint8_t>& valid);

// --- anchors -------------------------------------------------------------
// JSON lines {x,y,z,l,w,h,theta,count,kept}.
void write_anchors_jsonl(const std::string& path, const AnchorSet& set,
                         bool kept_only);

}  // namespace gal
