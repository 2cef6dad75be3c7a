#include "gal/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gal/error.hpp"

namespace gal {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kGridMagic[4] = {'G', 'A', 'G', 'R'};
constexpr char kFeatureMagic[4] = {'G', 'A', 'F', '1'};

void put_u32(std::string& buf, std::uint32_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
    buf.push_back(static_cast<char>((v >> 16) & 0xff));
    buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    put_u32(buf, static_cast<std::uint32_t>(v & 0xffffffffu));
    put_u32(buf, static_cast<std::uint32_t>(v >> 32));
}

void put_f32(std::string& buf, float v) {
    put_u32(buf, std::bit_cast<std::uint32_t>(v));
}

void put_f64(std::string& buf, double v) {
    put_u64(buf, std::bit_cast<std::uint64_t>(v));
}

class Reader {
public:
    Reader(std::string data, std::string path)
        : data_(std::move(data)), path_(std::move(path)) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    void need(std::size_t n, const char* what) {
        if (remaining() < n) {
            throw ParseError(path_ + ": truncated " + what + " at offset " +
                             std::to_string(pos_));
        }
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) {
            v = (v << 8) | static_cast<std::uint8_t>(data_[pos_ + i]);
        }
        pos_ += 4;
        return v;
    }
    std::uint64_t u64(const char* what) {
        const std::uint64_t lo = u32(what);
        const std::uint64_t hi = u32(what);
        return lo | (hi << 32);
    }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
    double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }
    void expect_magic(const char magic[4]) {
        need(4, "magic");
        if (std::memcmp(data_.data() + pos_, magic, 4) != 0) {
            throw ParseError(path_ + ": bad magic, not a " +
                             std::string(magic, 4) + " file");
        }
        pos_ += 4;
    }

private:
    std::string data_;
    std::string path_;
    std::size_t pos_ = 0;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

// temp file in the destination directory, renamed into place on success
void atomic_write(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError(path + ": cannot open for writing");
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) throw ParseError(path + ": write failed");
    }
    fs::rename(tmp, target);
}

std::string grid_header(const GridSpec& spec) {
    std::string buf;
    buf.append(kGridMagic, 4);
    put_u32(buf, static_cast<std::uint32_t>(spec.rows));
    put_u32(buf, static_cast<std::uint32_t>(spec.cols));
    put_f64(buf, spec.x_min);
    put_f64(buf, spec.y_min);
    put_f64(buf, spec.cell_size);
    return buf;
}

GridSpec read_grid_header(Reader& r) {
    r.expect_magic(kGridMagic);
    GridSpec spec;
    spec.rows = static_cast<int>(r.u32("rows"));
    spec.cols = static_cast<int>(r.u32("cols"));
    spec.x_min = r.f64("x_min");
    spec.y_min = r.f64("y_min");
    spec.cell_size = r.f64("cell_size");
    if (spec.rows <= 0 || spec.cols <= 0 || !(spec.cell_size > 0.0)) {
        throw ParseError("grid header carries non-positive dimensions");
    }
    return spec;
}

void append_validity(std::string& buf, const std::vector<std::uint8_t>& valid) {
    const std::size_t bytes = (valid.size() + 7) / 8;
    std::string bits(bytes, '\0');
    for (std::size_t k = 0; k < valid.size(); ++k) {
        if (valid[k]) bits[k / 8] |= static_cast<char>(1u << (k % 8));
    }
    buf += bits;
}

std::vector<std::uint8_t> read_validity(Reader& r, std::size_t cells) {
    std::vector<std::uint8_t> valid(cells, 0);
    const std::size_t bytes = (cells + 7) / 8;
    r.need(bytes, "validity bitmap");
    for (std::size_t b = 0; b < bytes; ++b) {
        const std::uint8_t byte = r.u8("validity bitmap");
        for (int bit = 0; bit < 8; ++bit) {
            const std::size_t k = b * 8 + bit;
            if (k < cells && (byte & (1u << bit))) valid[k] = 1;
        }
    }
    return valid;
}

double finite_or_throw(float v, const std::string& path, std::size_t offset) {
    if (!std::isfinite(v)) {
        throw ParseError(path + ": non-finite value at byte offset " +
                         std::to_string(offset));
    }
    return static_cast<double>(v);
}

Box3D box_from_json(const json& j, std::size_t entry) {
    for (const char* field : {"x", "y", "z", "l", "w", "h", "theta"}) {
        if (!j.contains(field) || !j[field].is_number()) {
            throw ParseError("labels entry " + std::to_string(entry) +
                             ": missing numeric field '" + field + "'");
        }
    }
    Box3D b;
    b.x = j["x"].get<double>();
    b.y = j["y"].get<double>();
    b.z = j["z"].get<double>();
    b.l = j["l"].get<double>();
    b.w = j["w"].get<double>();
    b.h = j["h"].get<double>();
    b.theta = j["theta"].get<double>();
    try {
        b.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError("labels entry " + std::to_string(entry) + ": " +
                         e.what());
    }
    return b;
}

}  // namespace

PointCloud read_kitti_bin(const std::string& path) {
    const std::string data = slurp(path);
    if (data.size() % 16 != 0) {
        throw ParseError(path + ": truncated record at offset " +
                         std::to_string(data.size() - data.size() % 16) +
                         " (file length is not a multiple of 16)");
    }
    PointCloud cloud;
    cloud.source_id = fs::path(path).stem().string();
    cloud.points.reserve(data.size() / 16);
    for (std::size_t off = 0; off < data.size(); off += 16) {
        float f[4];
        std::memcpy(f, data.data() + off, 16);
        if constexpr (std::endian::native == std::endian::big) {
            for (float& v : f) {
                auto bits = std::bit_cast<std::uint32_t>(v);
                bits = __builtin_bswap32(bits);
                v = std::bit_cast<float>(bits);
            }
        }
        Point3 p;
        p.x = finite_or_throw(f[0], path, off);
        p.y = finite_or_throw(f[1], path, off + 4);
        p.z = finite_or_throw(f[2], path, off + 8);
        p.intensity = finite_or_throw(f[3], path, off + 12);
        cloud.points.push_back(p);
    }
    return cloud;
}

void write_kitti_bin(const std::string& path, const PointCloud& cloud) {
    std::string buf;
    buf.reserve(cloud.points.size() * 16);
    for (const Point3& p : cloud.points) {
        put_f32(buf, static_cast<float>(p.x));
        put_f32(buf, static_cast<float>(p.y));
        put_f32(buf, static_cast<float>(p.z));
        put_f32(buf, static_cast<float>(p.intensity));
    }
    atomic_write(path, buf);
}

std::vector<LabeledBox> read_labels_json(const std::string& path,
                                         int* warnings) {
    json doc;
    try {
        doc = json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw ParseError(path + ": labels file must be a JSON array");
    }
    int normalized = 0;
    std::vector<LabeledBox> out;
    out.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        LabeledBox lb;
        lb.box = box_from_json(doc[i], i);
        if (lb.box.theta < -3.141592653589793238462643383279502884 ||
            lb.box.theta >= 3.141592653589793238462643383279502884) {
            lb.box.theta = normalize_angle(lb.box.theta);
            ++normalized;
        }
        if (doc[i].contains("class")) lb.label = doc[i]["class"].get<std::string>();
        out.push_back(std::move(lb));
    }
    if (warnings) *warnings = normalized;
    return out;
}

void write_labels_json(const std::string& path,
                       const std::vector<LabeledBox>& boxes) {
    json doc = json::array();
    for (const LabeledBox& lb : boxes) {
        doc.push_back({{"x", lb.box.x},
                       {"y", lb.box.y},
                       {"z", lb.box.z},
                       {"l", lb.box.l},
                       {"w", lb.box.w},
                       {"h", lb.box.h},
                       {"theta", lb.box.theta},
                       {"class", lb.label}});
    }
    atomic_write(path, doc.dump(2) + "\n");
}

void write_ground_labels(const std::string& path, const GroundLabels& labels) {
    std::string buf;
    buf.reserve(labels.ground.size() * 2);
    for (std::uint8_t g : labels.ground) {
        buf.push_back(g ? '1' : '0');
        buf.push_back('\n');
    }
    atomic_write(path, buf);
}

void write_grid(const std::string& path, const GridSpec& spec,
                const std::vector<double>& values,
                const std::vector<std::uint8_t>& valid) {
    if (values.size() != spec.cell_count() || valid.size() != spec.cell_count()) {
        throw std::invalid_argument("write_grid: payload does not match spec");
    }
    std::string buf = grid_header(spec);
    buf.reserve(buf.size() + values.size() * 4 + values.size() / 8 + 16);
    for (double v : values) put_f32(buf, static_cast<float>(v));
    append_validity(buf, valid);
    atomic_write(path, buf);
}

void write_grid(const std::string& path, const HeightMap& hm) {
    write_grid(path, hm.spec, hm.max_z, hm.valid);
}

void write_grid(const std::string& path, const GroundSurface& gs) {
    write_grid(path, gs.spec, gs.ground_z, gs.valid);
}

GridData read_grid(const std::string& path) {
    Reader r(slurp(path), path);
    GridData g;
    g.spec = read_grid_header(r);
    const std::size_t cells = g.spec.cell_count();
    g.values.reserve(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        g.values.push_back(static_cast<double>(r.f32("cell payload")));
    }
    g.valid = read_validity(r, cells);
    return g;
}

void write_count_grid(const std::string& path, const CountGrid& cg) {
    if (cg.counts.size() != cg.spec.cell_count()) {
        throw std::invalid_argument("write_count_grid: payload does not match spec");
    }
    std::string buf = grid_header(cg.spec);
    for (std::uint32_t c : cg.counts) put_u32(buf, c);
    std::vector<std::uint8_t> valid(cg.counts.size());
    for (std::size_t k = 0; k < cg.counts.size(); ++k) {
        valid[k] = cg.counts[k] > 0 ? 1 : 0;
    }
    append_validity(buf, valid);
    atomic_write(path, buf);
}

CountGrid read_count_grid(const std::string& path) {
    Reader r(slurp(path), path);
    CountGrid cg;
    cg.spec = read_grid_header(r);
    const std::size_t cells = cg.spec.cell_count();
    cg.counts.reserve(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        cg.counts.push_back(r.u32("count payload"));
    }
    read_validity(r, cells);
    return cg;
}

void write_features(const std::string& path, const BevFeatures& f) {
    const std::size_t cells = f.spec.cell_count();
    if (f.density.size() != cells ||
        f.slices.size() != cells * static_cast<std::size_t>(f.num_slices)) {
        throw std::invalid_argument("write_features: payload does not match spec");
    }
    std::string buf;
    buf.append(kFeatureMagic, 4);
    put_u32(buf, static_cast<std::uint32_t>(f.spec.rows));
    put_u32(buf, static_cast<std::uint32_t>(f.spec.cols));
    put_u32(buf, static_cast<std::uint32_t>(f.num_slices) + 1);
    put_f64(buf, f.spec.x_min);
    put_f64(buf, f.spec.y_min);
    put_f64(buf, f.spec.cell_size);
    for (float v : f.slices) put_f32(buf, v);
    for (float v : f.density) put_f32(buf, v);
    atomic_write(path, buf);
}

BevFeatures read_features(const std::string& path) {
    Reader r(slurp(path), path);
    r.expect_magic(kFeatureMagic);
    BevFeatures f;
    f.spec.rows = static_cast<int>(r.u32("rows"));
    f.spec.cols = static_cast<int>(r.u32("cols"));
    const std::uint32_t channels = r.u32("channels");
    f.spec.x_min = r.f64("x_min");
    f.spec.y_min = r.f64("y_min");
    f.spec.cell_size = r.f64("cell_size");
    if (f.spec.rows <= 0 || f.spec.cols <= 0 || channels < 2 ||
        !(f.spec.cell_size > 0.0)) {
        throw ParseError(path + ": feature header carries bad dimensions");
    }
    f.num_slices = static_cast<int>(channels) - 1;
    const std::size_t cells = f.spec.cell_count();
    f.slices.reserve(cells * f.num_slices);
    for (std::size_t k = 0; k < cells * static_cast<std::size_t>(f.num_slices); ++k) {
        f.slices.push_back(r.f32("slice payload"));
    }
    f.density.reserve(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        f.density.push_back(r.f32("density payload"));
    }
    return f;
}

void write_grid_pgm(const std::string& path, const GridSpec& spec,
                    const std::vector<double>& values,
                    const std::vector<std::uint8_t>& valid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!valid[k]) continue;
        lo = std::min(lo, values[k]);
        hi = std::max(hi, values[k]);
    }
    std::string buf = "P5\n" + std::to_string(spec.cols) + " " +
                      std::to_string(spec.rows) + "\n255\n";
    buf.reserve(buf.size() + values.size());
    const double span = hi - lo;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!valid[k]) {
            buf.push_back('\0');
        } else if (span <= 0.0) {
            buf.push_back(static_cast<char>(255));
        } else {
            const int level =
                1 + static_cast<int>(std::lround(254.0 * (values[k] - lo) / span));
            buf.push_back(static_cast<char>(std::clamp(level, 1, 255)));
        }
    }
    atomic_write(path, buf);
}

void write_anchors_jsonl(const std::string& path, const AnchorSet& set,
                         bool kept_only) {
    std::string buf;
    for (std::size_t n = 0; n < set.anchors.size(); ++n) {
        if (kept_only && !set.kept[n]) continue;
        const Box3D& b = set.anchors[n];
        json line = {{"x", b.x},       {"y", b.y},
                     {"z", b.z},       {"l", b.l},
                     {"w", b.w},       {"h", b.h},
                     {"theta", b.theta}, {"count", set.point_counts[n]},
                     {"kept", static_cast<bool>(set.kept[n])}};
        buf += line.dump();
        buf.push_back('\n');
    }
    atomic_write(path, buf);
}

}  // namespace gal
