// gal: BEV ground estimation and detector front-end toolkit.
//
// Subcommands: surface | segment | anchors | features | augment | synth |
// bench. Exit codes: 0 success, 2 input validation, 3 algorithmic failure.
// GAL_SEED overrides every --seed flag; all outputs are written atomically.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gal/anchors.hpp"
#include "gal/augment.hpp"
#include "gal/bench.hpp"
#include "gal/boxes.hpp"
#include "gal/error.hpp"
#include "gal/features.hpp"
#include "gal/grid.hpp"
#include "gal/ground.hpp"
#include "gal/io.hpp"
#include "gal/plane.hpp"
#include "gal/rng.hpp"
#include "gal/synth.hpp"

using nlohmann::json;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct CommonOpts {
    gal::RoiConfig roi;
    double cell = 0.1;
    std::uint64_t seed = 0;
};

void add_roi_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->set_config("--config", "", "key=value config file, flags override it");
    cmd->add_option("--x-min", o.roi.x_min, "ROI lower x bound, m");
    cmd->add_option("--x-max", o.roi.x_max, "ROI upper x bound, m");
    cmd->add_option("--y-min", o.roi.y_min, "ROI lower y bound, m");
    cmd->add_option("--y-max", o.roi.y_max, "ROI upper y bound, m");
    cmd->add_option("--z-min", o.roi.z_min, "ROI lower z bound, m");
    cmd->add_option("--z-max", o.roi.z_max, "ROI upper z bound, m");
    cmd->add_option("--cell", o.cell, "BEV cell size, m")->check(CLI::PositiveNumber);
}

gal::PointCloud load_cropped(const std::string& path, const CommonOpts& o) {
    return gal::crop_roi(gal::read_kitti_bin(path), o.roi);
}

gal::GroundSurface estimate_for(const gal::PointCloud& cloud,
                                const CommonOpts& o, double window) {
    const gal::GridSpec spec = gal::GridSpec::from_roi(o.roi, o.cell);
    gal::FilterConfig f;
    f.half_window_x = window;
    f.half_window_y = window;
    return gal::estimate_surface(gal::build_height_map(cloud, spec), f);
}

std::vector<gal::Box3D> plain_boxes(const std::vector<gal::LabeledBox>& lbs) {
    std::vector<gal::Box3D> out;
    out.reserve(lbs.size());
    for (const auto& lb : lbs) out.push_back(lb.box);
    return out;
}

gal::TerrainSpec parse_terrain(const std::string& kind, double z0, double gx,
                               double gy, double peak, double half_width,
                               double z_low, double z_high, double step_x,
                               double density, double sigma,
                               std::uint64_t seed) {
    gal::TerrainSpec t;
    if (kind == "flat") {
        t.kind = gal::TerrainSpec::Kind::Flat;
    } else if (kind == "slope") {
        t.kind = gal::TerrainSpec::Kind::Slope;
    } else if (kind == "crown") {
        t.kind = gal::TerrainSpec::Kind::Crown;
    } else if (kind == "step") {
        t.kind = gal::TerrainSpec::Kind::Step;
    } else {
        throw CLI::ValidationError("--terrain must be flat|slope|crown|step");
    }
    t.z0 = z0;
    t.gx = gx;
    t.gy = gy;
    t.crown_peak = peak;
    t.crown_half_width = half_width;
    t.z_low = z_low;
    t.z_high = z_high;
    t.step_x = step_x;
    t.point_density = density;
    t.noise_sigma = sigma;
    t.seed = seed;
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BEV ground surface estimation toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file, flags override it");

    std::optional<std::uint64_t> env_seed;
    if (const char* s = std::getenv("GAL_SEED")) {
        env_seed = std::strtoull(s, nullptr, 10);
    }

    // --- surface ---------------------------------------------------------
    auto* surface = app.add_subcommand("surface", "estimate the ground surface grid");
    CommonOpts surf_opts;
    std::string surf_in, surf_out, surf_pgm;
    double surf_window = 1.5;
    int surf_jobs = 1;
    surface->add_option("--in", surf_in,
                        "input .bin cloud, or a directory of them")
        ->required();
    surface->add_option("--out", surf_out,
                        "output grid file (directory input: output directory)")
        ->required();
    surface->add_option("--window", surf_window, "min-filter half window, m")
        ->check(CLI::PositiveNumber);
    surface->add_option("--pgm", surf_pgm, "optional PGM render of the surface");
    surface->add_option("--jobs", surf_jobs,
                        "frames processed in parallel for directory input")
        ->check(CLI::PositiveNumber);
    add_roi_flags(surface, surf_opts);

    // --- segment ---------------------------------------------------------
    auto* segment = app.add_subcommand("segment", "per-point ground labels");
    CommonOpts seg_opts;
    std::string seg_in, seg_out = "ground_labels.txt";
    std::string seg_baseline_out = "plane_labels.txt";
    std::string seg_baseline = "ransac";
    double seg_window = 1.5, seg_tau = 0.2, seg_threshold = 0.2;
    int seg_iters = 512;
    segment->add_option("--in", seg_in, "input .bin cloud")->required();
    segment->add_option("--out", seg_out, "surface-method 0/1 labels file");
    segment->add_option("--out-baseline", seg_baseline_out,
                        "baseline 0/1 labels file");
    segment->add_option("--baseline", seg_baseline, "baseline method (ransac|none)");
    segment->add_option("--window", seg_window, "min-filter half window, m");
    segment->add_option("--tau-g", seg_tau, "point-to-ground tolerance, m");
    segment->add_option("--ransac-iters", seg_iters, "baseline iterations");
    segment->add_option("--ransac-threshold", seg_threshold,
                        "baseline inlier threshold, m");
    segment->add_option("--seed", seg_opts.seed, "baseline sampling seed");
    std::string seg_plane_json;
    segment->add_option("--plane-json", seg_plane_json,
                        "write the fitted baseline plane as JSON here");
    add_roi_flags(segment, seg_opts);

    // --- anchors ---------------------------------------------------------
    auto* anchors = app.add_subcommand("anchors", "generate and prune anchors");
    CommonOpts anc_opts;
    std::string anc_in, anc_out;
    double anc_window = 1.5, anc_stride = 0.5;
    std::vector<double> anc_size{3.9, 1.6, 1.56};
    std::vector<double> anc_orients{0.0, kPi / 2};
    std::uint32_t anc_min_points = 1;
    bool anc_kept_only = false;
    anchors->add_option("--in", anc_in, "input .bin cloud")->required();
    anchors->add_option("--out", anc_out, "output anchors JSONL")->required();
    anchors->add_option("--window", anc_window, "min-filter half window, m");
    anchors->add_option("--stride", anc_stride, "anchor lattice stride, m");
    anchors->add_option("--size", anc_size, "anchor template l w h, m")
        ->expected(3);
    anchors->add_option("--orientations", anc_orients, "anchor yaws, rad");
    anchors->add_option("--min-points", anc_min_points,
                        "points required to keep an anchor");
    anchors->add_flag("--kept-only", anc_kept_only, "emit surviving anchors only");
    add_roi_flags(anchors, anc_opts);

    // --- features --------------------------------------------------------
    auto* features = app.add_subcommand("features",
                                        "ground-relative BEV feature tensor");
    CommonOpts feat_opts;
    std::string feat_in, feat_out, feat_pgm_prefix;
    double feat_window = 1.5, feat_span = 2.5;
    int feat_slices = 5;
    features->add_option("--in", feat_in, "input .bin cloud")->required();
    features->add_option("--out", feat_out, "output feature tensor")->required();
    features->add_option("--window", feat_window, "min-filter half window, m");
    features->add_option("--slices", feat_slices, "number of height slices");
    features->add_option("--span", feat_span, "height covered above ground, m");
    features->add_option("--pgm-prefix", feat_pgm_prefix,
                         "write <prefix><channel>.pgm renders");
    add_roi_flags(features, feat_opts);

    // --- augment ---------------------------------------------------------
    auto* augment = app.add_subcommand("augment", "flip/rotate/transplant a frame");
    CommonOpts aug_opts;
    std::string aug_in, aug_labels, aug_out, aug_out_labels;
    bool aug_flip = false;
    double aug_rotate = 0.0, aug_window = 1.5, aug_tau = 0.2;
    int aug_transplant = 0, aug_max_objects = -1;
    augment->add_option("--in", aug_in, "input .bin cloud")->required();
    augment->add_option("--labels", aug_labels, "input labels JSON")->required();
    augment->add_option("--out", aug_out, "output .bin cloud")->required();
    augment->add_option("--out-labels", aug_out_labels, "output labels JSON")
        ->required();
    augment->add_flag("--flip", aug_flip, "mirror the frame about y = 0");
    augment->add_option("--rotate", aug_rotate, "yaw the frame, rad");
    augment->add_option("--transplant", aug_transplant,
                        "clone this many annotated objects onto free ground");
    augment->add_option("--max-objects", aug_max_objects,
                        "only transplant into frames with at most this many "
                        "objects (-1: always)");
    augment->add_option("--window", aug_window, "min-filter half window, m");
    augment->add_option("--tau-g", aug_tau, "ground tolerance for free space, m");
    augment->add_option("--seed", aug_opts.seed, "placement seed");
    add_roi_flags(augment, aug_opts);

    // --- synth -----------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic frame");
    CommonOpts syn_opts;
    std::string syn_out, syn_out_labels, syn_out_truth, syn_kind = "flat";
    double syn_z0 = -1.73, syn_gx = 0.0, syn_gy = 0.0;
    double syn_peak = 0.3, syn_half_width = 8.0;
    double syn_z_low = -1.7, syn_z_high = -1.2, syn_step_x = 0.0;
    double syn_density = 20.0, syn_sigma = 0.02;
    int syn_objects = 0, syn_points_per_object = 512;
    synth->add_option("--out", syn_out, "output .bin cloud")->required();
    synth->add_option("--out-labels", syn_out_labels, "output labels JSON");
    synth->add_option("--out-truth", syn_out_truth,
                      "output analytic ground grid file");
    synth->add_option("--terrain", syn_kind, "flat|slope|crown|step");
    synth->add_option("--z0", syn_z0, "terrain base height, m");
    synth->add_option("--gx", syn_gx, "slope gradient along x");
    synth->add_option("--gy", syn_gy, "slope gradient along y");
    synth->add_option("--crown-peak", syn_peak, "crown height, m");
    synth->add_option("--crown-half-width", syn_half_width, "crown half width, m");
    synth->add_option("--z-low", syn_z_low, "step lower terrace, m");
    synth->add_option("--z-high", syn_z_high, "step upper terrace, m");
    synth->add_option("--step-x", syn_step_x, "step position, m");
    synth->add_option("--density", syn_density, "ground points per m^2");
    synth->add_option("--noise", syn_sigma, "vertical noise sigma, m");
    int syn_ring_beams = 0;
    double syn_ring_step = 0.2;
    synth->add_option("--ring-beams", syn_ring_beams,
                      "add spinning-lidar rings with this many beams (0: off)");
    synth->add_option("--ring-step", syn_ring_step,
                      "ring azimuth step, degrees");
    synth->add_option("--objects", syn_objects, "number of car-prior objects");
    synth->add_option("--points-per-object", syn_points_per_object,
                      "surface samples per object");
    synth->add_option("--seed", syn_opts.seed, "generation seed");
    add_roi_flags(synth, syn_opts);

    // --- bench -----------------------------------------------------------
    auto* bench = app.add_subcommand("bench",
                                     "time surface estimation vs ransac");
    CommonOpts ben_opts;
    std::string ben_json;
    long ben_points = 120000;
    int ben_reps = 50, ben_iters = 512;
    double ben_threshold = 0.2, ben_window = 1.5, ben_sigma = 0.02;
    bench->add_option("--points", ben_points, "approximate cloud size")
        ->check(CLI::PositiveNumber);
    bench->add_option("--reps", ben_reps, "timed repetitions")
        ->check(CLI::PositiveNumber);
    bench->add_option("--window", ben_window, "min-filter half window, m");
    bench->add_option("--ransac-iters", ben_iters, "baseline iterations");
    bench->add_option("--ransac-threshold", ben_threshold,
                      "baseline inlier threshold, m");
    bench->add_option("--noise", ben_sigma, "scene noise sigma, m");
    bench->add_option("--json", ben_json, "write the report as JSON here");
    bench->add_option("--seed", ben_opts.seed, "scene seed");
    add_roi_flags(bench, ben_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints the message / help text
        return code == 0 ? 0 : 2;
    }

    try {
        if (env_seed) {
            seg_opts.seed = aug_opts.seed = syn_opts.seed = ben_opts.seed =
                *env_seed;
        }

        if (surface->parsed()) {
            namespace fs = std::filesystem;
            if (fs::is_directory(surf_in)) {
                std::vector<fs::path> frames;
                for (const auto& entry : fs::directory_iterator(surf_in)) {
                    if (entry.path().extension() == ".bin") {
                        frames.push_back(entry.path());
                    }
                }
                std::sort(frames.begin(), frames.end());
                fs::create_directories(surf_out);

                // frames are independent, so worker count cannot change
                // any output byte
                std::atomic<std::size_t> next{0};
                std::mutex error_mutex;
                std::string first_error;
                auto worker = [&] {
                    for (;;) {
                        const std::size_t i = next.fetch_add(1);
                        if (i >= frames.size()) return;
                        try {
                            const gal::PointCloud cloud =
                                load_cropped(frames[i].string(), surf_opts);
                            const gal::GroundSurface gs =
                                estimate_for(cloud, surf_opts, surf_window);
                            const fs::path out =
                                fs::path(surf_out) /
                                (frames[i].stem().string() + ".gagr");
                            gal::write_grid(out.string(), gs);
                        } catch (const std::exception& e) {
                            const std::lock_guard<std::mutex> lock(error_mutex);
                            if (first_error.empty()) first_error = e.what();
                            next.store(frames.size());  // stop handing out work
                            return;
                        }
                    }
                };
                std::vector<std::thread> pool;
                const int jobs = std::max(
                    1, std::min<int>(surf_jobs,
                                     static_cast<int>(frames.size())));
                for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
                worker();
                for (auto& t : pool) t.join();
                if (!first_error.empty()) {
                    throw gal::ParseError(first_error);
                }
                std::cout << "surface: " << frames.size() << " frames -> "
                          << surf_out << "\n";
            } else {
                const gal::PointCloud cloud = load_cropped(surf_in, surf_opts);
                const gal::GroundSurface gs =
                    estimate_for(cloud, surf_opts, surf_window);
                gal::write_grid(surf_out, gs);
                if (!surf_pgm.empty()) {
                    gal::write_grid_pgm(surf_pgm, gs.spec, gs.ground_z,
                                        gs.valid);
                }
                std::cout << "surface: " << cloud.size() << " points -> "
                          << surf_out << "\n";
            }
        }

        if (segment->parsed()) {
            // the label files carry one line per point of the input file,
            // so classify the full cloud and mark out-of-ROI points
            // non-ground; the estimators only ever see the cropped cloud
            const gal::PointCloud full = gal::read_kitti_bin(seg_in);
            const gal::PointCloud cloud = gal::crop_roi(full, seg_opts.roi);
            const gal::GroundSurface gs =
                estimate_for(cloud, seg_opts, seg_window);
            gal::GroundLabels by_surface =
                gal::classify_points(full, gs, seg_tau);
            for (std::size_t i = 0; i < full.size(); ++i) {
                if (!seg_opts.roi.contains(full.points[i])) {
                    by_surface.ground[i] = 0;
                }
            }
            gal::write_ground_labels(seg_out, by_surface);

            if (seg_baseline == "ransac") {
                gal::RansacConfig cfg;
                cfg.iterations = seg_iters;
                cfg.inlier_threshold = seg_threshold;
                cfg.seed = seg_opts.seed;
                const gal::PlaneFit fit = gal::fit_plane_ransac(cloud, cfg);
                gal::GroundLabels by_plane =
                    gal::classify_points_plane(full, fit.model, seg_tau);
                for (std::size_t i = 0; i < full.size(); ++i) {
                    if (!seg_opts.roi.contains(full.points[i])) {
                        by_plane.ground[i] = 0;
                    }
                }
                gal::write_ground_labels(seg_baseline_out, by_plane);
                if (!seg_plane_json.empty()) {
                    const json doc = {{"a", fit.model.a}, {"b", fit.model.b},
                                      {"c", fit.model.c}, {"d", fit.model.d},
                                      {"inliers", fit.inliers},
                                      {"iterations", fit.iterations}};
                    std::ofstream out(seg_plane_json + ".tmp");
                    out << doc.dump(2) << "\n";
                    out.close();
                    std::filesystem::rename(seg_plane_json + ".tmp",
                                            seg_plane_json);
                }
                std::size_t disagree = 0;
                for (std::size_t i = 0; i < full.size(); ++i) {
                    if (by_surface.ground[i] != by_plane.ground[i]) ++disagree;
                }
                std::cout << "segment: " << full.size()
                          << " points, disagreement " << disagree << "\n";
            } else if (seg_baseline == "none") {
                std::cout << "segment: " << full.size() << " points\n";
            } else {
                throw std::invalid_argument("--baseline must be ransac|none");
            }
        }

        if (anchors->parsed()) {
            const gal::PointCloud cloud = load_cropped(anc_in, anc_opts);
            const gal::GridSpec spec =
                gal::GridSpec::from_roi(anc_opts.roi, anc_opts.cell);
            const gal::GroundSurface gs =
                estimate_for(cloud, anc_opts, anc_window);
            gal::AnchorConfig cfg;
            cfg.stride = anc_stride;
            cfg.sizes = {{anc_size[0], anc_size[1], anc_size[2]}};
            cfg.orientations = anc_orients;
            cfg.min_points = anc_min_points;
            const gal::AnchorSet raw = gal::generate_anchors(gs, cfg);
            const gal::IntegralGrid ig =
                gal::integral(gal::build_count_grid(cloud, spec));
            const gal::AnchorSet pruned = gal::prune_anchors(raw, ig, cfg);
            gal::write_anchors_jsonl(anc_out, pruned, anc_kept_only);
            std::size_t kept = 0;
            for (auto k : pruned.kept) kept += k;
            std::cout << "anchors: " << pruned.anchors.size() << " generated, "
                      << kept << " kept -> " << anc_out << "\n";
        }

        if (features->parsed()) {
            const gal::PointCloud cloud = load_cropped(feat_in, feat_opts);
            const gal::GroundSurface gs =
                estimate_for(cloud, feat_opts, feat_window);
            gal::FeatureConfig cfg;
            cfg.num_slices = feat_slices;
            cfg.slice_span = feat_span;
            const gal::BevFeatures tensor =
                gal::extract_features(cloud, gs, cfg);
            gal::write_features(feat_out, tensor);
            if (!feat_pgm_prefix.empty()) {
                std::vector<std::uint8_t> all(tensor.spec.cell_count(), 1);
                for (int s = 0; s < tensor.num_slices; ++s) {
                    std::vector<double> plane(tensor.spec.cell_count());
                    for (std::size_t k = 0; k < plane.size(); ++k) {
                        plane[k] = tensor.slices[s * tensor.plane_size() + k];
                    }
                    gal::write_grid_pgm(feat_pgm_prefix + "slice" +
                                            std::to_string(s) + ".pgm",
                                        tensor.spec, plane, all);
                }
                std::vector<double> dens(tensor.density.begin(),
                                         tensor.density.end());
                gal::write_grid_pgm(feat_pgm_prefix + "density.pgm",
                                    tensor.spec, dens, all);
            }
            std::cout << "features: " << tensor.num_slices << "+1 channels -> "
                      << feat_out << "\n";
        }

        if (augment->parsed()) {
            gal::Scene scene;
            scene.cloud = load_cropped(aug_in, aug_opts);
            int theta_warnings = 0;
            const auto labeled = gal::read_labels_json(aug_labels, &theta_warnings);
            if (theta_warnings > 0) {
                std::cerr << "warning: normalized theta on " << theta_warnings
                          << " label(s)\n";
            }
            scene.boxes = plain_boxes(labeled);

            if (aug_flip) scene = gal::flip_scene(scene);
            if (aug_rotate != 0.0) scene = gal::rotate_scene(scene, aug_rotate);

            int placed = 0;
            if (aug_transplant > 0 &&
                (aug_max_objects < 0 ||
                 static_cast<int>(scene.boxes.size()) <= aug_max_objects)) {
                const gal::GridSpec spec =
                    gal::GridSpec::from_roi(aug_opts.roi, aug_opts.cell);
                const gal::GroundSurface gs =
                    estimate_for(scene.cloud, aug_opts, aug_window);
                const gal::GroundLabels labels =
                    gal::classify_points(scene.cloud, gs, aug_tau);
                gal::PointCloud nonground;
                for (std::size_t i = 0; i < scene.cloud.size(); ++i) {
                    if (!labels.ground[i]) {
                        nonground.points.push_back(scene.cloud.points[i]);
                    }
                }
                const gal::IntegralGrid ig =
                    gal::integral(gal::build_count_grid(nonground, spec));

                // donors: points inside each annotated box, cloned
                std::vector<gal::Donor> donors;
                gal::Rng pick(aug_opts.seed);
                if (scene.boxes.empty()) {
                    throw std::invalid_argument(
                        "augment --transplant needs at least one labeled object");
                }
                for (int d = 0; d < aug_transplant; ++d) {
                    const gal::Box3D& box =
                        scene.boxes[gal::bounded(pick, scene.boxes.size())];
                    gal::Donor donor;
                    donor.box = box;
                    gal::Vec2 c[4];
                    gal::footprint_corners(box, c);
                    for (const gal::Point3& p : scene.cloud.points) {
                        const double r = std::hypot(box.l, box.w) / 2;
                        if (std::hypot(p.x - box.x, p.y - box.y) <= r &&
                            p.z >= box.z - box.h / 2 - 0.05 &&
                            p.z <= box.z + box.h / 2 + 0.05) {
                            donor.points.push_back(p);
                        }
                    }
                    donors.push_back(std::move(donor));
                }
                double clearance = 0.0;
                for (const auto& d : donors) {
                    clearance = std::max(clearance,
                                         std::hypot(d.box.l, d.box.w) + 0.5);
                }
                const auto free =
                    gal::find_free_cells(gs, ig, scene.boxes, clearance);
                const gal::TransplantResult result = gal::transplant_objects(
                    scene, gs, donors, free, aug_opts.seed);
                placed = result.placed;
                scene = result.scene;
                if (placed < aug_transplant) {
                    std::cerr << "warning: placed " << placed << " of "
                              << aug_transplant << " transplants\n";
                }
            }

            gal::write_kitti_bin(aug_out, scene.cloud);
            std::vector<gal::LabeledBox> out_labels;
            for (std::size_t b = 0; b < scene.boxes.size(); ++b) {
                gal::LabeledBox lb;
                lb.box = scene.boxes[b];
                lb.label = b < labeled.size() ? labeled[b].label : "Transplant";
                out_labels.push_back(std::move(lb));
            }
            gal::write_labels_json(aug_out_labels, out_labels);
            std::cout << "augment: " << scene.cloud.size() << " points, "
                      << scene.boxes.size() << " boxes (" << placed
                      << " transplanted)\n";
        }

        if (synth->parsed()) {
            gal::TerrainSpec terrain = parse_terrain(
                syn_kind, syn_z0, syn_gx, syn_gy, syn_peak, syn_half_width,
                syn_z_low, syn_z_high, syn_step_x, syn_density, syn_sigma,
                syn_opts.seed);
            if (syn_ring_beams > 0) {
                gal::RingSampling ring;
                ring.beams = syn_ring_beams;
                ring.angular_step_deg = syn_ring_step;
                terrain.ring = ring;
            }
            std::vector<gal::Box3D> objects;
            gal::Rng rng(syn_opts.seed + 1);
            while (static_cast<int>(objects.size()) < syn_objects) {
                gal::Box3D b;
                b.l = 3.9;
                b.w = 1.6;
                b.h = 1.56;
                b.x = gal::uniform(rng, syn_opts.roi.x_min + 5, syn_opts.roi.x_max - 5);
                b.y = gal::uniform(rng, syn_opts.roi.y_min + 5, syn_opts.roi.y_max - 5);
                b.z = terrain.ground_z(b.x, b.y) + b.h / 2;
                b.theta = gal::uniform(rng, -kPi, kPi);
                bool clear = true;
                for (const auto& other : objects) {
                    if (gal::iou_bev(b, other) > 0.0) clear = false;
                }
                if (clear) objects.push_back(b);
            }
            const gal::SceneSample scene = gal::generate_scene(
                terrain, objects, syn_opts.roi, syn_points_per_object);
            gal::write_kitti_bin(syn_out, scene.cloud);
            if (!syn_out_labels.empty()) {
                std::vector<gal::LabeledBox> lbs;
                for (const auto& b : scene.boxes) lbs.push_back({b, "Car"});
                gal::write_labels_json(syn_out_labels, lbs);
            }
            if (!syn_out_truth.empty()) {
                const gal::GridSpec spec =
                    gal::GridSpec::from_roi(syn_opts.roi, syn_opts.cell);
                std::vector<double> truth(spec.cell_count());
                std::vector<std::uint8_t> valid(spec.cell_count(), 1);
                for (int i = 0; i < spec.rows; ++i) {
                    for (int j = 0; j < spec.cols; ++j) {
                        truth[spec.index(i, j)] = terrain.ground_z(
                            spec.cell_center_x(i), spec.cell_center_y(j));
                    }
                }
                gal::write_grid(syn_out_truth, spec, truth, valid);
            }
            std::cout << "synth: " << scene.cloud.size() << " points, "
                      << scene.boxes.size() << " objects -> " << syn_out << "\n";
        }

        if (bench->parsed()) {
            gal::TerrainSpec terrain;
            terrain.z0 = -1.7;
            terrain.noise_sigma = ben_sigma;
            terrain.seed = ben_opts.seed;
            const double area = (ben_opts.roi.x_max - ben_opts.roi.x_min) *
                                (ben_opts.roi.y_max - ben_opts.roi.y_min);
            terrain.point_density = static_cast<double>(ben_points) / area;
            const gal::SceneSample scene =
                gal::generate_scene(terrain, {}, ben_opts.roi);
            const gal::GridSpec spec =
                gal::GridSpec::from_roi(ben_opts.roi, ben_opts.cell);
            gal::FilterConfig filter;
            filter.half_window_x = ben_window;
            filter.half_window_y = ben_window;
            gal::RansacConfig ransac;
            ransac.iterations = ben_iters;
            ransac.inlier_threshold = ben_threshold;
            ransac.seed = ben_opts.seed;
            const gal::GroundBench result = gal::bench_ground(
                scene.cloud, spec, filter, ransac, ben_reps, 5);

            std::cout << "method          median_ms   p95_ms   reps   points\n";
            for (const gal::BenchReport* rep : {&result.surface, &result.plane}) {
                std::printf("%-15s %9.3f %8.3f %6d %8zu\n", rep->method.c_str(),
                            rep->median_ms, rep->p95_ms, rep->reps,
                            rep->cloud_size);
            }
            std::printf("speedup %.2fx\n", result.speedup);

            if (!ben_json.empty()) {
                json doc = {
                    {"surface",
                     {{"method", result.surface.method},
                      {"median_ms", result.surface.median_ms},
                      {"p95_ms", result.surface.p95_ms},
                      {"reps", result.surface.reps},
                      {"points", result.surface.cloud_size}}},
                    {"plane",
                     {{"method", result.plane.method},
                      {"median_ms", result.plane.median_ms},
                      {"p95_ms", result.plane.p95_ms},
                      {"reps", result.plane.reps},
                      {"points", result.plane.cloud_size}}},
                    {"speedup", result.speedup}};
                std::ofstream out(ben_json + ".tmp");
                out << doc.dump(2) << "\n";
                out.close();
                std::filesystem::rename(ben_json + ".tmp", ben_json);
            }
        }
    } catch (const gal::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gal::FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
