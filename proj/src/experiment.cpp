#include "tomo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "tomo/errors.hpp"
#include "tomo/io.hpp"
#include "tomo/metrics.hpp"
#include "tomo/png_io.hpp"
#include "tomo/projector.hpp"

namespace fs = std::filesystem;

namespace tomo {
namespace {

const char* kMethods[] = {"nearest", "linear", "optimize"};

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_field(const std::string& key, const std::string& value,
                            const std::string& constraint) {
  throw ValidationError("config field '" + key + "': " + constraint +
                        ", got '" + value + "'");
}

long long parse_int(const std::string& key, const std::string& value,
                    long long min_value) {
  long long v = 0;
  std::size_t used = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    bad_field(key, value, "must be an integer");
  }
  if (used != value.size()) bad_field(key, value, "must be an integer");
  if (v < min_value)
    bad_field(key, value, "must be >= " + std::to_string(min_value));
  return v;
}

double parse_double(const std::string& key, const std::string& value,
                    double min_value) {
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    bad_field(key, value, "must be a number");
  }
  if (used != value.size()) bad_field(key, value, "must be a number");
  if (!(v >= min_value))
    bad_field(key, value, "must be >= " + std::to_string(min_value));
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  std::size_t used = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    bad_field(key, value, "must be a non-negative integer");
  }
  if (used != value.size())
    bad_field(key, value, "must be a non-negative integer");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  bad_field(key, value, "must be 'true' or 'false'");
}

/// "1/2,1/3" -> {2, 3}.
std::vector<int> parse_doses(const std::string& key,
                             const std::string& value) {
  std::vector<int> out;
  std::stringstream parts(value);
  std::string item;
  while (std::getline(parts, item, ',')) {
    const std::string d = trim(item);
    if (d.size() < 3 || d[0] != '1' || d[1] != '/')
      bad_field(key, value, "must be a comma-separated list of fractions 1/k");
    const long long k = parse_int(key, d.substr(2), 2);
    out.push_back(static_cast<int>(k));
  }
  if (out.empty()) bad_field(key, value, "must name at least one fraction");
  return out;
}

std::string dose_label(int keep_every) {
  return "1/" + std::to_string(keep_every);
}

std::string dose_dir(int keep_every) {
  return "dose_1_" + std::to_string(keep_every);
}

std::string format_g9(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int covering_num_bins(const ExperimentConfig& cfg) {
  return static_cast<int>(
      std::ceil(cfg.image_size * std::sqrt(2.0)));
}

ScanGeometry scan_geometry(const ExperimentConfig& cfg) {
  return make_full_scan(cfg.num_angles, cfg.image_size,
                        covering_num_bins(cfg));
}

Phantom resolve_phantom(const ExperimentConfig& cfg) {
  if (cfg.phantom == "shepp_logan") return shepp_logan();
  return load_phantom(cfg.phantom);
}

double image_max(const Image& img) {
  double m = 0.0;
  for (double v : img.data) m = std::max(m, v);
  return m;
}

double sino_max(const Sinogram& s) {
  double m = 0.0;
  for (double v : s.data) m = std::max(m, v);
  return m;
}

void make_dirs(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec)
    throw ValidationError("cannot create output directory '" + p.string() +
                          "': " + ec.message());
}

std::vector<std::uint64_t> run_seeds(const ExperimentConfig& cfg) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < cfg.repeats; ++i)
    seeds.push_back(cfg.seed + static_cast<std::uint64_t>(i));
  return seeds;
}

fs::path seed_dir(const ExperimentConfig& cfg, std::uint64_t seed) {
  return fs::path(cfg.output_dir) / ("seed_" + std::to_string(seed));
}

double resolve_sigma(const ExperimentConfig& cfg, const Sinogram& clean) {
  if (cfg.noise == NoiseKind::none) return 0.0;
  if (cfg.noise_sigma_set) return cfg.noise_sigma;
  return cfg.noise_sigma_rel * sino_max(clean);
}

double ground_truth_range(const Image& gt) {
  const double m = image_max(gt);
  return m > 0.0 ? m : 1.0;
}

Image load_ground_truth(const ExperimentConfig& cfg) {
  return read_image((fs::path(cfg.output_dir) / "ground_truth.img").string());
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "phantom") {
    if (value.empty()) bad_field(key, value, "must be non-empty");
    phantom = value;
  } else if (key == "image_size") {
    image_size = static_cast<int>(parse_int(key, value, 2));
  } else if (key == "num_angles") {
    num_angles = static_cast<int>(parse_int(key, value, 2));
  } else if (key == "dose_fraction") {
    keep_every = parse_doses(key, value);
  } else if (key == "noise") {
    if (value == "none") noise = NoiseKind::none;
    else if (value == "gaussian") noise = NoiseKind::gaussian;
    else bad_field(key, value, "must be 'none' or 'gaussian'");
  } else if (key == "noise_sigma") {
    noise_sigma = parse_double(key, value, 0.0);
    noise_sigma_set = true;
  } else if (key == "noise_sigma_rel") {
    noise_sigma_rel = parse_double(key, value, 0.0);
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else if (key == "repeats") {
    repeats = static_cast<int>(parse_int(key, value, 1));
  } else if (key == "filter") {
    if (value == "ram_lak") filter.kind = FilterKind::ram_lak;
    else if (value == "hann" || value == "hann_windowed_ram_lak")
      filter.kind = FilterKind::hann;
    else bad_field(key, value, "must be 'ram_lak' or 'hann'");
  } else if (key == "learning_rate") {
    optimizer.learning_rate = parse_double(key, value, 0.0);
  } else if (key == "max_iterations") {
    optimizer.max_iterations = static_cast<int>(parse_int(key, value, 0));
  } else if (key == "loss") {
    if (value == "mae") optimizer.loss = LossKind::mae;
    else if (value == "mse") optimizer.loss = LossKind::mse;
    else bad_field(key, value, "must be 'mae' or 'mse'");
  } else if (key == "plateau_patience") {
    optimizer.plateau_patience = static_cast<int>(parse_int(key, value, 1));
  } else if (key == "plateau_rel_tol") {
    optimizer.plateau_rel_tol = parse_double(key, value, 0.0);
    if (optimizer.plateau_rel_tol <= 0.0)
      bad_field(key, value, "must be > 0");
  } else if (key == "clamp_nonnegative") {
    optimizer.clamp_nonnegative = parse_bool(key, value);
  } else if (key == "init") {
    if (value == "linear") optimizer.init = InitKind::linear;
    else if (value == "nearest") optimizer.init = InitKind::nearest;
    else bad_field(key, value, "must be 'linear' or 'nearest'");
  } else if (key == "eval_mask") {
    if (value == "disk") eval_mask = EvalMask::disk;
    else if (value == "full") eval_mask = EvalMask::full;
    else bad_field(key, value, "must be 'disk' or 'full'");
  } else if (key == "output_dir") {
    if (value.empty()) bad_field(key, value, "must be non-empty");
    output_dir = value;
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "phantom",          "image_size",       "num_angles",
      "dose_fraction",    "noise",            "noise_sigma",
      "noise_sigma_rel",  "seed",             "repeats",
      "filter",           "learning_rate",    "max_iterations",
      "loss",             "plateau_patience", "plateau_rel_tol",
      "clamp_nonnegative", "init",            "eval_mask",
      "output_dir"};
  return k;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("config file not found: " + path);
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string entry = trim(line);
    if (entry.empty()) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": expected 'key = value'");
    cfg.set(trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)));
  }
  return cfg;
}

void run_simulate(const ExperimentConfig& cfg) {
  const Phantom phantom = resolve_phantom(cfg);
  const Image gt = rasterize(phantom, cfg.image_size);
  const ScanGeometry g = scan_geometry(cfg);
  const Sinogram clean = analytic_sinogram(phantom, g);
  const double sigma = resolve_sigma(cfg, clean);

  make_dirs(cfg.output_dir);
  write_image((fs::path(cfg.output_dir) / "ground_truth.img").string(), gt);
  write_png16((fs::path(cfg.output_dir) / "ground_truth.png").string(), gt,
              ground_truth_range(gt));

  for (std::uint64_t s : run_seeds(cfg)) {
    NoiseModel noise{cfg.noise, sigma, s};
    const Sinogram measured = simulate_measurement(phantom, g, noise);
    const fs::path dir = seed_dir(cfg, s);
    make_dirs(dir);
    write_sinogram((dir / "full.sino").string(), measured, g, s);
    std::cout << "simulate: seed " << s << " -> " << (dir / "full.sino").string()
              << " (" << g.num_angles() << " angles, " << g.num_bins()
              << " bins, sigma " << format_g9(sigma) << ")\n";
  }
}

void run_inpaint(const ExperimentConfig& cfg, const std::string& method) {
  std::vector<std::string> methods;
  if (method.empty()) {
    methods.assign(std::begin(kMethods), std::end(kMethods));
  } else if (method == "nearest" || method == "linear" ||
             method == "optimize") {
    methods.push_back(method);
  } else {
    throw ValidationError(
        "invalid method '" + method +
        "': must be 'nearest', 'linear', or 'optimize'");
  }

  const Image gt = load_ground_truth(cfg);
  const double range = ground_truth_range(gt);

  for (std::uint64_t s : run_seeds(cfg)) {
    const fs::path dir = seed_dir(cfg, s);
    const SinogramFile full = read_sinogram((dir / "full.sino").string());
    for (int k : cfg.keep_every) {
      const AngleSplit split = split_by_stride(full.geometry, k, 0);
      const InpaintProblem problem =
          make_problem(full.geometry, split, full.sinogram);
      const fs::path ddir = dir / dose_dir(k);
      make_dirs(ddir);
      for (const std::string& m : methods) {
        Sinogram block;
        if (m == "nearest") {
          block = interpolate_nearest(problem);
        } else if (m == "linear") {
          block = interpolate_linear(problem);
        } else {
          const InpaintState state =
              optimize(problem, cfg.optimizer, cfg.filter);
          block = state.missing;
          write_loss_csv((ddir / "loss_optimize.csv").string(),
                         state.loss_history);
          std::cout << "inpaint: seed " << s << " dose " << dose_label(k)
                    << " optimize: " << state.iteration << " iterations"
                    << (state.loss_history.empty()
                            ? std::string()
                            : ", final loss " +
                                  format_g9(state.loss_history.back()))
                    << "\n";
        }
        const Sinogram completed = assemble_full(problem, block);
        write_sinogram((ddir / ("completed_" + m + ".sino")).string(),
                       completed, full.geometry, full.noise_seed);
        const Image recon = fbp(completed, full.geometry, cfg.filter);
        write_image((ddir / ("recon_" + m + ".img")).string(), recon);
        write_png16((ddir / ("recon_" + m + ".png")).string(), recon, range);
      }
    }
  }
}

void run_evaluate(const ExperimentConfig& cfg) {
  const Image gt = load_ground_truth(cfg);
  const double range = ground_truth_range(gt);
  const Mask disk = inscribed_disk_mask(gt.size);
  const Mask* mask = cfg.eval_mask == EvalMask::disk ? &disk : nullptr;

  // (dose, method) -> per-seed metric values, in seed order.
  std::map<std::pair<int, std::string>, std::vector<MetricReport>> by_cell;

  for (std::uint64_t s : run_seeds(cfg)) {
    const fs::path dir = seed_dir(cfg, s);
    const SinogramFile full = read_sinogram((dir / "full.sino").string());
    std::ofstream csv(dir / "metrics.csv");
    if (!csv)
      throw ValidationError("cannot write metrics CSV in " + dir.string());
    csv << metric_csv_header() << "\n";
    for (int k : cfg.keep_every) {
      const fs::path ddir = dir / dose_dir(k);
      for (const char* m : kMethods) {
        const fs::path img_path = ddir / ("recon_" + std::string(m) + ".img");
        if (!fs::exists(img_path))
          throw MissingInputError("evaluate: missing reconstruction " +
                                  img_path.string() +
                                  " (run inpaint first)");
      }

      // Sparse panel: reconstruction from the measured rows alone.
      const AngleSplit split = split_by_stride(full.geometry, k, 0);
      const InpaintProblem problem =
          make_problem(full.geometry, split, full.sinogram);
      const ScanGeometry gj = full.geometry.restricted(split.measured_idx);
      const Image sparse = fbp(problem.measured, gj, cfg.filter);
      write_image((ddir / "recon_sparse.img").string(), sparse);
      write_png16((ddir / "recon_sparse.png").string(), sparse, range);

      std::vector<Image> recons;
      recons.reserve(3);
      for (const char* m : kMethods) {
        const fs::path img_path = ddir / ("recon_" + std::string(m) + ".img");
        recons.push_back(read_image(img_path.string()));
        MetricReport r;
        r.method = m;
        r.dose_fraction = dose_label(k);
        r.psnr_db = psnr(gt, recons.back(), range, mask);
        r.ssim = ssim(gt, recons.back(), range);
        csv << metric_csv_row(r) << "\n";
        std::cout << "evaluate: seed " << s << " " << metric_csv_row(r)
                  << "\n";
        by_cell[{k, r.method}].push_back(r);
      }
      write_grid_png16(
          (ddir / "grid.png").string(),
          {&gt, &sparse, &recons[0], &recons[1], &recons[2]}, range);
    }
  }

  if (cfg.repeats > 1) {
    std::ofstream csv(fs::path(cfg.output_dir) / "metrics_summary.csv");
    if (!csv)
      throw ValidationError("cannot write metrics_summary.csv in " +
                            cfg.output_dir);
    csv << "method,dose_fraction,psnr_db_mean,psnr_db_std,ssim_mean,"
           "ssim_std,repeats\n";
    for (int k : cfg.keep_every) {
      for (const char* m : kMethods) {
        const std::vector<MetricReport>& cell = by_cell[{k, m}];
        const double n = static_cast<double>(cell.size());
        double psnr_mean = 0.0, ssim_mean = 0.0;
        for (const MetricReport& r : cell) {
          psnr_mean += r.psnr_db / n;
          ssim_mean += r.ssim / n;
        }
        double psnr_var = 0.0, ssim_var = 0.0;
        for (const MetricReport& r : cell) {
          psnr_var += (r.psnr_db - psnr_mean) * (r.psnr_db - psnr_mean);
          ssim_var += (r.ssim - ssim_mean) * (r.ssim - ssim_mean);
        }
        csv << m << "," << dose_label(k) << "," << format_g9(psnr_mean) << ","
            << format_g9(std::sqrt(psnr_var / (n - 1.0))) << ","
            << format_g9(ssim_mean) << ","
            << format_g9(std::sqrt(ssim_var / (n - 1.0))) << ","
            << cell.size() << "\n";
      }
    }
  }
}

}  // namespace tomo
