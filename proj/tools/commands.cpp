// Copyright 2026 The Scene Placer Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "scene_placer/error.hpp"
#include "scene_placer/eval.hpp"
#include "scene_placer/io.hpp"
#include "scene_placer/model.hpp"
#include "scene_placer/parallel.hpp"
#include "scene_placer/refine.hpp"
#include "scene_placer/sampler.hpp"

namespace scene_placer::cli {

namespace fs = std::filesystem;

namespace {

struct Paths {
  std::string annotations;
  std::string depth_dir;
  std::string semantic_dir;
  std::string model;
  std::string layouts;
  std::string mask_dir;
  std::string out;
  std::string out_text;
  int width = 0;
  int height = 0;
};

fs::path resolve(const std::string &dir, const fs::path &base,
                 const std::string &path) {
  const fs::path p(path);
  if (p.is_absolute()) return p;
  if (!dir.empty()) return fs::path(dir) / p;
  return base / p;
}

fs::path parent_of(const std::string &file) {
  const auto parent = fs::path(file).parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

void validate(const RunConfig &c) {
  auto bad = [](const std::string &what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (!(c.tau > 0)) bad("tau must be > 0");
  if (!(c.window > 0)) bad("window must be > 0");
  if (!(c.stride > 0)) bad("stride must be > 0");
  if (c.n_bins < 1) bad("n_bins must be >= 1");
  if (!(c.show_prob >= 0 && c.show_prob <= 1)) bad("show_prob must be in [0, 1]");
  if (!(c.min_visible >= 0 && c.min_visible <= 1)) {
    bad("min_visible must be in [0, 1]");
  }
  if (!(c.min_visible_frac >= 0 && c.min_visible_frac <= 1)) {
    bad("min_visible_frac must be in [0, 1]");
  }
  if (c.max_attempts < 1) bad("max_attempts must be >= 1");
  if (!(c.depth_scale > 0)) bad("depth_scale must be > 0");
  if (c.prior != "uniform" && c.prior != "frequency") {
    bad("prior must be \"uniform\" or \"frequency\"");
  }
  if (c.drivable_classes.empty()) bad("drivable_classes must not be empty");
}

std::optional<DepthGrid> load_depth(const AnnotatedFrame &frame,
                                    const Paths &paths, const fs::path &base,
                                    const RunConfig &cfg) {
  if (frame.depth_path.empty()) return std::nullopt;
  const auto path = resolve(paths.depth_dir, base, frame.depth_path);
  if (!fs::exists(path)) return std::nullopt;
  return read_depth_grid(path, cfg.depth_scale);
}

std::optional<SceneContext> load_scene(const AnnotatedFrame &frame,
                                       const Paths &paths,
                                       const fs::path &base,
                                       const RunConfig &cfg) {
  if (!frame.has_grids()) return std::nullopt;
  auto depth = load_depth(frame, paths, base, cfg);
  const auto sem_path = resolve(paths.semantic_dir, base, frame.semantic_path);
  if (!depth || !fs::exists(sem_path)) return std::nullopt;
  const auto labels = read_label_grid(sem_path);
  if (labels.width() != depth->width() || labels.height() != depth->height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "frame " + std::to_string(frame.frame_id) +
                    ": depth and semantic grids differ in size");
  }
  return SceneContext(frame.width, frame.height, frame.camera_id,
                      std::move(*depth),
                      drivable_mask(labels, cfg.drivable_classes));
}

std::vector<fs::path> layout_files(const std::string &where) {
  std::vector<fs::path> files;
  if (fs::is_directory(where)) {
    for (const auto &entry : fs::directory_iterator(where)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(where)) {
    files.emplace_back(where);
  } else {
    throw Error(ErrorCode::kIoError, "no such layout path " + where);
  }
  return files;
}

std::optional<InstanceMask> find_mask(const PlacementProposal &p,
                                      std::int64_t frame_id, std::size_t index,
                                      const std::string &mask_dir,
                                      const fs::path &base,
                                      std::string &used_path) {
  fs::path path;
  if (!p.mask_path.empty()) {
    path = resolve(mask_dir, base, p.mask_path);
  } else if (!mask_dir.empty()) {
    path = fs::path(mask_dir) /
           (std::to_string(frame_id) + "_" + std::to_string(index) + ".pgm");
    if (!fs::exists(path)) return std::nullopt;
  } else {
    return std::nullopt;
  }
  used_path = path.string();
  return read_mask(path);
}

// Refines proposals in place using masks found for them. Returns the number
// dropped by the visibility filter.
std::size_t apply_masks(std::vector<PlacementProposal> &proposals,
                        std::int64_t frame_id, int frame_w, int frame_h,
                        const std::string &mask_dir, const fs::path &base,
                        const RunConfig &cfg) {
  std::vector<std::optional<InstanceMask>> masks(proposals.size());
  bool any = false;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    std::string used;
    masks[i] = find_mask(proposals[i], frame_id, i, mask_dir, base, used);
    if (masks[i]) {
      proposals[i].mask_path = used;
      any = true;
    }
  }
  if (!any) return 0;
  auto refined =
      refine_proposals(proposals, masks, frame_w, frame_h, cfg.min_visible);
  proposals = std::move(refined.proposals);
  return refined.dropped;
}

int cmd_fit(const Paths &paths, const RunConfig &cfg, std::ostream &out,
            std::ostream &err) {
  const auto dataset = read_annotations(paths.annotations);
  const auto base = parent_of(paths.annotations);
  auto lookup = [&](const AnnotatedFrame &f) {
    return load_depth(f, paths, base, cfg);
  };
  const auto result = fit_model(dataset.frames, lookup, cfg.fit_config());
  save_model(result.model, paths.out);

  for (const auto &[cam, classes] : result.model.cameras) {
    for (const auto &[id, cm] : classes) {
      out << "camera " << cam << " class " << id << ": " << cm.sample_count
          << " samples" << (cm.fallback ? " (fallback to pooled)" : "")
          << "\n";
    }
  }
  for (const auto &w : result.warnings) {
    if (w.kind != FitWarning::Kind::kFallback) err << "warning: " << w.message << "\n";
  }
  out << "wrote " << paths.out << "\n";
  return kExitOk;
}

int cmd_augment(const Paths &paths, const RunConfig &cfg, std::ostream &out,
                std::ostream &err) {
  const auto dataset = read_annotations(paths.annotations);
  const auto model = load_model(paths.model);
  const auto base = parent_of(paths.annotations);
  fs::create_directories(paths.out);
  const auto params = cfg.sampler_params();

  struct FrameOutcome {
    bool skipped = false;
    std::size_t proposals = 0;
    std::size_t dropped = 0;
  };
  const auto &frames = dataset.frames;
  std::vector<FrameOutcome> outcomes(frames.size());
  parallel_for(frames.size(), cfg.jobs, [&](std::size_t i) {
    const auto &frame = frames[i];
    const auto scene = load_scene(frame, paths, base, cfg);
    if (!scene) {
      outcomes[i].skipped = true;
      return;
    }
    auto result = augment_frame(*scene, model, cfg.n_objects,
                                frame_stream(cfg.seed, frame.frame_id), params);
    AugmentedLayout layout;
    layout.frame_id = frame.frame_id;
    layout.dropped = result.dropped;
    layout.proposals = std::move(result.proposals);
    if (!paths.mask_dir.empty()) {
      layout.dropped += apply_masks(layout.proposals, frame.frame_id,
                                    frame.width, frame.height, paths.mask_dir,
                                    base, cfg);
    }
    save_layout(layout, fs::path(paths.out) /
                            (std::to_string(frame.frame_id) + ".json"));
    outcomes[i] = {false, layout.proposals.size(), layout.dropped};
  });

  std::size_t written = 0, skipped = 0, proposals = 0, dropped = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (outcomes[i].skipped) {
      err << "warning: frame " << frames[i].frame_id
          << " has no depth/semantic grids; skipped\n";
      ++skipped;
      continue;
    }
    ++written;
    proposals += outcomes[i].proposals;
    dropped += outcomes[i].dropped;
  }
  out << "frames written: " << written << ", skipped: " << skipped
      << ", proposals: " << proposals << ", dropped: " << dropped << "\n";
  return kExitOk;
}

int cmd_refine(const Paths &paths, const RunConfig &cfg, std::ostream &out,
               std::ostream &) {
  std::map<std::int64_t, std::pair<int, int>> dims;
  if (!paths.annotations.empty()) {
    for (const auto &f : read_annotations(paths.annotations).frames) {
      dims[f.frame_id] = {f.width, f.height};
    }
  }
  fs::create_directories(paths.out);
  std::size_t total_dropped = 0;
  const auto files = layout_files(paths.layouts);
  for (const auto &file : files) {
    auto layout = load_layout(file);
    int w = paths.width;
    int h = paths.height;
    if (const auto it = dims.find(layout.frame_id); it != dims.end()) {
      std::tie(w, h) = it->second;
    }
    if (w <= 0 || h <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no frame size for layout " + file.string() +
                      "; pass --annotations or --width/--height");
    }
    const auto dropped = apply_masks(layout.proposals, layout.frame_id, w, h,
                                     paths.mask_dir, file.parent_path(), cfg);
    layout.dropped += dropped;
    total_dropped += dropped;
    save_layout(layout, fs::path(paths.out) / file.filename());
  }
  out << "layouts refined: " << files.size()
      << ", dropped by occlusion: " << total_dropped << "\n";
  return kExitOk;
}

int cmd_eval(const Paths &paths, const RunConfig &cfg, std::ostream &out,
             std::ostream &err) {
  const auto dataset = read_annotations(paths.annotations);
  const auto model = load_model(paths.model);
  const auto base = parent_of(paths.annotations);
  auto lookup = [&](const AnnotatedFrame &f) {
    return load_depth(f, paths, base, cfg);
  };
  const auto reals = extract_observations(dataset.frames, lookup);

  std::map<std::int64_t, const AnnotatedFrame *> by_id;
  for (const auto &f : dataset.frames) by_id[f.frame_id] = &f;
  std::vector<SceneContext> scenes;
  std::vector<ScoredProposal> proposals;
  for (const auto &file : layout_files(paths.layouts)) {
    const auto layout = load_layout(file);
    const auto it = by_id.find(layout.frame_id);
    std::optional<SceneContext> scene;
    if (it != by_id.end()) scene = load_scene(*it->second, paths, base, cfg);
    if (!scene) {
      err << "warning: layout " << file.string()
          << " has no matching frame with grids; skipped\n";
      continue;
    }
    scenes.push_back(std::move(*scene));
    for (const auto &p : layout.proposals) {
      proposals.push_back({p, scenes.size() - 1});
    }
  }
  const auto report =
      layout_report(reals.observations, proposals, scenes, model, cfg.tau);
  write_file_atomic(paths.out, report_to_json(report));
  const auto text = report_to_text(report);
  if (!paths.out_text.empty()) write_file_atomic(paths.out_text, text);
  out << text;
  return kExitOk;
}

int cmd_render(const Paths &paths, const RunConfig &, std::ostream &out,
               std::ostream &) {
  const auto layout = load_layout(paths.layouts);
  int w = paths.width;
  int h = paths.height;
  std::vector<BBox> reals;
  if (!paths.annotations.empty()) {
    for (const auto &f : read_annotations(paths.annotations).frames) {
      if (f.frame_id != layout.frame_id) continue;
      if (w <= 0 || h <= 0) {
        w = f.width;
        h = f.height;
      }
      for (const auto &a : f.annotations) reals.push_back(a.box);
    }
  }
  if (w <= 0 || h <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame size unknown; pass --width/--height or --annotations");
  }
  std::vector<BBox> proposed;
  for (const auto &p : layout.proposals) proposed.push_back(p.box);
  write_ppm(render_overlay(w, h, reals, proposed), paths.out);
  out << "wrote " << paths.out << "\n";
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kInvalidGrid:
    case ErrorCode::kInsufficientData:
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaError:
    case ErrorCode::kFormatError:
    case ErrorCode::kVersionError:
    case ErrorCode::kIoError:
      return kExitUsage;
    default:
      return kExitInternal;
  }
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Scene-aware object placement: fit a location model from "
               "annotated frames and sample new object placements.",
               "scene_placer"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  RunConfig flags;
  std::string config_path;
  std::vector<std::pair<CLI::Option *, std::function<void(RunConfig &)>>>
      overrides;
  auto bind = [&](CLI::Option *opt, auto member) {
    opt->capture_default_str();
    overrides.emplace_back(
        opt, [&flags, member](RunConfig &c) { c.*member = flags.*member; });
  };

  app.add_option("--config", config_path,
                 "Flat JSON file with RunConfig fields; flags override it")
      ->check(CLI::ExistingFile);
  bind(app.add_option("--drivable-classes", flags.drivable_classes,
                      "Label values that count as drivable space")
           ->delimiter(','),
       &RunConfig::drivable_classes);
  bind(app.add_option("--augmentable-classes", flags.augmentable_classes,
                      "Classes to model (empty: all observed)")
           ->delimiter(','),
       &RunConfig::augmentable_classes);
  bind(app.add_option("--tau", flags.tau, "Placement band half-width (depth units)"),
       &RunConfig::tau);
  bind(app.add_option("--objects-per-frame", flags.n_objects,
                      "Proposals generated per frame"),
       &RunConfig::n_objects);
  bind(app.add_option("--show-prob", flags.show_prob,
                      "Probability of showing each added object at training time"),
       &RunConfig::show_prob);
  bind(app.add_option("--n-bins", flags.n_bins, "Aspect-ratio histogram bins"),
       &RunConfig::n_bins);
  bind(app.add_option("--window", flags.window, "Height profile window width"),
       &RunConfig::window);
  bind(app.add_option("--stride", flags.stride, "Height profile window stride"),
       &RunConfig::stride);
  bind(app.add_option("--min-samples", flags.min_samples,
                      "Samples per camera and class before pooled fallback"),
       &RunConfig::min_samples);
  bind(app.add_option("--min-window-count", flags.min_window_count,
                      "Objects needed for a height profile window"),
       &RunConfig::min_window_count);
  bind(app.add_option("--min-visible-frac", flags.min_visible_frac,
                      "Minimum in-frame fraction of a proposed box"),
       &RunConfig::min_visible_frac);
  bind(app.add_option("--max-attempts", flags.max_attempts,
                      "Resampling attempts per proposal"),
       &RunConfig::max_attempts);
  bind(app.add_option("--min-visible", flags.min_visible,
                      "Minimum visible mask fraction after compositing"),
       &RunConfig::min_visible);
  bind(app.add_option("--depth-scale", flags.depth_scale,
                      "Depth PGM scale: value = raw * scale"),
       &RunConfig::depth_scale);
  bind(app.add_option("--prior", flags.prior, "Class prior: uniform or frequency"),
       &RunConfig::prior);
  bind(app.add_option("--seed", flags.seed, "Master random seed"),
       &RunConfig::seed);
  bind(app.add_option("--jobs", flags.jobs,
                      "Worker threads (env SCENE_PLACER_JOBS)"),
       &RunConfig::jobs);

  Paths paths;
  auto *fit = app.add_subcommand("fit", "Fit a location model");
  fit->add_option("--annotations", paths.annotations, "COCO-style annotations")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--depth-dir", paths.depth_dir, "Directory of depth PGMs");
  fit->add_option("--semantic-dir", paths.semantic_dir,
                  "Directory of label PGMs (not needed for fitting)");
  fit->add_option("--out", paths.out, "Output model JSON")->required();

  auto *augment = app.add_subcommand("augment", "Propose objects per frame");
  augment->add_option("--annotations", paths.annotations)
      ->required()
      ->check(CLI::ExistingFile);
  augment->add_option("--model", paths.model)->required()->check(CLI::ExistingFile);
  augment->add_option("--depth-dir", paths.depth_dir);
  augment->add_option("--semantic-dir", paths.semantic_dir);
  augment->add_option("--mask-dir", paths.mask_dir,
                      "Masks named <frame_id>_<index>.pgm to refine with");
  augment->add_option("--out", paths.out, "Output layout directory")->required();

  auto *refine = app.add_subcommand(
      "refine", "Refine layout boxes with masks and resolve occlusions");
  refine->add_option("--layouts", paths.layouts, "Layout file or directory")
      ->required();
  refine->add_option("--annotations", paths.annotations, "Source of frame sizes")
      ->check(CLI::ExistingFile);
  refine->add_option("--width", paths.width);
  refine->add_option("--height", paths.height);
  refine->add_option("--mask-dir", paths.mask_dir);
  refine->add_option("--out", paths.out, "Output layout directory")->required();

  auto *eval = app.add_subcommand("eval", "Compare layouts against real data");
  eval->add_option("--annotations", paths.annotations)
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--layouts", paths.layouts)->required();
  eval->add_option("--model", paths.model)->required()->check(CLI::ExistingFile);
  eval->add_option("--depth-dir", paths.depth_dir);
  eval->add_option("--semantic-dir", paths.semantic_dir);
  eval->add_option("--out", paths.out, "Report JSON")->required();
  eval->add_option("--out-text", paths.out_text, "Report as text");

  auto *render = app.add_subcommand("render", "Draw a layout as a PPM overlay");
  render->add_option("--layout", paths.layouts)->required()->check(CLI::ExistingFile);
  render->add_option("--annotations", paths.annotations,
                     "Frame size and ground-truth boxes")
      ->check(CLI::ExistingFile);
  render->add_option("--width", paths.width);
  render->add_option("--height", paths.height);
  render->add_option("--out", paths.out, "Output PPM")->required();

  std::vector<std::string> argv_storage{"scene_placer"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (auto &s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_json(cfg, read_file(config_path));
    const char *env = std::getenv("SCENE_PLACER_JOBS");
    if (env != nullptr && *env != '\0') {
      try {
        cfg.jobs = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception &) {
        throw Error(ErrorCode::kInvalidArgument,
                    "SCENE_PLACER_JOBS is not a number");
      }
    }
    for (auto &[opt, apply] : overrides) {
      if (opt->count() > 0) apply(cfg);
    }
    if (cfg.jobs == 0) cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
    validate(cfg);

    if (*fit) return cmd_fit(paths, cfg, out, err);
    if (*augment) return cmd_augment(paths, cfg, out, err);
    if (*refine) return cmd_refine(paths, cfg, out, err);
    if (*eval) return cmd_eval(paths, cfg, out, err);
    if (*render) return cmd_render(paths, cfg, out, err);
    return kExitUsage;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace scene_placer::cli
