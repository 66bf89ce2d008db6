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

#include "scene_placer/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "scene_placer/error.hpp"

namespace scene_placer {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw ParseError(e.what(), e.byte);
  }
}

[[noreturn]] void schema_error(const std::string &what) {
  throw Error(ErrorCode::kSchemaError, what);
}

const json &require(const json &obj, const char *key, const char *context) {
  if (!obj.is_object()) schema_error(std::string(context) + " is not an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    schema_error(std::string(context) + " is missing \"" + key + "\"");
  }
  return *it;
}

template <typename T>
T get_as(const json &obj, const char *key, const char *context) {
  const auto &v = require(obj, key, context);
  try {
    return v.get<T>();
  } catch (const json::exception &) {
    schema_error(std::string(context) + ".\"" + key + "\" has the wrong type");
  }
}

template <typename T>
T get_or(const json &obj, const char *key, T fallback, const char *context) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return get_as<T>(obj, key, context);
}

std::string dump(const ordered_json &doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// PGM

struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;
};

PgmHeader parse_pgm_header(std::string_view bytes) {
  auto fail = [](const std::string &what) -> PgmHeader {
    throw Error(ErrorCode::kFormatError, "PGM: " + what);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    return fail("expected binary P5 magic");
  }
  std::size_t pos = 2;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char *name) {
    skip_space();
    long long v = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1 << 20) fail(std::string(name) + " out of range");
      ++pos;
      ++digits;
    }
    if (digits == 0) fail(std::string("missing ") + name);
    return static_cast<int>(v);
  };
  PgmHeader h;
  h.width = read_int("width");
  h.height = read_int("height");
  h.maxval = read_int("maxval");
  if (pos >= bytes.size() ||
      !(bytes[pos] == ' ' || bytes[pos] == '\n' || bytes[pos] == '\t' ||
        bytes[pos] == '\r')) {
    fail("missing separator after header");
  }
  h.data_offset = pos + 1;
  return h;
}

void check_payload(std::string_view bytes, const PgmHeader &h,
                   std::size_t bytes_per_pixel) {
  const std::size_t expected = static_cast<std::size_t>(h.width) * h.height *
                               bytes_per_pixel;
  const std::size_t actual = bytes.size() - h.data_offset;
  if (actual != expected) {
    throw Error(ErrorCode::kFormatError,
                "PGM: expected " + std::to_string(expected) +
                    " data bytes, found " + std::to_string(actual));
  }
}

std::string pgm_header(int width, int height, int maxval) {
  return "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n" +
         std::to_string(maxval) + "\n";
}

const json &array_at(const json &doc, const char *key) {
  const auto &v = doc.at(key);
  if (!v.is_array()) schema_error(std::string("\"") + key + "\" is not an array");
  return v;
}

std::string camera_of(const json &img) {
  return get_or<std::string>(img, "camera", "default", "image");
}

}  // namespace

// ---------------------------------------------------------------------------
// Files

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return std::move(ss).str();
}

void write_file_atomic(const fs::path &path, std::string_view bytes) {
  const auto tag = std::hash<std::thread::id>{}(std::this_thread::get_id());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(tag);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot rename onto " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Annotations

Dataset parse_annotations(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) schema_error("annotation document is not an object");

  Dataset ds;
  std::set<int> category_ids;
  if (doc.contains("categories")) {
    for (const auto &c : array_at(doc, "categories")) {
      Category cat{get_as<int>(c, "id", "category"),
                   get_or<std::string>(c, "name", "", "category")};
      if (!category_ids.insert(cat.id).second) {
        schema_error("duplicate category id " + std::to_string(cat.id));
      }
      ds.categories.push_back(std::move(cat));
    }
  }
  std::sort(ds.categories.begin(), ds.categories.end(),
            [](const auto &a, const auto &b) { return a.id < b.id; });

  std::map<std::int64_t, AnnotatedFrame> frames;
  if (doc.contains("images")) {
    for (const auto &img : array_at(doc, "images")) {
      AnnotatedFrame f;
      f.frame_id = get_as<std::int64_t>(img, "id", "image");
      f.width = get_as<int>(img, "width", "image");
      f.height = get_as<int>(img, "height", "image");
      if (f.width <= 0 || f.height <= 0) {
        schema_error("image " + std::to_string(f.frame_id) +
                     " has non-positive size");
      }
      f.file_name = get_or<std::string>(img, "file_name", "", "image");
      f.camera_id = camera_of(img);
      f.depth_path = get_or<std::string>(img, "depth_path", "", "image");
      f.semantic_path = get_or<std::string>(img, "semantic_path", "", "image");
      const auto id = f.frame_id;
      if (!frames.emplace(id, std::move(f)).second) {
        schema_error("duplicate image id " + std::to_string(id));
      }
    }
  }

  std::map<std::int64_t, std::vector<Annotation>> per_frame;
  if (doc.contains("annotations")) {
    for (const auto &a : array_at(doc, "annotations")) {
      Annotation ann;
      ann.id = get_as<std::int64_t>(a, "id", "annotation");
      const auto image_id = get_as<std::int64_t>(a, "image_id", "annotation");
      ann.class_id = get_as<int>(a, "category_id", "annotation");
      const auto bbox = get_as<std::vector<double>>(a, "bbox", "annotation");
      ann.mask_path = get_or<std::string>(a, "mask", "", "annotation");
      if (!category_ids.contains(ann.class_id)) {
        schema_error("annotation " + std::to_string(ann.id) +
                     " references unknown category " +
                     std::to_string(ann.class_id));
      }
      const auto frame = frames.find(image_id);
      if (frame == frames.end()) {
        schema_error("annotation " + std::to_string(ann.id) +
                     " references unknown image " + std::to_string(image_id));
      }
      if (bbox.size() != 4 || !(bbox[2] > 0) || !(bbox[3] > 0)) {
        schema_error("annotation " + std::to_string(ann.id) +
                     " has an invalid bbox");
      }
      const BBox box = BBox::from_corner(bbox[0], bbox[1], bbox[2], bbox[3]);
      const auto &f = frame->second;
      if (box.left() < 0 || box.top() < 0 || box.right() > f.width ||
          box.bottom() > f.height) {
        const auto clipped = clip_to_frame(box, f.width, f.height);
        if (!clipped) {
          schema_error("annotation " + std::to_string(ann.id) +
                       " lies outside its image");
        }
        ann.box = *clipped;
      } else {
        ann.box = box;
      }
      per_frame[image_id].push_back(std::move(ann));
    }
  }

  for (auto &[id, f] : frames) {
    auto it = per_frame.find(id);
    if (it != per_frame.end()) {
      f.annotations = std::move(it->second);
      std::stable_sort(f.annotations.begin(), f.annotations.end(),
                       [](const auto &a, const auto &b) { return a.id < b.id; });
    }
    ds.frames.push_back(std::move(f));
  }
  return ds;
}

Dataset read_annotations(const fs::path &path) {
  return parse_annotations(read_file(path));
}

std::string annotations_to_json(const Dataset &dataset) {
  ordered_json images = ordered_json::array();
  ordered_json annotations = ordered_json::array();
  std::vector<const AnnotatedFrame *> frames;
  for (const auto &f : dataset.frames) frames.push_back(&f);
  std::stable_sort(frames.begin(), frames.end(),
                   [](auto a, auto b) { return a->frame_id < b->frame_id; });
  for (const auto *f : frames) {
    ordered_json img;
    img["id"] = f->frame_id;
    img["file_name"] = f->file_name;
    img["width"] = f->width;
    img["height"] = f->height;
    img["camera"] = f->camera_id;
    img["depth_path"] = f->depth_path;
    img["semantic_path"] = f->semantic_path;
    images.push_back(std::move(img));
    std::vector<const Annotation *> anns;
    for (const auto &a : f->annotations) anns.push_back(&a);
    std::stable_sort(anns.begin(), anns.end(),
                     [](auto a, auto b) { return a->id < b->id; });
    for (const auto *a : anns) {
      ordered_json j;
      j["id"] = a->id;
      j["image_id"] = f->frame_id;
      j["category_id"] = a->class_id;
      const auto corner = a->box.to_corner();
      j["bbox"] = {corner[0], corner[1], corner[2], corner[3]};
      if (a->mask_path.empty()) {
        j["mask"] = nullptr;
      } else {
        j["mask"] = a->mask_path;
      }
      annotations.push_back(std::move(j));
    }
  }
  ordered_json categories = ordered_json::array();
  auto cats = dataset.categories;
  std::sort(cats.begin(), cats.end(),
            [](const auto &a, const auto &b) { return a.id < b.id; });
  for (const auto &c : cats) {
    categories.push_back(ordered_json{{"id", c.id}, {"name", c.name}});
  }
  ordered_json doc;
  doc["images"] = std::move(images);
  doc["annotations"] = std::move(annotations);
  doc["categories"] = std::move(categories);
  return dump(doc);
}

void write_annotations(const Dataset &dataset, const fs::path &path) {
  write_file_atomic(path, annotations_to_json(dataset));
}

// ---------------------------------------------------------------------------
// Rasters

DepthGrid decode_depth_pgm(std::string_view bytes, double scale) {
  const auto h = parse_pgm_header(bytes);
  if (h.maxval != 65535) {
    throw Error(ErrorCode::kFormatError,
                "depth PGM must have maxval 65535, got " +
                    std::to_string(h.maxval));
  }
  check_payload(bytes, h, 2);
  std::vector<float> values(static_cast<std::size_t>(h.width) * h.height);
  const auto *data =
      reinterpret_cast<const unsigned char *>(bytes.data() + h.data_offset);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const unsigned raw = (static_cast<unsigned>(data[2 * i]) << 8) |
                         static_cast<unsigned>(data[2 * i + 1]);
    values[i] = static_cast<float>(raw * scale);
  }
  return DepthGrid(h.width, h.height, std::move(values));
}

std::string encode_depth_pgm(const DepthGrid &grid, double scale) {
  if (!(scale > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "depth scale must be > 0");
  }
  std::string out = pgm_header(grid.width(), grid.height(), 65535);
  out.reserve(out.size() + grid.size() * 2);
  for (float v : grid.values()) {
    const double raw = std::round(v / scale);
    if (raw > 65535.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "depth value exceeds 16-bit range at this scale");
    }
    const auto r = static_cast<unsigned>(raw);
    out.push_back(static_cast<char>((r >> 8) & 0xff));
    out.push_back(static_cast<char>(r & 0xff));
  }
  return out;
}

DepthGrid read_depth_grid(const fs::path &path, double scale) {
  return decode_depth_pgm(read_file(path), scale);
}

void write_depth_grid(const DepthGrid &grid, const fs::path &path,
                      double scale) {
  write_file_atomic(path, encode_depth_pgm(grid, scale));
}

LabelGrid decode_label_pgm(std::string_view bytes) {
  const auto h = parse_pgm_header(bytes);
  if (h.maxval != 255) {
    throw Error(ErrorCode::kFormatError,
                "label PGM must have maxval 255, got " +
                    std::to_string(h.maxval));
  }
  check_payload(bytes, h, 1);
  const auto *data =
      reinterpret_cast<const std::uint8_t *>(bytes.data() + h.data_offset);
  return LabelGrid(h.width, h.height,
                   std::vector<std::uint8_t>(
                       data, data + static_cast<std::size_t>(h.width) * h.height));
}

std::string encode_label_pgm(const LabelGrid &grid) {
  std::string out = pgm_header(grid.width(), grid.height(), 255);
  const auto labels = grid.labels();
  out.append(reinterpret_cast<const char *>(labels.data()), labels.size());
  return out;
}

LabelGrid read_label_grid(const fs::path &path) {
  return decode_label_pgm(read_file(path));
}

void write_label_grid(const LabelGrid &grid, const fs::path &path) {
  write_file_atomic(path, encode_label_pgm(grid));
}

InstanceMask read_mask(const fs::path &path) {
  const auto labels = read_label_grid(path);
  InstanceMask mask;
  mask.width = labels.width();
  mask.height = labels.height();
  mask.bits.resize(labels.size());
  const auto src = labels.labels();
  for (std::size_t i = 0; i < src.size(); ++i) mask.bits[i] = src[i] >= 128;
  return mask;
}

void write_mask(const InstanceMask &mask, const fs::path &path) {
  std::vector<std::uint8_t> values(mask.bits.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = mask.bits[i] ? 255 : 0;
  }
  write_label_grid(LabelGrid(mask.width, mask.height, std::move(values)), path);
}

// ---------------------------------------------------------------------------
// Model

namespace {

ordered_json curve_json(const PowerCurve &c) {
  return ordered_json{{"a", c.a}, {"b", c.b}, {"c", c.c},
                      {"lo", c.domain_lo}, {"hi", c.domain_hi}};
}

PowerCurve curve_from(const json &j) {
  return {get_as<double>(j, "a", "curve"), get_as<double>(j, "b", "curve"),
          get_as<double>(j, "c", "curve"), get_as<double>(j, "lo", "curve"),
          get_as<double>(j, "hi", "curve")};
}

const char *prior_name(PriorMode m) {
  return m == PriorMode::kUniform ? "uniform" : "frequency";
}

void validate_histogram(const Histogram &h, const std::string &where) {
  if (h.probs.empty() || h.edges.size() != h.probs.size() + 1) {
    schema_error(where + ": histogram needs n+1 edges for n probs");
  }
  for (std::size_t i = 1; i < h.edges.size(); ++i) {
    if (!(h.edges[i] > h.edges[i - 1])) {
      schema_error(where + ": histogram edges must increase strictly");
    }
  }
  double sum = 0;
  for (double p : h.probs) {
    if (!(p >= 0)) schema_error(where + ": negative histogram probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    schema_error(where + ": histogram probabilities do not sum to 1");
  }
}

}  // namespace

std::string model_to_json(const LocationModel &model) {
  ordered_json doc;
  doc["schema"] = kModelSchemaVersion;
  const auto &cfg = model.config;
  doc["config"] = ordered_json{
      {"tau", cfg.tau},
      {"window", cfg.window},
      {"stride", cfg.stride},
      {"n_bins", cfg.n_bins},
      {"min_samples", cfg.min_samples},
      {"min_window_count", cfg.min_window_count},
      {"drivable_classes", cfg.drivable_classes},
      {"augmentable_classes", cfg.augmentable_classes},
      {"prior", prior_name(cfg.prior)}};
  doc["class_prior"] = ordered_json{{"classes", model.class_prior.classes},
                                    {"probs", model.class_prior.probs}};
  ordered_json cameras = ordered_json::object();
  for (const auto &[cam, classes] : model.cameras) {
    ordered_json entry = ordered_json::object();
    for (const auto &[id, cm] : classes) {
      entry[std::to_string(id)] = ordered_json{
          {"depth", {{"mu", cm.depth.mu}, {"sigma", cm.depth.sigma}}},
          {"height_mu_curve", curve_json(cm.height_mu_curve)},
          {"height_sigma_curve", curve_json(cm.height_sigma_curve)},
          {"aspect", {{"edges", cm.aspect.edges}, {"probs", cm.aspect.probs}}},
          {"count", cm.sample_count},
          {"fallback", cm.fallback}};
    }
    cameras[cam] = std::move(entry);
  }
  doc["cameras"] = std::move(cameras);
  return dump(doc);
}

LocationModel model_from_json(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object() || !doc.contains("schema") ||
      !doc.at("schema").is_number_integer()) {
    throw Error(ErrorCode::kVersionError, "model has no integer \"schema\"");
  }
  const int schema = doc.at("schema").get<int>();
  if (schema != kModelSchemaVersion) {
    throw Error(ErrorCode::kVersionError,
                "unsupported model schema " + std::to_string(schema));
  }

  LocationModel model;
  const auto &cfg = require(doc, "config", "model");
  model.config.tau = get_as<double>(cfg, "tau", "config");
  model.config.window = get_as<double>(cfg, "window", "config");
  model.config.stride = get_as<double>(cfg, "stride", "config");
  model.config.n_bins = get_as<std::size_t>(cfg, "n_bins", "config");
  model.config.min_samples = get_as<std::size_t>(cfg, "min_samples", "config");
  model.config.min_window_count =
      get_as<std::size_t>(cfg, "min_window_count", "config");
  model.config.drivable_classes =
      get_as<std::vector<int>>(cfg, "drivable_classes", "config");
  model.config.augmentable_classes =
      get_as<std::vector<int>>(cfg, "augmentable_classes", "config");
  const auto prior = get_as<std::string>(cfg, "prior", "config");
  if (prior == "uniform") {
    model.config.prior = PriorMode::kUniform;
  } else if (prior == "frequency") {
    model.config.prior = PriorMode::kFrequency;
  } else {
    schema_error("unknown prior mode \"" + prior + "\"");
  }

  const auto &cp = require(doc, "class_prior", "model");
  model.class_prior.classes = get_as<std::vector<int>>(cp, "classes", "class_prior");
  model.class_prior.probs = get_as<std::vector<double>>(cp, "probs", "class_prior");
  if (model.class_prior.classes.size() != model.class_prior.probs.size()) {
    schema_error("class_prior classes and probs differ in length");
  }

  const auto &cams = require(doc, "cameras", "model");
  if (!cams.is_object()) schema_error("\"cameras\" is not an object");
  for (const auto &[cam, classes] : cams.items()) {
    if (!classes.is_object()) schema_error("camera entry is not an object");
    auto &out = model.cameras[cam];
    for (const auto &[key, j] : classes.items()) {
      ClassModel cm;
      try {
        std::size_t used = 0;
        cm.class_id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception &) {
        schema_error("class key \"" + key + "\" is not an integer");
      }
      const auto &dep = require(j, "depth", "class");
      cm.depth = {get_as<double>(dep, "mu", "depth"),
                  get_as<double>(dep, "sigma", "depth")};
      cm.height_mu_curve = curve_from(require(j, "height_mu_curve", "class"));
      cm.height_sigma_curve =
          curve_from(require(j, "height_sigma_curve", "class"));
      const auto &asp = require(j, "aspect", "class");
      cm.aspect.edges = get_as<std::vector<double>>(asp, "edges", "aspect");
      cm.aspect.probs = get_as<std::vector<double>>(asp, "probs", "aspect");
      cm.sample_count = get_as<std::size_t>(j, "count", "class");
      cm.fallback = get_or<bool>(j, "fallback", false, "class");
      validate_histogram(cm.aspect, "camera " + cam + " class " + key);
      out.emplace(cm.class_id, std::move(cm));
    }
  }
  for (int c : model.class_prior.classes) {
    if (model.find(LocationModel::kPooledCamera, c) == nullptr) {
      bool any = false;
      for (const auto &[cam, classes] : model.cameras) {
        any = any || classes.contains(c);
      }
      if (!any) {
        schema_error("class_prior references class " + std::to_string(c) +
                     " with no model");
      }
    }
  }
  return model;
}

void save_model(const LocationModel &model, const fs::path &path) {
  write_file_atomic(path, model_to_json(model));
}

LocationModel load_model(const fs::path &path) {
  return model_from_json(read_file(path));
}

// ---------------------------------------------------------------------------
// Layouts

std::string layout_to_json(const AugmentedLayout &layout) {
  ordered_json proposals = ordered_json::array();
  for (const auto &p : layout.proposals) {
    ordered_json j;
    j["class"] = p.class_id;
    j["d"] = p.d;
    j["box"] = {p.box.cx, p.box.by, p.box.w, p.box.h};
    j["show_prob"] = p.show_prob;
    if (p.mask_path.empty()) {
      j["mask"] = nullptr;
    } else {
      j["mask"] = p.mask_path;
    }
    proposals.push_back(std::move(j));
  }
  ordered_json doc;
  doc["frame_id"] = layout.frame_id;
  doc["proposals"] = std::move(proposals);
  doc["dropped"] = layout.dropped;
  return dump(doc);
}

AugmentedLayout layout_from_json(std::string_view json_text) {
  const json doc = parse_json(json_text);
  AugmentedLayout layout;
  layout.frame_id = get_as<std::int64_t>(doc, "frame_id", "layout");
  layout.dropped = get_as<std::size_t>(doc, "dropped", "layout");
  const auto &props = require(doc, "proposals", "layout");
  if (!props.is_array()) schema_error("\"proposals\" is not an array");
  for (const auto &j : props) {
    PlacementProposal p;
    p.class_id = get_as<int>(j, "class", "proposal");
    p.d = get_as<double>(j, "d", "proposal");
    p.d_sampled = p.d;
    const auto box = get_as<std::vector<double>>(j, "box", "proposal");
    if (box.size() != 4) schema_error("proposal box needs 4 numbers");
    p.box = {box[0], box[1], box[2], box[3]};
    p.show_prob = get_as<double>(j, "show_prob", "proposal");
    p.mask_path = get_or<std::string>(j, "mask", "", "proposal");
    layout.proposals.push_back(std::move(p));
  }
  return layout;
}

void save_layout(const AugmentedLayout &layout, const fs::path &path) {
  write_file_atomic(path, layout_to_json(layout));
}

AugmentedLayout load_layout(const fs::path &path) {
  return layout_from_json(read_file(path));
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

void draw_outline(RgbImage &img, const BBox &box,
                  const std::array<std::uint8_t, 3> &color) {
  if (!box.valid()) return;
  const auto x0 = static_cast<long long>(std::floor(box.left()));
  const auto x1 = static_cast<long long>(std::ceil(box.right())) - 1;
  const auto y0 = static_cast<long long>(std::floor(box.top()));
  const auto y1 = static_cast<long long>(std::ceil(box.bottom())) - 1;
  constexpr long long kStroke = 2;
  auto on_stroke = [&](long long x, long long y) {
    return x - x0 < kStroke || x1 - x < kStroke || y - y0 < kStroke ||
           y1 - y < kStroke;
  };
  const long long cx0 = std::max(x0, 0LL);
  const long long cx1 = std::min(x1, static_cast<long long>(img.width) - 1);
  const long long cy0 = std::max(y0, 0LL);
  const long long cy1 = std::min(y1, static_cast<long long>(img.height) - 1);
  for (long long y = cy0; y <= cy1; ++y) {
    for (long long x = cx0; x <= cx1; ++x) {
      if (!on_stroke(x, y)) continue;
      const auto i = (static_cast<std::size_t>(y) * img.width +
                      static_cast<std::size_t>(x)) * 3;
      img.rgb[i] = color[0];
      img.rgb[i + 1] = color[1];
      img.rgb[i + 2] = color[2];
    }
  }
}

}  // namespace

RgbImage render_overlay(int frame_w, int frame_h,
                        std::span<const BBox> real_boxes,
                        std::span<const BBox> proposal_boxes) {
  if (frame_w <= 0 || frame_h <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "canvas size must be > 0");
  }
  RgbImage img;
  img.width = frame_w;
  img.height = frame_h;
  img.rgb.resize(static_cast<std::size_t>(frame_w) * frame_h * 3);
  for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
    img.rgb[i] = kOverlayBackground[0];
    img.rgb[i + 1] = kOverlayBackground[1];
    img.rgb[i + 2] = kOverlayBackground[2];
  }
  for (const auto &b : real_boxes) draw_outline(img, b, kOverlayReal);
  for (const auto &b : proposal_boxes) draw_outline(img, b, kOverlayProposal);
  return img;
}

std::string encode_ppm(const RgbImage &image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char *>(image.rgb.data()), image.rgb.size());
  return out;
}

void write_ppm(const RgbImage &image, const fs::path &path) {
  write_file_atomic(path, encode_ppm(image));
}

}  // namespace scene_placer
