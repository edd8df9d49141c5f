#include "tileprop/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "tileprop/annotations.hpp"
#include "tileprop/detector.hpp"
#include "tileprop/error.hpp"
#include "tileprop/eval.hpp"
#include "tileprop/exchange.hpp"
#include "tileprop/manifest.hpp"
#include "tileprop/overlay.hpp"
#include "tileprop/parallel.hpp"
#include "tileprop/pipeline.hpp"
#include "tileprop/pnm.hpp"
#include "tileprop/report.hpp"
#include "tileprop/synth.hpp"

namespace fs = std::filesystem;

namespace tileprop {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

struct LoadedScene {
  std::string id;
  int width;
  int height;
  std::vector<GroundTruthObject> gt;
};

LoadedScene load_scene(const fs::path& dir, const std::string& id) {
  const auto map = InstanceMap::from_raster(read_pnm(dir / (id + ".pgm")));
  return {id, map.width, map.height, extract_instances(map)};
}

std::vector<LoadedScene> load_scenes(const fs::path& dir, unsigned jobs) {
  const auto ids = list_scene_ids(dir);
  std::vector<std::optional<LoadedScene>> loaded(ids.size());
  parallel_for(ids.size(), jobs, [&](std::size_t i) { loaded[i] = load_scene(dir, ids[i]); });
  std::vector<LoadedScene> scenes;
  scenes.reserve(ids.size());
  for (auto& s : loaded) scenes.push_back(std::move(*s));
  return scenes;
}

std::vector<std::string> sorted_files(const fs::path& dir, const std::string& extension) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string join(const std::vector<std::string>& items, std::size_t limit = 20) {
  std::string out;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) out += (i ? ", " : "") + items[i];
  if (items.size() > limit) out += ", ... (" + std::to_string(items.size()) + " total)";
  return out;
}

/// Records of a JSONL file or of every *.jsonl file of a directory, grouped
/// by image id. `present` receives the stems of the files read.
std::map<std::string, std::vector<ProposalRecord>> read_grouped(const fs::path& path,
                                                                std::set<std::string>* present) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& name : sorted_files(path, ".jsonl")) files.push_back(path / name);
  } else if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else {
    throw IoError("no such proposals file or directory: " + path.string());
  }
  std::map<std::string, std::vector<ProposalRecord>> grouped;
  for (const auto& file : files) {
    if (present) present->insert(file.stem().string());
    for (auto& r : read_proposals(file)) grouped[r.image_id].push_back(std::move(r));
  }
  return grouped;
}

nlohmann::ordered_json profile_json(const DetectorProfile& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  j["input_w"] = p.input_w;
  j["input_h"] = p.input_h;
  j["levels"] = p.levels;
  j["window_cells"] = p.window_cells;
  j["fill_min"] = p.fill_min;
  j["fill_max"] = p.fill_max;
  j["jitter"] = p.jitter;
  j["objectness_noise"] = p.objectness_noise;
  j["seed"] = p.seed;
  return j;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  std::string out;
  int count = 1;
  std::uint64_t seed = 0;
  SceneSpec spec;
  unsigned jobs = 1;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  if (o.count < 0) throw UsageError("--count must be non-negative");
  SceneSpec base = o.spec;
  base.seed = 0;
  base.validate();
  const fs::path dir(o.out);
  ensure_dir(dir);

  parallel_for(static_cast<std::size_t>(o.count), o.jobs, [&](std::size_t i) {
    SceneSpec spec = base;
    spec.seed = scene_seed(o.seed, static_cast<int>(i));
    const Scene scene = generate_scene(spec);
    const std::string stem = scene_stem(o.seed, static_cast<int>(i));
    write_pnm(dir / (stem + ".ppm"), scene.image);
    write_pnm(dir / (stem + ".pgm"), scene.instances.to_raster());
  });

  RunManifest manifest;
  manifest.command = "synth";
  manifest.seed = o.seed;
  manifest.config = {{"count", o.count},          {"width", base.width},
                     {"height", base.height},     {"apples", base.n_apples},
                     {"radius_min", base.radius_min}, {"radius_max", base.radius_max},
                     {"xs_fraction", base.xs_fraction}, {"leaves", base.n_leaves},
                     {"min_visible", base.min_visible}};
  for (int i = 0; i < o.count; ++i) {
    const std::string stem = scene_stem(o.seed, i);
    manifest.outputs.push_back(stem + ".ppm");
    manifest.outputs.push_back(stem + ".pgm");
  }
  write_file(dir / "manifest.json", manifest.dump());
  out << "wrote " << o.count << " scenes to " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
  std::string scenes;
  std::string detector = "attentionmask";
  std::string mode = "whole";
  std::string tile = "320x240";
  std::string stride = "160x120";
  double nms_iou = 0.7;
  std::size_t top_k = 100;
  std::string out;
  unsigned jobs = 1;
  std::string config_file;
  std::vector<std::string> sets;
  std::string exchange;
  std::string input;
  std::string levels;
  std::optional<double> fill_min;
  std::optional<double> fill_max;
  std::optional<int> jitter;
  std::optional<double> objectness_noise;
  std::optional<std::uint64_t> det_seed;
};

int cmd_run(const RunOptions& o, std::ostream& out) {
  if (o.mode != "whole" && o.mode != "tiled") throw UsageError("--mode must be whole or tiled");
  const bool use_exchange = o.detector == "exchange";

  DetectorProfile profile;
  if (!use_exchange) {
    try {
      profile = preset(o.detector);
    } catch (const ValidationError& e) {
      throw UsageError(std::string(e.what()) + " or exchange");
    }
    std::map<std::string, std::string> overrides;
    if (!o.config_file.empty()) overrides = read_key_values(o.config_file);
    for (const auto& kv : o.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      overrides[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
    }
    if (!o.input.empty()) {
      const auto [w, h] = parse_extent(o.input);
      overrides["input_w"] = std::to_string(w);
      overrides["input_h"] = std::to_string(h);
    }
    if (!o.levels.empty()) overrides["levels"] = o.levels;
    if (o.fill_min) overrides["fill_min"] = std::to_string(*o.fill_min);
    if (o.fill_max) overrides["fill_max"] = std::to_string(*o.fill_max);
    if (o.jitter) overrides["jitter"] = std::to_string(*o.jitter);
    if (o.objectness_noise) overrides["objectness_noise"] = std::to_string(*o.objectness_noise);
    if (o.det_seed) overrides["seed"] = std::to_string(*o.det_seed);
    profile.apply(overrides);
  } else if (o.exchange.empty()) {
    throw UsageError("--detector exchange requires --exchange PATH");
  }

  PipelineConfig config;
  config.nms_iou = o.nms_iou;
  config.top_k = o.top_k;
  config.jobs = 1;
  if (o.mode == "tiled") {
    const auto [tw, th] = parse_extent(o.tile);
    const auto [sx, sy] = parse_extent(o.stride);
    config.grid = TileGridSpec{tw, th, sx, sy};
  }
  config.validate();

  const fs::path out_dir(o.out);
  const auto scenes = load_scenes(o.scenes, o.jobs);

  std::map<std::string, std::vector<ProposalRecord>> exchange;
  if (use_exchange) {
    exchange = read_grouped(o.exchange, nullptr);
    std::vector<std::string> unknown;
    for (const auto& [id, records] : exchange) {
      if (!std::any_of(scenes.begin(), scenes.end(), [&](const LoadedScene& s) { return s.id == id; })) {
        unknown.push_back(id);
      }
    }
    if (!unknown.empty()) throw ValidationError("exchange records for unknown images: " + join(unknown));
  }

  std::vector<std::string> serialized(scenes.size());
  parallel_for(scenes.size(), o.jobs, [&](std::size_t i) {
    const auto& scene = scenes[i];
    std::vector<Proposal> proposals;
    if (use_exchange) {
      static const std::vector<ProposalRecord> kNone;
      auto it = exchange.find(scene.id);
      const auto& records = it == exchange.end() ? kNone : it->second;
      proposals = run_exchange(scene.width, scene.height, records, config);
    } else {
      proposals = run_pipeline({scene.width, scene.height, scene.gt}, profile, config);
    }
    std::ostringstream buffer;
    for (auto& p : proposals) {
      buffer << format_record({scene.id, std::nullopt, std::move(p.mask), p.objectness}) << '\n';
    }
    serialized[i] = buffer.str();
  });

  ensure_dir(out_dir);
  RunManifest manifest;
  manifest.command = "run";
  manifest.system = o.detector + "/" + o.mode;
  manifest.seed = use_exchange ? 0 : profile.seed;
  manifest.config["detector"] = use_exchange ? nlohmann::ordered_json("exchange") : profile_json(profile);
  manifest.config["mode"] = o.mode;
  if (config.grid) {
    manifest.config["grid"] = {{"tile_w", config.grid->tile_w},
                               {"tile_h", config.grid->tile_h},
                               {"stride_x", config.grid->stride_x},
                               {"stride_y", config.grid->stride_y}};
  } else {
    manifest.config["grid"] = nullptr;
  }
  manifest.config["nms_iou"] = config.nms_iou;
  manifest.config["top_k"] = config.top_k;
  manifest.inputs.push_back(o.scenes);
  if (use_exchange) manifest.inputs.push_back(o.exchange);
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    write_file(out_dir / (scenes[i].id + ".jsonl"), serialized[i]);
    manifest.outputs.push_back(scenes[i].id + ".jsonl");
  }
  write_file(out_dir / "manifest.json", manifest.dump());
  out << "wrote proposals for " << scenes.size() << " images to " << out_dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string scenes;
  std::vector<std::string> proposals;
  std::vector<std::string> names;
  std::string out;
  unsigned jobs = 1;
};

std::string system_name(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.json";
  if (fs::is_regular_file(manifest)) {
    try {
      const auto doc = nlohmann::json::parse(read_file(manifest));
      if (doc.contains("system") && doc["system"].is_string()) return doc["system"].get<std::string>();
    } catch (const nlohmann::json::exception&) {
    }
  }
  const auto name = fs::path(dir).lexically_normal().filename().string();
  return name.empty() ? fs::path(dir).lexically_normal().parent_path().filename().string() : name;
}

std::vector<std::vector<Proposal>> load_system_proposals(const fs::path& path,
                                                         const std::vector<LoadedScene>& scenes) {
  std::set<std::string> present;
  auto grouped = read_grouped(path, &present);
  std::set<std::string> known;
  for (const auto& s : scenes) known.insert(s.id);

  std::vector<std::string> unknown;
  for (const auto& [id, records] : grouped) {
    if (!known.count(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) throw ValidationError("proposals for unknown images: " + join(unknown));

  // A directory without any proposal file is a system that proposed nothing.
  if (!present.empty()) {
    std::vector<std::string> missing;
    for (const auto& s : scenes) {
      if (!present.count(s.id) && !grouped.count(s.id)) missing.push_back(s.id);
    }
    if (!missing.empty()) throw ValidationError("no proposals file for images: " + join(missing));
  }

  std::vector<std::vector<Proposal>> per_image(scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    auto it = grouped.find(scenes[i].id);
    if (it == grouped.end()) continue;
    for (auto& r : it->second) {
      if (r.tile_index) {
        throw ValidationError("proposals for '" + r.image_id +
                              "' are tile-local; remap them with `run --detector exchange` first");
      }
      if (r.mask.width() != scenes[i].width || r.mask.height() != scenes[i].height) {
        throw DimensionError("proposal for '" + r.image_id + "' does not match the image size");
      }
      per_image[i].push_back({std::move(r.mask), r.objectness});
    }
  }
  return per_image;
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  if (o.proposals.empty()) throw UsageError("eval needs at least one --proposals DIR");
  if (!o.names.empty() && o.names.size() != o.proposals.size()) {
    throw UsageError("--name must be given once per --proposals");
  }
  const auto scenes = load_scenes(o.scenes, o.jobs);
  ARReport report;
  for (std::size_t s = 0; s < o.proposals.size(); ++s) {
    const auto per_image = load_system_proposals(o.proposals[s], scenes);
    std::vector<ImageResult> images;
    for (std::size_t i = 0; i < scenes.size(); ++i) images.push_back({scenes[i].gt, per_image[i]});
    const std::string name = o.names.empty() ? system_name(o.proposals[s]) : o.names[s];
    report.rows.push_back(evaluate_dataset(name, images));
  }

  fs::path prefix(o.out);
  const auto ext = prefix.extension().string();
  if (ext == ".txt" || ext == ".json" || ext == ".csv") prefix.replace_extension();
  if (prefix.has_parent_path()) ensure_dir(prefix.parent_path());
  const std::string text = report_to_text(report);
  write_file(prefix.string() + ".txt", text);
  write_file(prefix.string() + ".json", report_to_json(report));
  write_file(prefix.string() + ".csv", report_to_csv(report));
  out << text;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// overlay

struct OverlayOptions {
  std::string image;
  std::string instances;
  std::string proposals;
  std::string out;
  std::size_t top_k = 100;
};

int cmd_overlay(const OverlayOptions& o, std::ostream& out) {
  const RasterImage image = read_pnm(o.image);
  const auto map = InstanceMap::from_raster(read_pnm(o.instances));
  if (map.width != image.width() || map.height != image.height()) {
    throw DimensionError("image and instance map sizes differ");
  }
  const auto gt = extract_instances(map);
  std::vector<Proposal> proposals;
  for (auto& r : read_proposals(o.proposals)) {
    if (r.tile_index) throw ValidationError("overlay needs whole-image proposals");
    if (proposals.size() >= o.top_k) break;
    proposals.push_back({std::move(r.mask), r.objectness});
  }
  write_pnm(o.out, render_overlay(image, gt, proposals));
  out << "wrote " << o.out << "\n";
  return kExitOk;
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = message;
  j["kind"] = kind;
  err << j.dump() << "\n";
}

}  // namespace

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::map<std::string, std::string> values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(number) + ": expected key=value");
    }
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

std::vector<std::string> list_scene_ids(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("scene directory not found: " + dir.string());
  std::vector<std::string> ids;
  for (const auto& name : sorted_files(dir, ".pgm")) ids.push_back(fs::path(name).stem().string());
  return ids;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tiled small-object proposal pipeline and Average Recall evaluation", "tileprop"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate deterministic synthetic orchard scenes");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--count", synth.count, "Number of scenes")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Batch seed")->capture_default_str();
  synth_cmd->add_option("--width", synth.spec.width)->capture_default_str();
  synth_cmd->add_option("--height", synth.spec.height)->capture_default_str();
  synth_cmd->add_option("--apples", synth.spec.n_apples)->capture_default_str();
  synth_cmd->add_option("--radius-min", synth.spec.radius_min)->capture_default_str();
  synth_cmd->add_option("--radius-max", synth.spec.radius_max)->capture_default_str();
  synth_cmd->add_option("--xs-fraction", synth.spec.xs_fraction)->capture_default_str();
  synth_cmd->add_option("--leaves", synth.spec.n_leaves)->capture_default_str();
  synth_cmd->add_option("--min-visible", synth.spec.min_visible)->capture_default_str();
  synth_cmd->add_option("--jobs", synth.jobs, "Worker threads")->capture_default_str();

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Generate ranked proposals for every scene");
  run_cmd->add_option("--scenes", run.scenes, "Scene directory (*.pgm instance maps)")->required();
  run_cmd->add_option("--detector", run.detector, "attentionmask | attentionmask-4-16 | fastmask | exchange")
      ->capture_default_str();
  run_cmd->add_option("--mode", run.mode, "whole | tiled")->capture_default_str();
  run_cmd->add_option("--tile", run.tile, "Tile size WxH")->capture_default_str();
  run_cmd->add_option("--stride", run.stride, "Tile stride XxY")->capture_default_str();
  run_cmd->add_option("--nms-iou", run.nms_iou, "NMS IoU threshold")->capture_default_str();
  run_cmd->add_option("--top-k", run.top_k, "Proposals kept per image")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")->capture_default_str();
  run_cmd->add_option("--config", run.config_file, "Detector key=value file");
  run_cmd->add_option("--set", run.sets, "Detector override key=value (repeatable)");
  run_cmd->add_option("--exchange", run.exchange, "JSONL file or directory for --detector exchange");
  run_cmd->add_option("--input", run.input, "Detector input size WxH");
  run_cmd->add_option("--levels", run.levels, "Pyramid levels, e.g. 4,8,16");
  run_cmd->add_option("--fill-min", run.fill_min, "Smallest window fill fraction");
  run_cmd->add_option("--fill-max", run.fill_max, "Largest window fill fraction");
  run_cmd->add_option("--jitter", run.jitter, "Mask jitter in pixels");
  run_cmd->add_option("--objectness-noise", run.objectness_noise, "Objectness noise in [0,1)");
  run_cmd->add_option("--det-seed", run.det_seed, "Detector seed");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Average Recall report for one or more proposal sets");
  eval_cmd->add_option("--scenes", eval.scenes, "Scene directory")->required();
  eval_cmd->add_option("--proposals", eval.proposals, "Proposal directory (repeatable)")->required();
  eval_cmd->add_option("--name", eval.names, "Row name per --proposals");
  eval_cmd->add_option("--out", eval.out, "Report path prefix (.txt/.json/.csv written)")->required();
  eval_cmd->add_option("--jobs", eval.jobs, "Worker threads")->capture_default_str();

  OverlayOptions overlay;
  auto* overlay_cmd = app.add_subcommand("overlay", "Render best-fitting proposals over an image");
  overlay_cmd->add_option("--image", overlay.image, "Input PPM/PGM")->required();
  overlay_cmd->add_option("--instances", overlay.instances, "Instance map PGM")->required();
  overlay_cmd->add_option("--proposals", overlay.proposals, "Proposal JSONL")->required();
  overlay_cmd->add_option("--out", overlay.out, "Output PPM")->required();
  overlay_cmd->add_option("--top-k", overlay.top_k, "Proposals considered")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (eval_cmd->parsed()) return cmd_eval(eval, out);
    if (overlay_cmd->parsed()) return cmd_overlay(overlay, out);
  } catch (const UsageError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    print_error(err, e.kind(), e.what());
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    print_error(err, "io", e.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace tileprop
