#include "deskstereo/pair_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "deskstereo/image_io.hpp"

namespace deskstereo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

DisparityMap disparity_from_files(const std::string& value_path, const Image& valid_img) {
  Image vals = read_pfm(value_path);
  DisparityMap d(vals.width, vals.height);
  d.values = vals.data;
  for (size_t p = 0; p < valid_img.size(); ++p) d.valid.data[p] = valid_img.data[p] > 0 ? 1 : 0;
  return d;
}

}  // namespace

void save_pair(const std::string& dir, const RenderedPair& pair, const SceneSpec* spec) {
  fs::create_directories(dir);
  const fs::path base(dir);

  write_pfm((base / "left.pfm").string(), pair.left);
  write_pfm((base / "right.pfm").string(), pair.right);
  write_pfm((base / "noiseless_left.pfm").string(), pair.noiseless_left);
  write_pfm((base / "noiseless_right.pfm").string(), pair.noiseless_right);

  const auto save_disp = [&](const DisparityMap& d, const std::string& name) {
    Image vals(d.width, d.height);
    vals.data = d.values;
    write_pfm((base / (name + ".pfm")).string(), vals);
    write_pgm((base / (name + "_valid.pgm")).string(), d.valid);
  };
  save_disp(pair.gt_disp_left, "gt_disp_left");
  save_disp(pair.gt_disp_right, "gt_disp_right");
  write_pgm((base / "occlusion_left.pgm").string(), pair.occlusion_left);

  json m;
  m["schema"] = "deskstereo-pair/1";
  m["rig"] = {{"focal_px", pair.rig.focal_px}, {"baseline_m", pair.rig.baseline_m}};
  m["seed"] = pair.seed;
  m["width"] = pair.left.width;
  m["height"] = pair.left.height;
  m["files"] = {
      {"left", "left.pfm"},
      {"right", "right.pfm"},
      {"noiseless_left", "noiseless_left.pfm"},
      {"noiseless_right", "noiseless_right.pfm"},
      {"gt_disp_left", "gt_disp_left.pfm"},
      {"gt_disp_left_valid", "gt_disp_left_valid.pgm"},
      {"gt_disp_right", "gt_disp_right.pfm"},
      {"gt_disp_right_valid", "gt_disp_right_valid.pgm"},
      {"occlusion_left", "occlusion_left.pgm"},
  };
  if (spec) m["scene"] = json::parse(scene_to_json(*spec));
  std::ofstream out(base / "manifest.json");
  if (!out) throw std::runtime_error(dir + ": cannot write manifest.json");
  out << m.dump(2) << "\n";
}

LoadedPair load_pair(const std::string& dir) {
  const fs::path base(dir);
  std::ifstream in(base / "manifest.json");
  if (!in) throw std::runtime_error(dir + ": missing manifest.json");
  json m = json::parse(in);
  if (m.value("schema", "") != "deskstereo-pair/1")
    throw std::runtime_error(dir + ": unknown pair schema");

  LoadedPair lp;
  RenderedPair& p = lp.pair;
  p.rig.focal_px = m.at("rig").at("focal_px").get<double>();
  p.rig.baseline_m = m.at("rig").at("baseline_m").get<double>();
  p.seed = m.value("seed", 0ull);

  const auto& files = m.at("files");
  const auto path_of = [&](const char* key) {
    return (base / files.at(key).get<std::string>()).string();
  };
  p.left = read_pfm(path_of("left"));
  p.right = read_pfm(path_of("right"));
  p.noiseless_left = read_pfm(path_of("noiseless_left"));
  p.noiseless_right = read_pfm(path_of("noiseless_right"));
  p.gt_disp_left = disparity_from_files(path_of("gt_disp_left"),
                                        read_pgm(path_of("gt_disp_left_valid")));
  p.gt_disp_right = disparity_from_files(path_of("gt_disp_right"),
                                         read_pgm(path_of("gt_disp_right_valid")));
  p.occlusion_left = read_pgm_mask(path_of("occlusion_left"));

  if (m.contains("scene")) {
    lp.scene = scene_from_json(m["scene"].dump());
    lp.has_scene = true;
  }
  return lp;
}

}  // namespace deskstereo
