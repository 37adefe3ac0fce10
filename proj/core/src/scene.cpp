#include "deskstereo/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace deskstereo {

using nlohmann::json;

void SceneSpec::validate() const {
  rig.validate();
  if (width <= 0 || height <= 0) throw std::invalid_argument("SceneSpec: empty image size");
  if (primitives.empty()) throw std::invalid_argument("SceneSpec: at least one primitive required");
  for (const auto& p : primitives) {
    if (!(p.albedo > 0.0 && p.albedo <= 1.0))
      throw std::invalid_argument("SceneSpec: albedo must be in (0,1]");
    if (p.kind == Primitive::Kind::Plane) {
      const double n2 = p.normal[0] * p.normal[0] + p.normal[1] * p.normal[1] +
                        p.normal[2] * p.normal[2];
      if (std::abs(n2 - 1.0) > 1e-6)
        throw std::invalid_argument("SceneSpec: plane normal must be unit length");
    }
  }
  if (!(dots.density > 0.0 && dots.density < 1.0))
    throw std::invalid_argument("SceneSpec: dot density must be in (0,1)");
  if (dots.density * width * height < 1.0)
    throw std::invalid_argument("SceneSpec: density * size^2 must be >= 1");
  if (!(dots.sigma_px > 0.0)) throw std::invalid_argument("SceneSpec: dot sigma must be > 0");
  if (!(ambient.amplitude >= 0.0 && ambient.amplitude < 1.0))
    throw std::invalid_argument("SceneSpec: ambient amplitude must be in [0,1)");
  if (noise.sigma1 < 0.0 || noise.sigma2 < 0.0)
    throw std::invalid_argument("SceneSpec: noise sigmas must be >= 0");
  if (!(falloff_k > 0.0)) throw std::invalid_argument("SceneSpec: falloff constant must be > 0");
}

namespace {

json prim_to_json(const Primitive& p) {
  json j;
  j["albedo"] = p.albedo;
  if (p.kind == Primitive::Kind::Plane) {
    j["type"] = "plane";
    j["normal"] = {p.normal[0], p.normal[1], p.normal[2]};
    j["distance"] = p.distance;
  } else {
    j["type"] = "box";
    j["center"] = {p.center[0], p.center[1], p.center[2]};
    j["extents"] = {p.extents[0], p.extents[1], p.extents[2]};
  }
  return j;
}

Primitive prim_from_json(const json& j) {
  Primitive p;
  p.albedo = j.at("albedo").get<double>();
  const std::string type = j.at("type").get<std::string>();
  if (type == "plane") {
    p.kind = Primitive::Kind::Plane;
    auto n = j.at("normal");
    p.normal = {n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>()};
    p.distance = j.at("distance").get<double>();
  } else if (type == "box") {
    p.kind = Primitive::Kind::Box;
    auto c = j.at("center");
    auto e = j.at("extents");
    p.center = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
    p.extents = {e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>()};
  } else {
    throw std::invalid_argument("SceneSpec: unknown primitive type '" + type + "'");
  }
  return p;
}

}  // namespace

std::string scene_to_json(const SceneSpec& s) {
  json j;
  j["rig"] = {{"focal_px", s.rig.focal_px}, {"baseline_m", s.rig.baseline_m}};
  j["width"] = s.width;
  j["height"] = s.height;
  j["primitives"] = json::array();
  for (const auto& p : s.primitives) j["primitives"].push_back(prim_to_json(p));
  j["dots"] = {{"density", s.dots.density}, {"sigma_px", s.dots.sigma_px}, {"gain", s.dots.gain}};
  j["ambient"] = {{"amplitude", s.ambient.amplitude}, {"frequency", s.ambient.frequency}};
  j["noise"] = {{"sigma1", s.noise.sigma1}, {"sigma2", s.noise.sigma2}};
  j["falloff_k"] = s.falloff_k;
  j["seed"] = s.seed;
  return j.dump(2);
}

SceneSpec scene_from_json(const std::string& text) {
  json j = json::parse(text);
  SceneSpec s;
  s.rig.focal_px = j.at("rig").at("focal_px").get<double>();
  s.rig.baseline_m = j.at("rig").at("baseline_m").get<double>();
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.primitives.clear();
  for (const auto& pj : j.at("primitives")) s.primitives.push_back(prim_from_json(pj));
  if (j.contains("dots")) {
    s.dots.density = j["dots"].value("density", s.dots.density);
    s.dots.sigma_px = j["dots"].value("sigma_px", s.dots.sigma_px);
    s.dots.gain = j["dots"].value("gain", s.dots.gain);
  }
  if (j.contains("ambient")) {
    s.ambient.amplitude = j["ambient"].value("amplitude", s.ambient.amplitude);
    s.ambient.frequency = j["ambient"].value("frequency", s.ambient.frequency);
  }
  if (j.contains("noise")) {
    s.noise.sigma1 = j["noise"].value("sigma1", s.noise.sigma1);
    s.noise.sigma2 = j["noise"].value("sigma2", s.noise.sigma2);
  }
  s.falloff_k = j.value("falloff_k", s.falloff_k);
  s.seed = j.value("seed", s.seed);
  s.validate();
  return s;
}

SceneSpec load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open scene file");
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json(ss.str());
}

void save_scene(const std::string& path, const SceneSpec& spec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << scene_to_json(spec) << "\n";
}

namespace {

Primitive wall_plane(double z, double albedo = 0.9) {
  Primitive p;
  p.kind = Primitive::Kind::Plane;
  p.normal = {0.0, 0.0, 1.0};
  p.distance = z;
  p.albedo = albedo;
  return p;
}

SceneSpec base_scene() {
  SceneSpec s;
  s.rig = {560.0, 0.09};
  s.width = 192;
  s.height = 144;
  s.dots = DotPattern{};
  s.ambient = AmbientModel{};
  s.noise = NoiseModel{};
  s.falloff_k = 1.0;
  s.seed = 20260826;
  return s;
}

}  // namespace

SceneSpec builtin_scene(const std::string& name) {
  SceneSpec s = base_scene();
  auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (head == "wall") {
    const double z = arg.empty() ? 2.0 : std::stod(arg);
    if (!(z > 0.0)) throw std::invalid_argument("builtin wall: distance must be > 0");
    s.primitives = {wall_plane(z)};
    // auto-exposure analogue: keep dot contrast comparable across the battery
    s.falloff_k = 0.25 * z * z;
  } else if (head == "slant") {
    const double deg = arg.empty() ? 50.0 : std::stod(arg);
    const double rad = deg * M_PI / 180.0;
    Primitive p;
    p.kind = Primitive::Kind::Plane;
    p.normal = {std::sin(rad), 0.0, std::cos(rad)};
    p.distance = 2.0 * std::cos(rad);  // passes through (0,0,2)
    p.albedo = 0.9;
    s.primitives = {p};
  } else if (head == "box") {
    Primitive box;
    box.kind = Primitive::Kind::Box;
    box.center = {0.03, 0.0, 1.3};
    box.extents = {0.08, 0.07, 0.04};  // half-extents, meters
    box.albedo = 0.7;
    s.primitives = {box, wall_plane(2.2)};
  } else if (head == "textureless") {
    s.primitives = {wall_plane(2.0)};
    s.dots.gain = 0.0;
    s.ambient.amplitude = 0.8;
    s.ambient.frequency = 0.0;  // flat
  } else {
    throw std::invalid_argument("unknown builtin scene '" + name + "'");
  }
  return s;
}

std::vector<std::pair<std::string, SceneSpec>> standard_scenes() {
  std::vector<std::pair<std::string, SceneSpec>> out;
  for (double z : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5}) {
    std::ostringstream name;
    name << "wall_" << z;
    out.emplace_back(name.str(), builtin_scene("wall:" + std::to_string(z)));
  }
  out.emplace_back("slant_50", builtin_scene("slant:50"));
  out.emplace_back("box", builtin_scene("box"));
  out.emplace_back("textureless", builtin_scene("textureless"));
  return out;
}

}  // namespace deskstereo
