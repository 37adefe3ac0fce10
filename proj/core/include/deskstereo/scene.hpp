#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "deskstereo/geometry.hpp"

namespace deskstereo {

using Vec3 = std::array<double, 3>;

/// Scene primitive: infinite plane (n . p = distance, unit n) or
/// axis-aligned box. Albedo in (0,1].
struct Primitive {
  enum class Kind { Plane, Box };
  Kind kind = Kind::Plane;
  Vec3 normal = {0.0, 0.0, 1.0};
  double distance = 1.0;
  Vec3 center = {0.0, 0.0, 1.0};
  Vec3 extents = {0.1, 0.1, 0.1};
  double albedo = 0.9;
};

struct DotPattern {
  double density = 0.08;  // dots per projector pixel
  double sigma_px = 1.6;  // Gaussian splat sigma in projector-plane pixels
  double gain = 0.2;
};

struct AmbientModel {
  double amplitude = 0.25;  // in [0,1)
  double frequency = 2.0;   // lattice cells per meter; <= 0 means flat
};

/// Additive sensor noise with intensity-proportional standard deviation:
/// observed = clamp(I* + N(0, sigma1 * I* + sigma2)).
struct NoiseModel {
  double sigma1 = 0.05;
  double sigma2 = 0.002;
};

/// Declarative synthetic scene. Identical specs render bit-identically.
struct SceneSpec {
  CameraRig rig{560.0, 0.09};
  int width = 192;
  int height = 144;
  std::vector<Primitive> primitives;
  DotPattern dots;
  AmbientModel ambient;
  NoiseModel noise;
  double falloff_k = 1.0;  // dot irradiance = gain * k / Z^2
  uint64_t seed = 1;

  void validate() const;
};

std::string scene_to_json(const SceneSpec& spec);
SceneSpec scene_from_json(const std::string& json_text);
SceneSpec load_scene(const std::string& path);
void save_scene(const std::string& path, const SceneSpec& spec);

/// Built-in scenes: "wall:<Z>", "slant:<deg>", "box", "textureless".
SceneSpec builtin_scene(const std::string& name);

/// The evaluation battery: fronto walls at 0.5..3.5 m, a 50 deg slanted
/// wall, a box-occlusion scene, and a textureless ambient-only scene.
std::vector<std::pair<std::string, SceneSpec>> standard_scenes();

}  // namespace deskstereo
