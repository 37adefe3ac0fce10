#pragma once

#include <string>

#include "deskstereo/render.hpp"
#include "deskstereo/scene.hpp"

namespace deskstereo {

/// Writes a rendered pair as PFM/PGM files plus a JSON manifest into dir.
/// The scene spec, when given, is embedded so a run is reproducible from the
/// manifest alone.
void save_pair(const std::string& dir, const RenderedPair& pair,
               const SceneSpec* spec = nullptr);

struct LoadedPair {
  RenderedPair pair;
  bool has_scene = false;
  SceneSpec scene;
};

LoadedPair load_pair(const std::string& dir);

}  // namespace deskstereo
