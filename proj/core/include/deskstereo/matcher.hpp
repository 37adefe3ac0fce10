#pragma once

#include <string>

#include "deskstereo/cost_volume.hpp"
#include "deskstereo/image.hpp"

namespace deskstereo {

enum class Readout { WtaSubpixel, SoftArgmin };

/// Direct gradient descent on the disparity field under the aggregated
/// reconstruction objective.
struct RefineConfig {
  int steps = 0;
  double learning_rate = 0.5;
  double lambda = 0.0;      // Huber smoothness weight; 0 = pure data term
  double huber_delta = 1.0;
  bool schedule = false;    // graduated window: start at k_start, halve
  int k_start = 32;         //   every halve_every iterations down to 1
  int halve_every = 200;
};

struct MatchConfig {
  VolumeConfig volume;
  Readout readout = Readout::WtaSubpixel;
  double temperature = 1.0;
  int d_min = 0;
  int d_max = 64;
  double lr_theta = 1.0;
  RefineConfig refine;

  void validate() const;
};

std::string match_config_to_json(const MatchConfig& cfg);
MatchConfig match_config_from_json(const std::string& text);
MatchConfig load_match_config(const std::string& path);

struct MatchResult {
  DisparityMap left;   // left-reference disparity
  DisparityMap right;  // right-reference disparity
  Mask valid;          // left pixels surviving the LR check
  bool degenerate = false;
  std::vector<double> objective_trace;  // nonempty when refinement ran
};

/// Full pipeline: cost volume -> (ASW) -> readout for both reference views
/// (the right view via mirror symmetry), optional refinement, then the hard
/// LR check. All-constant inputs yield an empty validity mask and the
/// degenerate flag instead of an error.
MatchResult match(const Image& left, const Image& right, const MatchConfig& cfg,
                  int threads = 0);

struct RefineResult {
  DisparityMap disparity;
  std::vector<double> objective_trace;  // objective per evaluated iterate
  double best_objective = 0.0;
};

/// Minimizes sum of aggregated costs (+ lambda * huber smoothness) over the
/// disparity field by gradient descent, starting from d_init. LCN statistics
/// are fixed inputs, not differentiated. Returns the best iterate seen;
/// stops early after 20 consecutive objective increases.
RefineResult refine_gd(const Image& left, const Image& right,
                       const DisparityMap& d_init, const MatchConfig& cfg,
                       int threads = 0);

}  // namespace deskstereo
