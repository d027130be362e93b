#pragma once

#include "reckern/estimator.hpp"
#include "reckern/models.hpp"
#include "reckern/montecarlo.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reckern {

//! Experiment configuration read from a plain-text file of dotted
//! `key = value` lines; `#` starts a comment.
//!
//! Grid points are separated by ';' and coordinates by ',', e.g.
//! `estimator.grid = 0; 1` (d = 1) or `estimator.grid = 0,0; 1,0` (d = 2).
struct Config
{
  std::size_t dim{ 1 };
  std::string kernel{ "gaussian" };
  double ell{ 0.0 };
  double c{ 1.0 };
  double nu{ 0.0 };
  std::vector<Point> grid;
  std::string transform{ "identity" };
  std::optional<Truncation> truncation;

  std::string model_name{ "ar1" };
  double rho_ar{ 0.0 };
  double noise_sd{ 0.0 };
  RegressionShape regression{ RegressionShape::linear };

  std::uint64_t seed{ 1 };
  std::uint64_t n{ 0 };
  std::size_t replicates{ 0 };
  StatisticSet statistics = StatisticSet::all();
  BiasTerm bias{ BiasTerm::include };
  std::string output_dir{ "out" };

  EstimatorConfig estimator_config() const;
  ModelTruth model() const;
  ExperimentPlan plan() const;
};

//! Throws ParseError carrying the line number, or naming a missing key.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

//! "0.5" or "0.5,1" -> point of the given dimension.
Point parse_point(std::string_view text, std::size_t dim);

} // namespace reckern
