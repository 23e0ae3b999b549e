#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heavylin/coefficients.hpp"
#include "heavylin/linproc.hpp"
#include "heavylin/tail_innovations.hpp"

namespace heavylin {

/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::span<const double> a, std::span<const double> b);
/// One-sample distance to a continuous CDF.
double ks_distance(std::span<const double> a, const std::function<double(double)>& cdf);

double frechet_cdf(double x, double alpha);

/// Runs body(i) for i in [0, count) on `threads` workers (0 = hardware).
/// Each index is processed exactly once; exceptions are rethrown.
void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& body);

struct Thresholds {
  double ks = 0.05;
  double probability = 0.05;
  double theta_tolerance = 0.07;
  double median_ratio = 0.5;
};

struct ExperimentConfig {
  TailModel model;
  CoefficientSeq seq;
  std::int64_t n = 1000;
  std::int64_t reps = 1000;
  std::uint64_t base_seed = 1;
  std::vector<double> t_points{1.0};
  std::vector<double> deltas{0.05};
  std::vector<double> etas{1.0};
  std::vector<double> eps{0.25};
  std::vector<std::int64_t> n_list;
  double beta = 1.0;
  std::optional<double> zeta;
  std::optional<double> xi;
  std::int64_t reference_size = 100000;
  bool dump_replicates = false;
  Thresholds thresholds;
  int threads = 0;

  /// Throws InvalidArgument on violated invariants.
  void validate() const;
};

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;
  double threshold = 0.0;
  bool passed = false;
};

struct ExperimentReport {
  std::string kind;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<Check> checks;
  /// (file name, CSV text)
  std::vector<std::pair<std::string, std::string>> artifacts;

  bool passed() const;
  void add_check(const std::string& name, double value, const std::string& relation, double threshold);
  nlohmann::ordered_json to_json() const;
};

ExperimentReport fdd_experiment(const ExperimentConfig& cfg);
ExperimentReport sup_frechet_experiment(const ExperimentConfig& cfg);
ExperimentReport m1_nontightness_experiment(const ExperimentConfig& cfg);
ExperimentReport corollary51_experiment(const ExperimentConfig& cfg);
ExperimentReport tightness_diagnostic(const ExperimentConfig& cfg);

/// Dispatch by name: fdd, frechet, m1, stat51, tightness.
ExperimentReport run_experiment(const std::string& kind, const ExperimentConfig& cfg);

/// 1 - exp(-((zeta - xi)/eta)^alpha).
double m1_theta(double zeta, double xi, double eta, double alpha);

}  // namespace heavylin
