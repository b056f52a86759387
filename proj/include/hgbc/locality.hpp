#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hgbc/gbc.hpp"

namespace hgbc {

// Decay of one coordinate function across star rings of its supporting
// vertex. Ring k collects the fine-mesh vertices whose smallest ring over the
// incident triangles is k; rings are measured on the coarse mesh refined
// `ring_level` times.
struct DecayReport {
  FieldId field;
  int ring_level = 0;
  std::vector<std::pair<int, double>> ring_maxima;  // (k, max |value|), k = 1..saturation
  int fit_from_ring = 2;
  std::optional<double> sigma;  // geometric mean of consecutive ratios
  std::optional<double> k_fit;  // intercept K of a_k ~ K sigma^k
  bool ratio_above_one = false;  // some consecutive ratio exceeded 1
  // Least-squares R^2 of a_k against k (linear decay) and of log a_k against
  // k (geometric decay), over the fitted rings.
  double linear_r2 = 0.0;
  double log_r2 = 0.0;
  bool sub_exponential = false;  // the linear model fits better
};

DecayReport measure_decay(const GbcSet& set, FieldId id, int ring_level = 0);
DecayReport measure_decay(const DesignPair& pair, const FeField& field, FieldId id, int ring_level = 0);

struct DeBoorResult {
  bool condition_holds = false;  // |a_m| >= c sum_{j>=m} |a_j| for all m
  double lambda = 0.0;           // 1 - c
  bool bound_holds = false;      // |a_m| <= |a_0| lambda^m / c for all m
  int first_failure = -1;        // first m violating the condition
};

DeBoorResult deboor_check(std::span<const double> sequence, double c);
// Smallest |a_m| / sum_{j>=m} |a_j| over m with a nonzero tail.
double deboor_constant(std::span<const double> sequence);

struct LocalityRow {
  int ring = 0;
  double max_error = 0.0;
  std::optional<double> rate;  // max_error / previous row's max_error
};

struct LocalityTable {
  FieldId field;
  int grid = 101;
  std::size_t samples = 0;
  std::size_t coarse_vertices = 0;
  std::size_t fine_vertices = 0;
  std::vector<LocalityRow> rows;

  // Mean of the rate column over rows with first_ring <= ring <= last_ring.
  std::optional<double> mean_rate(int first_ring, int last_ring) const;
};

// Max deviation of the k-local field from the global one over the grid
// points inside the domain, for each requested ring (ascending). Rows are
// computed concurrently on `workers` threads.
LocalityTable local_vs_global_table(const GbcProblem& problem, int center, std::span<const int> rings,
                                    int grid = 101, int workers = 1);

// CSV writers: "ring,max_error,rate", "ring,max_abs_value", "x,y,value".
void write_locality_csv(std::ostream& os, const LocalityTable& table);
void write_decay_csv(std::ostream& os, const DecayReport& report);
void write_surface_csv(std::ostream& os, const FeField& field, int grid);

}  // namespace hgbc
