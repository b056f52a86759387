#include "hgbc/locality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "hgbc/parallel.hpp"

namespace hgbc {

namespace {

constexpr double kNegligible = 1e-12;

double r_squared(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0 || sxx == 0.0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

}  // namespace

DecayReport measure_decay(const GbcSet& set, FieldId id, int ring_level) {
  return measure_decay(*set.pair, set.field(id), id, ring_level);
}

DecayReport measure_decay(const DesignPair& pair, const FeField& field, FieldId id, int ring_level) {
  if (ring_level < 0 || ring_level > pair.levels()) {
    throw std::invalid_argument("ring level must lie between 0 and the pair's refinement count");
  }
  DecayReport report;
  report.field = id;
  report.ring_level = ring_level;

  std::shared_ptr<const Triangulation> ring_mesh = pair.coarse_ptr();
  for (int l = 0; l < ring_level; ++l) {
    ring_mesh = std::make_shared<const Triangulation>(refine_uniform(*ring_mesh));
  }
  const std::vector<int> triangle_ring = triangle_rings_from_vertex(*ring_mesh, id.vertex);

  const Triangulation& fine = pair.fine();
  const FeSpace& space = field.space();
  std::vector<int> vertex_ring(fine.vertex_count(), std::numeric_limits<int>::max());
  for (int t = 0; t < static_cast<int>(fine.triangle_count()); ++t) {
    const int k = triangle_ring[pair.ancestor(t, ring_level)];
    for (int v : fine.triangle(t)) vertex_ring[v] = std::min(vertex_ring[v], k);
  }
  const int saturation = *std::max_element(vertex_ring.begin(), vertex_ring.end());
  std::vector<double> maxima(saturation + 1, 0.0);
  for (int v = 0; v < static_cast<int>(fine.vertex_count()); ++v) {
    const double value = std::abs(field.coefficients()[space.vertex_dof(v)]);
    maxima[vertex_ring[v]] = std::max(maxima[vertex_ring[v]], value);
  }
  for (int k = 1; k <= saturation; ++k) report.ring_maxima.emplace_back(k, maxima[k]);

  std::vector<double> ks, values, logs;
  for (const auto& [k, a] : report.ring_maxima) {
    if (k < report.fit_from_ring || a <= kNegligible) continue;
    ks.push_back(k);
    values.push_back(a);
    logs.push_back(std::log(a));
  }
  if (ks.size() >= 3) {
    double log_ratio = 0.0;
    for (std::size_t i = 1; i < ks.size(); ++i) {
      const double r = values[i] / values[i - 1];
      if (r > 1.0) report.ratio_above_one = true;
      log_ratio += std::log(r);
    }
    const double log_sigma = log_ratio / static_cast<double>(ks.size() - 1);
    report.sigma = std::exp(log_sigma);
    double log_k = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) log_k += logs[i] - ks[i] * log_sigma;
    report.k_fit = std::exp(log_k / static_cast<double>(ks.size()));
    report.linear_r2 = r_squared(ks, values);
    report.log_r2 = r_squared(ks, logs);
    report.sub_exponential = report.linear_r2 > report.log_r2;
  }
  return report;
}

DeBoorResult deboor_check(std::span<const double> sequence, double c) {
  DeBoorResult result;
  result.lambda = 1.0 - c;
  if (sequence.empty()) {
    result.condition_holds = result.bound_holds = true;
    return result;
  }
  std::vector<double> tail(sequence.size() + 1, 0.0);
  for (std::size_t m = sequence.size(); m-- > 0;) tail[m] = tail[m + 1] + std::abs(sequence[m]);
  result.condition_holds = true;
  for (std::size_t m = 0; m < sequence.size(); ++m) {
    if (std::abs(sequence[m]) < c * tail[m] * (1.0 - 1e-14)) {
      result.condition_holds = false;
      result.first_failure = static_cast<int>(m);
      break;
    }
  }
  if (result.condition_holds) {
    result.bound_holds = true;
    const double a0 = std::abs(sequence[0]);
    for (std::size_t m = 0; m < sequence.size(); ++m) {
      const double bound = a0 * std::pow(result.lambda, double(m)) / c;
      if (std::abs(sequence[m]) > bound * (1.0 + 1e-14)) result.bound_holds = false;
    }
  }
  return result;
}

double deboor_constant(std::span<const double> sequence) {
  double tail = 0.0;
  double c = 1.0;
  for (std::size_t m = sequence.size(); m-- > 0;) {
    tail += std::abs(sequence[m]);
    if (tail > 0.0) c = std::min(c, std::abs(sequence[m]) / tail);
  }
  return c;
}

std::optional<double> LocalityTable::mean_rate(int first_ring, int last_ring) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& row : rows) {
    if (row.ring < first_ring || row.ring > last_ring || !row.rate) continue;
    sum += *row.rate;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

LocalityTable local_vs_global_table(const GbcProblem& problem, int center, std::span<const int> rings,
                                    int grid, int workers) {
  if (!std::is_sorted(rings.begin(), rings.end())) {
    throw std::invalid_argument("rings must be sorted ascending");
  }
  const DesignPair& pair = problem.pair();
  const bool boundary = pair.coarse().is_boundary_vertex(center);
  LocalityTable table;
  table.field = {boundary ? FieldKind::Boundary : FieldKind::Interior, center};
  table.grid = grid;
  table.coarse_vertices = pair.coarse().vertex_count();
  table.fine_vertices = pair.fine().vertex_count();

  const FeField global = boundary ? problem.solve_boundary(center) : problem.solve_interior(center);
  std::vector<Location> locations;
  for (const Point& p : grid_points_in_domain(pair.fine(), grid)) locations.push_back(*pair.fine().locate(p));
  table.samples = locations.size();
  std::vector<double> reference(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i) reference[i] = global.eval_at(locations[i]);

  table.rows.resize(rings.size());
  parallel_for(static_cast<int>(rings.size()), workers, [&](int r) {
    const FeField local = problem.solve_local(center, rings[r]);
    double worst = 0.0;
    for (std::size_t i = 0; i < locations.size(); ++i) {
      worst = std::max(worst, std::abs(local.eval_at(locations[i]) - reference[i]));
    }
    table.rows[r] = {rings[r], worst, std::nullopt};
  });
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    if (table.rows[r - 1].max_error > 0.0) table.rows[r].rate = table.rows[r].max_error / table.rows[r - 1].max_error;
  }
  return table;
}

void write_locality_csv(std::ostream& os, const LocalityTable& table) {
  const auto precision = os.precision(10);
  os << "ring,max_error,rate\n";
  for (const auto& row : table.rows) {
    os << row.ring << ',' << row.max_error << ',';
    if (row.rate) os << *row.rate;
    os << '\n';
  }
  os.precision(precision);
}

void write_decay_csv(std::ostream& os, const DecayReport& report) {
  const auto precision = os.precision(10);
  os << "ring,max_abs_value\n";
  for (const auto& [k, a] : report.ring_maxima) os << k << ',' << a << '\n';
  os.precision(precision);
}

void write_surface_csv(std::ostream& os, const FeField& field, int grid) {
  const auto precision = os.precision(12);
  os << "x,y,value\n";
  for (const Point& p : grid_points_in_domain(field.space().mesh(), grid)) {
    os << p.x << ',' << p.y << ',' << *field.eval(p) << '\n';
  }
  os.precision(precision);
}

}  // namespace hgbc
