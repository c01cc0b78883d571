#include "recombine/measure.hpp"

#include <algorithm>
#include <cmath>

namespace recombine {

std::string_view to_string(reduce_method m) {
  switch (m) {
    case reduce_method::basic: return "basic";
    case reduce_method::greedy: return "greedy";
    case reduce_method::greedy_reset: return "greedy-reset";
    case reduce_method::deterministic: return "deterministic";
    case reduce_method::divide_conquer: return "divide-conquer";
    case reduce_method::hybrid: return "hybrid";
    case reduce_method::trivial: return "trivial";
  }
  return "unknown";
}

void discrete_measure::validate() const {
  if (points.rows() < 1 || points.cols() < 1)
    throw invalid_measure("measure needs at least one atom and one dimension");
  if (weights.size() != points.rows())
    throw invalid_measure("weight count does not match atom count");
  if (!points.allFinite() || !weights.allFinite())
    throw invalid_measure("non-finite entries");
  if ((weights.array() < 0.0).any())
    throw invalid_measure("negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw invalid_measure("weights do not sum to 1");
}

centered_cloud center(const discrete_measure& measure) {
  centered_cloud cloud;
  cloud.barycenter = measure.points.transpose() * measure.weights;
  cloud.points = measure.points.rowwise() - cloud.barycenter.transpose();
  cloud.kappas = Eigen::VectorXd::Ones(measure.size());
  cloud.source_weights = measure.weights;
  cloud.scaled = false;
  return cloud;
}

centered_cloud normalize_sphere(centered_cloud cloud) {
  cloud.zero_atoms.clear();
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const double norm = cloud.points.row(i).norm();
    if (norm == 0.0) {
      cloud.zero_atoms.push_back(i);
      cloud.kappas[i] = 1.0;
      continue;
    }
    cloud.points.row(i) /= norm;
    cloud.kappas[i] *= norm;
  }
  cloud.scaled = true;
  return cloud;
}

Eigen::VectorXd recover_weights(const Eigen::VectorXd& scaled_weights,
                                std::span<const Eigen::Index> selected,
                                const centered_cloud& cloud) {
  if (scaled_weights.size() != static_cast<Eigen::Index>(selected.size()))
    throw index_out_of_range("selection/weight size mismatch");
  Eigen::VectorXd recovered(scaled_weights.size());
  for (Eigen::Index k = 0; k < recovered.size(); ++k) {
    const Eigen::Index i = selected[static_cast<std::size_t>(k)];
    if (i < 0 || i >= cloud.size()) throw index_out_of_range("selected atom out of range");
    if (std::binary_search(cloud.zero_atoms.begin(), cloud.zero_atoms.end(), i))
      throw zero_kappa("selected atom is a flagged zero row");
    recovered[k] = scaled_weights[k] / cloud.kappas[i];
  }
  const double total = recovered.sum();
  return recovered / total;
}

validation_report validate_reduction(const discrete_measure& measure,
                                     const recombination_solution& solution,
                                     double tol) {
  validation_report report;
  const Eigen::Index n = measure.dim();
  const Eigen::Index support = static_cast<Eigen::Index>(solution.indices.size());
  if (support != solution.weights.size())
    throw index_out_of_range("solution index/weight size mismatch");

  std::vector<Eigen::Index> sorted(solution.indices);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] < 0 || sorted[k] >= measure.size())
      throw index_out_of_range("solution index out of range");
    if (k > 0 && sorted[k] == sorted[k - 1]) report.indices_distinct = false;
  }

  const Eigen::VectorXd original = measure.points.transpose() * measure.weights;
  Eigen::VectorXd reduced = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < support; ++k)
    reduced += solution.weights[k] * measure.points.row(solution.indices[static_cast<std::size_t>(k)]).transpose();

  report.moment_errors = (original - reduced).cwiseAbs();
  report.max_moment_error = report.moment_errors.size() > 0 ? report.moment_errors.maxCoeff() : 0.0;
  report.support_size = support;
  report.min_weight = support > 0 ? solution.weights.minCoeff() : 0.0;
  report.weight_sum_deviation = std::abs(solution.weights.sum() - 1.0);

  const double moment_scale = 1.0 + (original.size() > 0 ? original.cwiseAbs().maxCoeff() : 0.0);
  report.passed = report.indices_distinct &&
                  report.max_moment_error <= tol * moment_scale &&
                  report.min_weight >= -tol &&
                  report.weight_sum_deviation <= tol &&
                  support <= n + 1;
  return report;
}

Eigen::VectorXd clip_weights(Eigen::VectorXd weights, double clip_tol) {
  bool renormalize = false;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) {
      if (weights[i] < -clip_tol)
        throw invalid_measure("solution weight below clip tolerance");
      weights[i] = 0.0;
      renormalize = true;
    }
  }
  if (renormalize) {
    const double total = weights.sum();
    if (total <= 0.0) throw invalid_measure("clipped weights sum to zero");
    weights /= total;
  }
  return weights;
}

recombination_solution finalize_cloud_solution(const prepared_input& prep,
                                               recombination_solution cloud_solution,
                                               double clip_tol) {
  const Eigen::VectorXd clipped = clip_weights(std::move(cloud_solution.weights), clip_tol);

  std::vector<std::pair<Eigen::Index, double>> entries;
  entries.reserve(cloud_solution.indices.size());
  for (std::size_t k = 0; k < cloud_solution.indices.size(); ++k) {
    const double w = clipped[static_cast<Eigen::Index>(k)];
    if (w <= 0.0) continue;
    entries.emplace_back(prep.kept[static_cast<std::size_t>(cloud_solution.indices[k])], w);
  }
  std::sort(entries.begin(), entries.end());

  recombination_solution sol;
  sol.indices.resize(entries.size());
  sol.weights.resize(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    sol.indices[k] = entries[k].first;
    sol.weights[static_cast<Eigen::Index>(k)] = entries[k].second;
  }
  sol.tau = cloud_solution.tau;
  sol.resets = cloud_solution.resets;
  sol.method = cloud_solution.method;
  sol.fallback_used = cloud_solution.fallback_used;
  sol.stats = cloud_solution.stats;
  return sol;
}

prepared_input prepare_reduction(const discrete_measure& measure) {
  measure.validate();

  prepared_input prep;
  prep.kept.reserve(static_cast<std::size_t>(measure.size()));
  for (Eigen::Index i = 0; i < measure.size(); ++i)
    if (measure.weights[i] > 0.0) prep.kept.push_back(i);

  const auto kept_n = static_cast<Eigen::Index>(prep.kept.size());
  prep.sub.points.resize(kept_n, measure.dim());
  prep.sub.weights.resize(kept_n);
  for (Eigen::Index r = 0; r < kept_n; ++r) {
    prep.sub.points.row(r) = measure.points.row(prep.kept[static_cast<std::size_t>(r)]);
    prep.sub.weights[r] = measure.weights[prep.kept[static_cast<std::size_t>(r)]];
  }

  if (kept_n <= measure.dim() + 1) {
    recombination_solution trivial;
    trivial.indices = prep.kept;
    trivial.weights = prep.sub.weights;
    trivial.method = reduce_method::trivial;
    trivial.tau = 0;
    prep.shortcut = std::move(trivial);
    return prep;
  }

  prep.cloud = center(prep.sub);

  // An atom exactly at the barycenter is on its own a valid 1-point reduction.
  for (Eigen::Index r = 0; r < kept_n; ++r) {
    if ((prep.cloud.points.row(r).array() == 0.0).all()) {
      recombination_solution single;
      single.indices = {prep.kept[static_cast<std::size_t>(r)]};
      single.weights = Eigen::VectorXd::Ones(1);
      single.method = reduce_method::trivial;
      single.tau = 0;
      prep.shortcut = std::move(single);
      return prep;
    }
  }
  return prep;
}

}  // namespace recombine
