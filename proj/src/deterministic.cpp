#include "recombine/deterministic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace recombine {

namespace {

constexpr double k_zero_weight = 1e-14;

// Kernel basis of M via Gaussian elimination with full pivoting. Columns of
// the result span ker(M); they are ordered by the (permuted) free-column
// position, so the canonical pick is the last column. Deterministic: no RNG,
// pivoting by largest absolute entry.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Eigen::MatrixXd r = m;
  std::vector<Eigen::Index> col_perm(static_cast<std::size_t>(cols));
  for (Eigen::Index c = 0; c < cols; ++c) col_perm[static_cast<std::size_t>(c)] = c;

  const Eigen::Index max_rank = std::min(rows, cols);
  const double scale = r.cwiseAbs().maxCoeff();
  const double tol = scale > 0.0 ? 1e-12 * scale : 0.0;

  Eigen::Index rank = 0;
  for (Eigen::Index step = 0; step < max_rank; ++step) {
    Eigen::Index pr = step, pc = step;
    double best = 0.0;
    for (Eigen::Index c = step; c < cols; ++c) {
      for (Eigen::Index row = step; row < rows; ++row) {
        const double v = std::abs(r(row, c));
        if (v > best) {
          best = v;
          pr = row;
          pc = c;
        }
      }
    }
    if (best <= tol) break;
    r.row(step).swap(r.row(pr));
    r.col(step).swap(r.col(pc));
    std::swap(col_perm[static_cast<std::size_t>(step)], col_perm[static_cast<std::size_t>(pc)]);
    for (Eigen::Index row = step + 1; row < rows; ++row) {
      const double factor = r(row, step) / r(step, step);
      if (factor == 0.0) continue;
      r(row, step) = 0.0;
      r.row(row).tail(cols - step - 1) -= factor * r.row(step).tail(cols - step - 1);
    }
    ++rank;
  }

  const Eigen::Index null_dim = cols - rank;
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(cols, null_dim);
  for (Eigen::Index f = 0; f < null_dim; ++f) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(cols);  // permuted coordinates
    v[rank + f] = 1.0;
    for (Eigen::Index p = rank - 1; p >= 0; --p) {
      double acc = 0.0;
      for (Eigen::Index q = p + 1; q < cols; ++q) acc += r(p, q) * v[q];
      v[p] = -acc / r(p, p);
    }
    for (Eigen::Index c = 0; c < cols; ++c) kernel(col_perm[static_cast<std::size_t>(c)], f) = v[c];
  }
  return kernel;
}

// Flip so that the last nonzero entry is positive; pins the elimination
// direction without randomness.
void canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = v.size() - 1; i >= 0; --i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

struct window_state {
  std::vector<Eigen::Index> atoms;  // cloud rows currently in the window
  Eigen::MatrixXd kernel;           // |atoms| x k
};

void drop_window_row(window_state& w, Eigen::Index pos) {
  const auto rows = static_cast<Eigen::Index>(w.atoms.size());
  w.atoms.erase(w.atoms.begin() + pos);
  Eigen::MatrixXd next(rows - 1, w.kernel.cols());
  next.topRows(pos) = w.kernel.topRows(pos);
  next.bottomRows(rows - 1 - pos) = w.kernel.bottomRows(rows - 1 - pos);
  w.kernel = std::move(next);
}

void drop_kernel_col(window_state& w, Eigen::Index col) {
  const Eigen::Index k = w.kernel.cols();
  Eigen::MatrixXd next(w.kernel.rows(), k - 1);
  next.leftCols(col) = w.kernel.leftCols(col);
  next.rightCols(k - 1 - col) = w.kernel.rightCols(k - 1 - col);
  w.kernel = std::move(next);
}

// Restrict the kernel space to vectors vanishing at window row `pos`, then
// remove the row. Consumes one kernel column when the row is live there.
void eliminate_window_row(window_state& w, Eigen::Index pos) {
  const Eigen::Index k = w.kernel.cols();
  Eigen::Index pivot = -1;
  double best = 0.0;
  for (Eigen::Index c = k - 1; c >= 0; --c) {
    const double v = std::abs(w.kernel(pos, c));
    if (v > best) {
      best = v;
      pivot = c;
    }
  }
  if (pivot >= 0 && best > 0.0) {
    for (Eigen::Index c = 0; c < k; ++c) {
      if (c == pivot) continue;
      const double factor = w.kernel(pos, c) / w.kernel(pos, pivot);
      if (factor != 0.0) w.kernel.col(c) -= factor * w.kernel.col(pivot);
    }
    drop_kernel_col(w, pivot);
  }
  drop_window_row(w, pos);
}

}  // namespace

recombination_solution reduce_deterministic(const discrete_measure& measure) {
  prepared_input prep = prepare_reduction(measure);
  if (prep.shortcut) return *prep.shortcut;

  const Eigen::Index n = prep.sub.dim();
  const Eigen::Index atoms = prep.sub.size();
  const Eigen::Index window_cap = 2 * (n + 1);

  Eigen::VectorXd weights = prep.sub.weights;
  std::vector<char> alive(static_cast<std::size_t>(atoms), 1);
  Eigen::Index live_count = atoms;
  Eigen::Index stream_pos = 0;

  window_state window;
  window.atoms.reserve(static_cast<std::size_t>(window_cap));

  long long eliminations = 0;
  Eigen::MatrixXd bordered(n + 1, window_cap);

  while (live_count > n + 1) {
    const long long eliminations_before = eliminations;
    // Refill the window from the remaining stream, in input order.
    while (static_cast<Eigen::Index>(window.atoms.size()) < window_cap && stream_pos < atoms) {
      if (alive[static_cast<std::size_t>(stream_pos)]) window.atoms.push_back(stream_pos);
      ++stream_pos;
    }
    const auto wsize = static_cast<Eigen::Index>(window.atoms.size());

    auto block = bordered.leftCols(wsize);
    for (Eigen::Index c = 0; c < wsize; ++c) {
      block.col(c).head(n) = prep.cloud.points.row(window.atoms[static_cast<std::size_t>(c)]).transpose();
      block(n, c) = 1.0;
    }
    window.kernel = kernel_basis(block);

    while (window.kernel.cols() > 0 &&
           static_cast<Eigen::Index>(window.atoms.size()) > n + 1 && live_count > n + 1) {
      Eigen::VectorXd v = window.kernel.col(window.kernel.cols() - 1);
      canonical_sign(v);
      if ((v.array() <= 0.0).all()) v = -v;  // ensure a positive entry exists

      const double vmax = v.cwiseAbs().maxCoeff();
      const double pos_tol = 1e-12 * vmax;
      double t = std::numeric_limits<double>::infinity();
      Eigen::Index argmin = -1;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] > pos_tol) {
          const double ratio = weights[window.atoms[static_cast<std::size_t>(i)]] / v[i];
          if (ratio < t) {
            t = ratio;
            argmin = i;
          }
        }
      }
      if (argmin < 0) {
        // No usable positive entry; this kernel direction cannot shift mass.
        drop_kernel_col(window, window.kernel.cols() - 1);
        continue;
      }

      for (Eigen::Index i = 0; i < v.size(); ++i)
        weights[window.atoms[static_cast<std::size_t>(i)]] -= t * v[i];
      weights[window.atoms[static_cast<std::size_t>(argmin)]] = 0.0;
      ++eliminations;

      // Remove every atom whose weight reached zero; each removal restricts
      // the kernel space to directions vanishing at that atom.
      for (Eigen::Index i = static_cast<Eigen::Index>(window.atoms.size()) - 1; i >= 0; --i) {
        const Eigen::Index atom = window.atoms[static_cast<std::size_t>(i)];
        if (weights[atom] <= k_zero_weight) {
          weights[atom] = 0.0;
          alive[static_cast<std::size_t>(atom)] = 0;
          --live_count;
          eliminate_window_row(window, i);
        }
      }
    }
    if (eliminations == eliminations_before)
      throw std::logic_error("kernel elimination stalled");
  }

  recombination_solution sol;
  for (Eigen::Index i = 0; i < atoms; ++i) {
    if (alive[static_cast<std::size_t>(i)] && weights[i] > 0.0)
      sol.indices.push_back(prep.kept[static_cast<std::size_t>(i)]);
  }
  sol.weights.resize(static_cast<Eigen::Index>(sol.indices.size()));
  Eigen::Index out = 0;
  for (Eigen::Index i = 0; i < atoms; ++i) {
    if (alive[static_cast<std::size_t>(i)] && weights[i] > 0.0)
      sol.weights[out++] = weights[i];
  }
  sol.weights /= sol.weights.sum();
  sol.tau = eliminations;
  sol.method = reduce_method::deterministic;
  return sol;
}

}  // namespace recombine
