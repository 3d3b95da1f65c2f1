#include "devdec/decompose.hpp"

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "devdec/harmonic.hpp"

namespace devdec {

long long trinomial(int n, int s) {
  if (n < 0) throw std::invalid_argument("trinomial: n must be non-negative");
  if (s < -n || s > n) return 0;
  // row[s + n] holds [n, s]; [n+1, s] = [n, s-1] + [n, s] + [n, s+1].
  std::vector<long long> row{1};
  for (int m = 0; m < n; ++m) {
    std::vector<long long> next(row.size() + 2, 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      next[k] += row[k];
      next[k + 1] += row[k];
      next[k + 2] += row[k];
    }
    row = std::move(next);
  }
  return row[s + n];
}

long long count_parts(int n, int s) {
  if (n < 0 || s < 0 || s > n)
    throw std::invalid_argument("count_parts: need 0 <= s <= n, got n=" + std::to_string(n) +
                                ", s=" + std::to_string(s));
  return trinomial(n, s) - trinomial(n, s + 1);
}

// ---------------------------------------------------------------------------
// Forward maps

Tensor compose_order2(double alpha, const Tensor& v, const Tensor& D) {
  if (v.order() != 1 || D.order() != 2)
    throw std::invalid_argument("compose_order2: expected a vector and an order-2 deviator");
  return alpha * delta() + contract_single(epsilon(), v) + D;
}

Decomposition decompose_order2(const Tensor& t) {
  if (t.order() != 2) throw std::invalid_argument("decompose_order2: tensor must have order 2");
  const double alpha = trace_pair(t, 0, 1)[0] / 3.0;
  const Tensor v = 0.5 * contract_complete(epsilon(), t);
  const Tensor D = symmetrize(t) - alpha * delta();

  Decomposition d;
  d.order = 2;
  d.parts.push_back({0, 1, Tensor::from_scalar(alpha), alpha * delta()});
  d.parts.push_back({1, 1, v, contract_single(epsilon(), v)});
  d.parts.push_back({2, 1, D, D});
  return d;
}

Tensor assemble_G(const Tensor& lower, const Tensor& middle, const Tensor& upper) {
  const int n = middle.order();
  if (n < 2) throw std::invalid_argument("assemble_G: requires n >= 2");
  if (lower.order() != n - 1 || upper.order() != n + 1)
    throw std::invalid_argument("assemble_G: deviator orders must be n-1, n, n+1");
  require_deviator(lower, "assemble_G lower input");
  require_deviator(middle, "assemble_G middle input");
  require_deviator(upper, "assemble_G upper input");

  const double a = (2.0 * n - 1.0) / (n - 1.0);
  const double pair_weight = 2.0 / (n * (n - 1.0));
  Tensor g = upper;
  std::vector<int> idx(n + 1), lo(n - 1), mid(n);
  for (Eigen::Index off = 0; off < g.size(); ++off) {
    detail::unravel(off, idx);
    const int k = idx[0];
    const std::span<const int> i(idx.data() + 1, n);
    double sum_delta_k = 0.0, sum_delta_pair = 0.0, sum_eps = 0.0;
    for (int p = 0; p < n; ++p) {
      // i with position p removed
      for (int q = 0, m = 0; q < n; ++q)
        if (q != p) lo[m] = mid[m] = i[q], ++m;
      if (i[p] == k) sum_delta_k += lower[detail::offset_of(lo)];
      // eps_{k s i_p} M_{i\p, s}; for fixed k != i_p only one s survives
      if (i[p] != k) {
        const int s = 3 - k - i[p];
        const double sign = ((s - k + 3) % 3 == 1) ? 1.0 : -1.0;
        mid[n - 1] = s;
        sum_eps += sign * middle[detail::offset_of(mid)];
      }
      for (int q = p + 1; q < n; ++q) {
        if (i[p] != i[q]) continue;
        for (int r = 0, m = 0; r < n; ++r)
          if (r != p && r != q) lo[m++] = i[r];
        lo[n - 2] = k;
        sum_delta_pair += lower[detail::offset_of(lo)];
      }
    }
    g[off] += a * sum_delta_k / n - pair_weight * sum_delta_pair + sum_eps / n;
  }
  return g;
}

namespace {

// Linear map from child deviator coordinates (Lower, Middle, Upper stacked)
// to the coordinates of G in V (x) D^(s): block k holds the coordinates of
// the slice G[k] in deviator_basis(s).
struct ForwardMap {
  int s = 0;
  std::vector<int> child_orders;
  std::vector<int> child_offsets;
  Eigen::MatrixXd matrix;
  Eigen::FullPivLU<Eigen::MatrixXd> lu;

  Eigen::Index slice_dim() const { return 2 * s + 1; }
  auto role_block(int child) const {
    return matrix.middleCols(child_offsets[child], 2 * child_orders[child] + 1);
  }
};

Tensor forward_tensor(int s, int child, const Tensor& d) {
  if (s == 0) return d;
  if (s == 1) {
    switch (child) {
      case 0: return compose_order2(d[0], Tensor(1), Tensor(2));
      case 1: return compose_order2(0.0, d, Tensor(2));
      default: return d;
    }
  }
  const Tensor lo = child == 0 ? d : Tensor(s - 1);
  const Tensor mid = child == 1 ? d : Tensor(s);
  const Tensor hi = child == 2 ? d : Tensor(s + 1);
  return assemble_G(lo, mid, hi);
}

Eigen::VectorXd slice_coords(const Tensor& g) {
  const int s = g.order() - 1;
  const auto& basis = deviator_basis(s);
  Eigen::VectorXd c(3 * basis.dimension());
  for (int k = 0; k < kDim; ++k)
    c.segment(k * basis.dimension(), basis.dimension()) = coords(g.slice(k), basis).values;
  return c;
}

std::unique_ptr<ForwardMap> build_forward_map(int s) {
  auto fm = std::make_unique<ForwardMap>();
  fm->s = s;
  fm->child_orders = s == 0 ? std::vector<int>{1} : std::vector<int>{s - 1, s, s + 1};
  int cols = 0;
  for (int o : fm->child_orders) {
    fm->child_offsets.push_back(cols);
    cols += 2 * o + 1;
  }
  fm->matrix.resize(3 * (2 * s + 1), cols);
  for (std::size_t c = 0; c < fm->child_orders.size(); ++c) {
    const auto& basis = deviator_basis(fm->child_orders[c]);
    for (int j = 0; j < basis.dimension(); ++j)
      fm->matrix.col(fm->child_offsets[c] + j) =
          slice_coords(forward_tensor(s, static_cast<int>(c), basis.element(j)));
  }
  fm->lu.compute(fm->matrix);
  if (!fm->lu.isInvertible())
    throw std::logic_error("forward map for s=" + std::to_string(s) + " is singular");
  return fm;
}

const ForwardMap& forward_map(int s) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const ForwardMap>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[s];
  if (!slot) slot = build_forward_map(s);
  return *slot;
}

int role_index(PartLabel::Role r) {
  switch (r) {
    case PartLabel::Role::Lower: return 0;
    case PartLabel::Role::Middle: return 1;
    default: return 2;
  }
}

// Embedding matrices are kept for orders up to this; beyond it the replay
// recurses down to the cached level.
constexpr int kEmbeddingCacheOrder = 6;

struct Level {
  std::vector<PartLabel> labels;
  // children[p][role] = index into labels, or -1; p indexes the parent level
  std::vector<std::array<int, 3>> children;
  // 3^n x (2s+1) per label; empty above kEmbeddingCacheOrder
  std::vector<Eigen::MatrixXd> embedding;
};

const Level& level(int n);

std::unique_ptr<Level> build_level(int n) {
  auto lv = std::make_unique<Level>();
  if (n == 0) {
    lv->labels.push_back({0, 1, -1, PartLabel::Role::Root});
    lv->embedding.push_back(Eigen::MatrixXd::Ones(1, 1) * deviator_basis(0).matrix()(0, 0));
    return lv;
  }
  const Level& prev = level(n - 1);

  struct Emitted {
    PartLabel label;
    int parent_slot;
  };
  std::vector<Emitted> emitted;
  std::map<int, int> next_j;
  for (std::size_t p = 0; p < prev.labels.size(); ++p) {
    const int s = prev.labels[p].s;
    const auto roles = s == 0 ? std::vector<PartLabel::Role>{PartLabel::Role::Upper}
                              : std::vector<PartLabel::Role>{PartLabel::Role::Lower,
                                                             PartLabel::Role::Middle,
                                                             PartLabel::Role::Upper};
    for (auto role : roles) {
      const int child_s = s + role_index(role) - 1;
      emitted.push_back({{child_s, ++next_j[child_s], static_cast<int>(p), role},
                         static_cast<int>(p)});
    }
  }
  std::stable_sort(emitted.begin(), emitted.end(), [](const Emitted& a, const Emitted& b) {
    return a.label.s < b.label.s;
  });

  lv->children.assign(prev.labels.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < emitted.size(); ++i) {
    lv->labels.push_back(emitted[i].label);
    lv->children[emitted[i].parent_slot][role_index(emitted[i].label.role)] =
        static_cast<int>(i);
  }

  if (n <= kEmbeddingCacheOrder) {
    const Eigen::Index sub = component_count(n - 1);
    for (const auto& label : lv->labels) {
      const int ps = prev.labels[label.parent].s;
      const auto& fm = forward_map(ps);
      const int child = ps == 0 ? 0 : role_index(label.role);
      const auto block = fm.role_block(child);
      const auto& parent_embedding = prev.embedding[label.parent];
      Eigen::MatrixXd e(component_count(n), block.cols());
      for (int k = 0; k < kDim; ++k)
        e.middleRows(k * sub, sub) =
            parent_embedding * block.middleRows(k * fm.slice_dim(), fm.slice_dim());
      lv->embedding.push_back(std::move(e));
    }
  }
  return lv;
}

const Level& level(int n) {
  if (n < 0 || n > kMaxOrder) throw std::invalid_argument("order out of range");
  static std::recursive_mutex mutex;
  static std::map<int, std::unique_ptr<const Level>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto built = build_level(n);
  return *cache.emplace(n, std::move(built)).first->second;
}

Eigen::VectorXd embed_coords(int n, int label, const Eigen::VectorXd& c) {
  const Level& lv = level(n);
  if (n <= kEmbeddingCacheOrder) return lv.embedding[label] * c;

  const PartLabel& lab = lv.labels[label];
  const int ps = level(n - 1).labels[lab.parent].s;
  const auto& fm = forward_map(ps);
  const Eigen::VectorXd g = fm.role_block(ps == 0 ? 0 : role_index(lab.role)) * c;
  const Eigen::Index sub = component_count(n - 1);
  Eigen::VectorXd out(component_count(n));
  for (int k = 0; k < kDim; ++k)
    out.segment(k * sub, sub) =
        embed_coords(n - 1, lab.parent, g.segment(k * fm.slice_dim(), fm.slice_dim()));
  return out;
}

// Deviator coordinates of every part of t, indexed like part_labels(order).
std::vector<Eigen::VectorXd> analyze(const Tensor& t) {
  const int n = t.order();
  if (n == 0)
    return {deviator_basis(0).matrix().transpose() * t.components()};

  std::array<std::vector<Eigen::VectorXd>, kDim> sub;
  for (int k = 0; k < kDim; ++k) sub[k] = analyze(t.slice(k));

  const Level& prev = level(n - 1);
  const Level& cur = level(n);
  std::vector<Eigen::VectorXd> out(cur.labels.size());
  for (std::size_t p = 0; p < prev.labels.size(); ++p) {
    const auto& fm = forward_map(prev.labels[p].s);
    Eigen::VectorXd g(kDim * fm.slice_dim());
    for (int k = 0; k < kDim; ++k) g.segment(k * fm.slice_dim(), fm.slice_dim()) = sub[k][p];
    const Eigen::VectorXd child = fm.lu.solve(g);
    for (std::size_t c = 0; c < fm.child_orders.size(); ++c) {
      const int role = fm.child_orders.size() == 1 ? 2 : static_cast<int>(c);
      out[cur.children[p][role]] =
          child.segment(fm.child_offsets[c], 2 * fm.child_orders[c] + 1);
    }
  }
  return out;
}

int label_index(int order, int s, int J) {
  const auto& labels = level(order).labels;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].s == s && labels[i].J == J) return static_cast<int>(i);
  return -1;
}

double relative(double value, double scale) { return scale > 0.0 ? value / scale : value; }

}  // namespace

const std::vector<PartLabel>& part_labels(int order) { return level(order).labels; }

GParts extract_from_G(const Tensor& g) {
  const int n = g.order() - 1;
  if (n < 2) throw std::invalid_argument("extract_from_G: requires order >= 3");
  const auto& basis = deviator_basis(n);
  Eigen::VectorXd c(kDim * basis.dimension());
  double off = 0.0;
  for (int k = 0; k < kDim; ++k) {
    const Tensor sl = g.slice(k);
    const Eigen::VectorXd ck = basis.matrix().transpose() * sl.components();
    off = std::max(off, (sl.components() - basis.matrix() * ck).norm());
    c.segment(k * basis.dimension(), basis.dimension()) = ck;
  }
  if (off > 1e-9 * g.norm())
    throw std::invalid_argument("extract_from_G: tensor is not symmetric and traceless in its "
                                "last indices (distance " + std::to_string(off) + ")");

  const auto& fm = forward_map(n);
  const Eigen::VectorXd child = fm.lu.solve(c);
  auto part = [&](int i) {
    const int o = fm.child_orders[i];
    return from_coords({o, child.segment(fm.child_offsets[i], 2 * o + 1)});
  };
  return {part(0), part(1), part(2)};
}

Decomposition decompose(const Tensor& t) {
  const int n = t.order();
  const auto coords_per_part = analyze(t);
  const auto& labels = part_labels(n);

  Decomposition d;
  d.order = n;
  d.parts.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& c = coords_per_part[i];
    d.parts.push_back({labels[i].s, labels[i].J, from_coords({labels[i].s, c}),
                       Tensor(n, embed_coords(n, static_cast<int>(i), c))});
  }
  return d;
}

Tensor reconstruct(const Decomposition& d) {
  Tensor sum(d.order);
  for (const auto& p : d.parts) sum += p.embedded;
  return sum;
}

Tensor embed_part(int order, int s, int J, const Tensor& deviator) {
  if (deviator.order() != s)
    throw std::invalid_argument("embed_part: deviator order differs from s");
  const int i = label_index(order, s, J);
  if (i < 0)
    throw std::invalid_argument("embed_part: no part (s=" + std::to_string(s) + ", J=" +
                                std::to_string(J) + ") at order " + std::to_string(order));
  return Tensor(order, embed_coords(order, i, coords(deviator).values));
}

std::vector<std::string> VerifyReport::failures(double tol) const {
  std::vector<std::string> out;
  auto check = [&](const char* name, double value) {
    if (!(value <= tol)) out.push_back(std::string(name) + " = " + std::to_string(value));
  };
  if (!counts_ok) out.emplace_back("part labels do not match the expected counts");
  check("reconstruction residual", reconstruction_residual);
  check("deviator symmetry residual", max_symmetry_residual);
  check("deviator trace residual", max_trace_residual);
  check("embedding residual", max_embedding_residual);
  check("orthogonality", max_orthogonality);
  return out;
}

VerifyReport verify(const Decomposition& d, const Tensor& t) {
  if (d.order != t.order()) throw std::invalid_argument("verify: order mismatch");
  const int n = t.order();
  const double scale = t.norm();
  VerifyReport r;
  r.order = n;

  const auto& labels = part_labels(n);
  r.counts_ok = d.parts.size() == labels.size();
  for (std::size_t i = 0; r.counts_ok && i < labels.size(); ++i)
    r.counts_ok = d.parts[i].s == labels[i].s && d.parts[i].J == labels[i].J;

  Tensor sum(n);
  for (const auto& p : d.parts) {
    if (p.embedded.order() != n || p.deviator.order() != p.s) {
      r.counts_ok = false;
      r.max_embedding_residual = std::numeric_limits<double>::infinity();
      continue;
    }
    sum += p.embedded;
    const double dn = p.deviator.norm();
    r.max_symmetry_residual =
        std::max(r.max_symmetry_residual, relative(symmetry_residual(p.deviator), dn));
    r.max_trace_residual =
        std::max(r.max_trace_residual, relative(trace_residual(p.deviator), dn));
    const int i = label_index(n, p.s, p.J);
    if (i < 0) {
      r.max_embedding_residual = std::numeric_limits<double>::infinity();
      continue;
    }
    const Tensor replay(n, embed_coords(n, i, coords(project_deviator(p.deviator)).values));
    r.max_embedding_residual =
        std::max(r.max_embedding_residual, relative((replay - p.embedded).norm(), scale));
  }
  r.reconstruction_residual = relative((sum - t).norm(), scale);

  // Normalized Gram matrix of the parts that are not negligibly small.
  const double floor = 1e-12 * scale;
  std::vector<const Tensor*> kept;
  for (const auto& p : d.parts)
    if (p.embedded.order() == n && p.embedded.norm() > floor) kept.push_back(&p.embedded);
  Eigen::MatrixXd unit(component_count(n), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i)
    unit.col(i) = kept[i]->components() / kept[i]->norm();
  Eigen::MatrixXd gram = unit.transpose() * unit;
  gram.diagonal().setZero();
  if (gram.size() > 0) r.max_orthogonality = gram.cwiseAbs().maxCoeff();
  return r;
}

}  // namespace devdec
