#ifndef DEVDEC_TENSOR_HPP
#define DEVDEC_TENSOR_HPP

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace devdec {

/// Spatial dimension. Everything in this library lives in three dimensions.
inline constexpr int kDim = 3;

/// Largest order a DenseTensor may take (3^12 = 531441 components).
inline constexpr int kMaxOrder = 12;

/// Number of components of an order-`order` tensor, i.e. 3^order.
constexpr Eigen::Index component_count(int order) {
  Eigen::Index n = 1;
  for (int i = 0; i < order; ++i) n *= kDim;
  return n;
}

namespace detail {

inline int checked_order(int order) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("tensor order " + std::to_string(order) +
                                " outside [0, " + std::to_string(kMaxOrder) +
                                "]");
  return order;
}

// Row-major offset: (i1, ..., in) -> sum_k i_k 3^(n-k).
inline Eigen::Index offset_of(std::span<const int> index) {
  Eigen::Index off = 0;
  for (int i : index) off = off * kDim + i;
  return off;
}

inline void unravel(Eigen::Index offset, std::span<int> index) {
  for (std::size_t k = index.size(); k-- > 0;) {
    index[k] = static_cast<int>(offset % kDim);
    offset /= kDim;
  }
}

}  // namespace detail

/// Dense tensor of arbitrary order over R^3.
///
/// Components are stored flat in row-major index order: the multi-index
/// (i1, ..., in), each entry in {0, 1, 2}, lives at offset sum_k i_k 3^(n-k).
/// Order 0 is a scalar (one component), order 1 a vector (three).
template <typename Scalar_>
class DenseTensor {
 public:
  using Scalar = Scalar_;
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  DenseTensor() : DenseTensor(0) {}

  explicit DenseTensor(int order)
      : order_(detail::checked_order(order)),
        data_(Storage::Zero(component_count(order))) {}

  DenseTensor(int order, Storage components)
      : order_(detail::checked_order(order)), data_(std::move(components)) {
    if (data_.size() != component_count(order_))
      throw std::invalid_argument(
          "order-" + std::to_string(order_) + " tensor needs " +
          std::to_string(component_count(order_)) + " components, got " +
          std::to_string(data_.size()));
  }

  static DenseTensor Zero(int order) { return DenseTensor(order); }

  static DenseTensor from_scalar(Scalar value) {
    DenseTensor t(0);
    t.data_[0] = value;
    return t;
  }

  static DenseTensor vector(Scalar x, Scalar y, Scalar z) {
    DenseTensor t(1);
    t.data_ << x, y, z;
    return t;
  }

  /// Cartesian basis vector e_axis (axis in {0, 1, 2}).
  static DenseTensor unit(int axis) {
    DenseTensor t(1);
    t.data_[axis] = Scalar(1);
    return t;
  }

  int order() const noexcept { return order_; }
  Eigen::Index size() const noexcept { return data_.size(); }

  const Storage& components() const noexcept { return data_; }
  Storage& components() noexcept { return data_; }

  Scalar operator[](Eigen::Index offset) const { return data_[offset]; }
  Scalar& operator[](Eigen::Index offset) { return data_[offset]; }

  Scalar operator()(std::span<const int> index) const {
    return data_[checked_offset(index)];
  }
  Scalar& operator()(std::span<const int> index) {
    return data_[checked_offset(index)];
  }

  template <typename... I>
    requires(std::is_integral_v<I> && ...)
  Scalar operator()(I... index) const {
    const std::array<int, sizeof...(I)> idx{static_cast<int>(index)...};
    return (*this)(std::span<const int>(idx));
  }
  template <typename... I>
    requires(std::is_integral_v<I> && ...)
  Scalar& operator()(I... index) {
    const std::array<int, sizeof...(I)> idx{static_cast<int>(index)...};
    return (*this)(std::span<const int>(idx));
  }

  /// The order-(n-1) tensor t[k, ...].
  DenseTensor slice(int k) const {
    if (order_ == 0) throw std::invalid_argument("cannot slice a scalar");
    const Eigen::Index n = component_count(order_ - 1);
    return DenseTensor(order_ - 1, data_.segment(k * n, n));
  }

  Scalar norm() const { return data_.norm(); }

  template <typename NewScalar>
  DenseTensor<NewScalar> cast() const {
    return DenseTensor<NewScalar>(order_, data_.template cast<NewScalar>());
  }

  DenseTensor& operator+=(const DenseTensor& other) {
    require_same_order(other);
    data_ += other.data_;
    return *this;
  }
  DenseTensor& operator-=(const DenseTensor& other) {
    require_same_order(other);
    data_ -= other.data_;
    return *this;
  }
  DenseTensor& operator*=(Scalar s) {
    data_ *= s;
    return *this;
  }
  DenseTensor& operator/=(Scalar s) {
    data_ /= s;
    return *this;
  }

  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(DenseTensor a, Scalar s) { return a *= s; }
  friend DenseTensor operator*(Scalar s, DenseTensor a) { return a *= s; }
  friend DenseTensor operator/(DenseTensor a, Scalar s) { return a /= s; }
  friend DenseTensor operator-(DenseTensor a) {
    a.data_ = -a.data_;
    return a;
  }

  friend bool operator==(const DenseTensor& a, const DenseTensor& b) {
    return a.order_ == b.order_ && a.data_ == b.data_;
  }

 private:
  Eigen::Index checked_offset(std::span<const int> index) const {
    if (static_cast<int>(index.size()) != order_)
      throw std::invalid_argument("index arity does not match tensor order");
    for (int i : index)
      if (i < 0 || i >= kDim) throw std::out_of_range("tensor index out of range");
    return detail::offset_of(index);
  }

  void require_same_order(const DenseTensor& other) const {
    if (other.order_ != order_)
      throw std::invalid_argument("tensor order mismatch: " +
                                  std::to_string(order_) + " vs " +
                                  std::to_string(other.order_));
  }

  int order_;
  Storage data_;
};

using Tensor = DenseTensor<double>;

// ---------------------------------------------------------------------------
// Constant tensors

/// Kronecker delta.
template <typename Scalar = double>
DenseTensor<Scalar> delta() {
  DenseTensor<Scalar> d(2);
  for (int i = 0; i < kDim; ++i) d(i, i) = Scalar(1);
  return d;
}

/// Levi-Civita symbol: +1 on even permutations of (0,1,2), -1 on odd ones.
template <typename Scalar = double>
DenseTensor<Scalar> epsilon() {
  DenseTensor<Scalar> e(3);
  e(0, 1, 2) = e(1, 2, 0) = e(2, 0, 1) = Scalar(1);
  e(0, 2, 1) = e(2, 1, 0) = e(1, 0, 2) = Scalar(-1);
  return e;
}

// ---------------------------------------------------------------------------
// Products and contractions

/// C_{i.. j..} = A_{i..} B_{j..}
template <typename Scalar>
DenseTensor<Scalar> outer(const DenseTensor<Scalar>& a, const DenseTensor<Scalar>& b) {
  DenseTensor<Scalar> c(a.order() + b.order());
  // Column-major outer product: element (j, i) is a_i b_j, which is exactly
  // the row-major layout of the result.
  c.components().reshaped(b.size(), a.size()) =
      b.components() * a.components().transpose();
  return c;
}

/// Complete contraction A[B]: B is summed against the FIRST m indices of A,
///   result_{i_{m+1}..i_n} = A_{i_1..i_m i_{m+1}..i_n} B_{i_1..i_m}.
/// m = 0 multiplies A by the scalar B.
template <typename Scalar>
DenseTensor<Scalar> contract_complete(const DenseTensor<Scalar>& a,
                                      const DenseTensor<Scalar>& b) {
  if (b.order() > a.order())
    throw std::invalid_argument("contract_complete: order of B exceeds order of A");
  const Eigen::Index rest = component_count(a.order() - b.order());
  DenseTensor<Scalar> c(a.order() - b.order());
  c.components().noalias() = a.components().reshaped(rest, b.size()) * b.components();
  return c;
}

/// Contracts the last `count` indices of A with the first `count` indices of B.
template <typename Scalar>
DenseTensor<Scalar> contract_last_first(const DenseTensor<Scalar>& a,
                                        const DenseTensor<Scalar>& b, int count) {
  if (count < 0 || count > a.order() || count > b.order())
    throw std::invalid_argument("contract_last_first: invalid index count");
  const Eigen::Index inner = component_count(count);
  const Eigen::Index a_outer = component_count(a.order() - count);
  const Eigen::Index b_outer = component_count(b.order() - count);
  DenseTensor<Scalar> c(a.order() + b.order() - 2 * count);
  c.components().reshaped(b_outer, a_outer).noalias() =
      b.components().reshaped(b_outer, inner) *
      a.components().reshaped(inner, a_outer);
  return c;
}

/// A . B, summing the last index of A against the first of B.
template <typename Scalar>
DenseTensor<Scalar> contract_single(const DenseTensor<Scalar>& a,
                                    const DenseTensor<Scalar>& b) {
  return contract_last_first(a, b, 1);
}

/// A : B, summing the last two indices of A against the first two of B.
template <typename Scalar>
DenseTensor<Scalar> contract_double(const DenseTensor<Scalar>& a,
                                    const DenseTensor<Scalar>& b) {
  return contract_last_first(a, b, 2);
}

/// Frobenius inner product: sum over all indices of a_I b_I.
template <typename Scalar>
Scalar frobenius(const DenseTensor<Scalar>& a, const DenseTensor<Scalar>& b) {
  if (a.order() != b.order())
    throw std::invalid_argument("frobenius: tensor order mismatch");
  return a.components().dot(b.components());
}

// ---------------------------------------------------------------------------
// Index manipulation

/// Index permutation: result(i_0, .., i_{n-1}) = t(i_{perm[0]}, .., i_{perm[n-1]}).
template <typename Scalar>
DenseTensor<Scalar> permute(const DenseTensor<Scalar>& t, std::span<const int> perm) {
  const int n = t.order();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute: permutation length differs from order");
  std::vector<int> seen(perm.begin(), perm.end());
  std::sort(seen.begin(), seen.end());
  for (int k = 0; k < n; ++k)
    if (seen[k] != k) throw std::invalid_argument("permute: not a permutation");

  DenseTensor<Scalar> r(n);
  std::vector<int> idx(n), src(n);
  for (Eigen::Index off = 0; off < r.size(); ++off) {
    detail::unravel(off, idx);
    for (int k = 0; k < n; ++k) src[k] = idx[perm[k]];
    r[off] = t[detail::offset_of(src)];
  }
  return r;
}

template <typename Scalar>
DenseTensor<Scalar> permute(const DenseTensor<Scalar>& t, std::initializer_list<int> perm) {
  return permute(t, std::span<const int>(perm.begin(), perm.size()));
}

/// Average of t over all permutations of the index positions in `positions`
/// (0-based); the remaining positions are left alone. With every position
/// selected this is the total symmetrization.
///
/// Averaging over the m! position permutations weights each distinct
/// rearrangement of the selected index values equally, so only the distinct
/// rearrangements (at most 3^m) are visited.
template <typename Scalar>
DenseTensor<Scalar> symmetrize(const DenseTensor<Scalar>& t, std::span<const int> positions) {
  const int n = t.order();
  std::vector<int> pos(positions.begin(), positions.end());
  for (int p : pos)
    if (p < 0 || p >= n) throw std::invalid_argument("symmetrize: position out of range");
  {
    auto sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("symmetrize: repeated position");
  }
  if (pos.size() < 2) return t;

  DenseTensor<Scalar> r(n);
  std::vector<int> idx(n), src(n), values(pos.size());
  for (Eigen::Index off = 0; off < r.size(); ++off) {
    detail::unravel(off, idx);
    for (std::size_t a = 0; a < pos.size(); ++a) values[a] = idx[pos[a]];
    std::sort(values.begin(), values.end());
    src = idx;
    Scalar sum(0);
    int count = 0;
    do {
      for (std::size_t a = 0; a < pos.size(); ++a) src[pos[a]] = values[a];
      sum += t[detail::offset_of(src)];
      ++count;
    } while (std::next_permutation(values.begin(), values.end()));
    r[off] = sum / Scalar(count);
  }
  return r;
}

template <typename Scalar>
DenseTensor<Scalar> symmetrize(const DenseTensor<Scalar>& t, std::initializer_list<int> positions) {
  return symmetrize(t, std::span<const int>(positions.begin(), positions.size()));
}

/// Total symmetrization sT.
template <typename Scalar>
DenseTensor<Scalar> symmetrize(const DenseTensor<Scalar>& t) {
  std::vector<int> all(t.order());
  std::iota(all.begin(), all.end(), 0);
  return symmetrize(t, std::span<const int>(all));
}

/// Trace over index positions p and q (0-based), giving an order n-2 tensor.
template <typename Scalar>
DenseTensor<Scalar> trace_pair(const DenseTensor<Scalar>& t, int p, int q) {
  const int n = t.order();
  if (n < 2) throw std::invalid_argument("trace_pair: order must be at least 2");
  if (p == q) throw std::invalid_argument("trace_pair: positions must differ");
  if (p < 0 || q < 0 || p >= n || q >= n)
    throw std::invalid_argument("trace_pair: position out of range");

  DenseTensor<Scalar> r(n - 2);
  std::vector<int> idx(n), rest(n - 2);
  for (Eigen::Index off = 0; off < t.size(); ++off) {
    detail::unravel(off, idx);
    if (idx[p] != idx[q]) continue;
    for (int k = 0, m = 0; k < n; ++k)
      if (k != p && k != q) rest[m++] = idx[k];
    r[detail::offset_of(rest)] += t[off];
  }
  return r;
}

/// Largest Frobenius deviation of t from its image under a swap of two
/// neighbouring indices. Zero exactly when t is totally symmetric.
template <typename Scalar>
Scalar symmetry_residual(const DenseTensor<Scalar>& t) {
  Scalar worst(0);
  std::vector<int> perm(t.order());
  for (int k = 0; k + 1 < t.order(); ++k) {
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[k], perm[k + 1]);
    worst = std::max(worst, (permute(t, std::span<const int>(perm)) - t).norm());
  }
  return worst;
}

/// Norm of the (1,2)-trace; for a totally symmetric tensor every trace agrees.
template <typename Scalar>
Scalar trace_residual(const DenseTensor<Scalar>& t) {
  return t.order() < 2 ? Scalar(0) : trace_pair(t, 0, 1).norm();
}

// ---------------------------------------------------------------------------
// Index-notation evaluation

namespace detail {

template <typename Scalar>
DenseTensor<Scalar> einsum_impl(std::string_view spec,
                                std::span<const DenseTensor<Scalar>* const> ops) {
  const auto arrow = spec.find("->");
  if (arrow == std::string_view::npos) throw std::invalid_argument("einsum: missing '->'");
  const std::string_view lhs = spec.substr(0, arrow);
  const std::string_view out = spec.substr(arrow + 2);

  std::vector<std::string_view> inputs;
  for (std::size_t start = 0;;) {
    const auto comma = lhs.find(',', start);
    inputs.push_back(lhs.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (inputs.size() != ops.size())
    throw std::invalid_argument("einsum: operand count does not match spec");

  std::string labels;
  auto add_label = [&](char c) {
    if (labels.find(c) == std::string::npos) labels.push_back(c);
  };
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (static_cast<int>(inputs[k].size()) != ops[k]->order())
      throw std::invalid_argument("einsum: label count does not match operand order");
    for (char c : inputs[k]) add_label(c);
  }
  for (char c : out)
    if (labels.find(c) == std::string::npos)
      throw std::invalid_argument("einsum: output label not present in inputs");

  auto positions = [&](std::string_view s) {
    std::vector<int> p;
    for (char c : s) p.push_back(static_cast<int>(labels.find(c)));
    return p;
  };
  std::vector<std::vector<int>> in_pos;
  for (auto s : inputs) in_pos.push_back(positions(s));
  const auto out_pos = positions(out);

  DenseTensor<Scalar> r(static_cast<int>(out.size()));
  std::vector<int> value(labels.size(), 0);
  auto offset_for = [&](const std::vector<int>& p) {
    Eigen::Index off = 0;
    for (int l : p) off = off * kDim + value[l];
    return off;
  };
  const Eigen::Index total = component_count(static_cast<int>(labels.size()));
  for (Eigen::Index step = 0; step < total; ++step) {
    unravel(step, value);
    Scalar prod(1);
    for (std::size_t k = 0; k < ops.size() && prod != Scalar(0); ++k)
      prod *= (*ops[k])[offset_for(in_pos[k])];
    if (prod != Scalar(0)) r[offset_for(out_pos)] += prod;
  }
  return r;
}

}  // namespace detail

/// Evaluates an index-notation expression, e.g.
///   einsum("jkt,tis,s->ijk", eps, eps, v)
/// sums over every label absent from the output. Brute force over all label
/// assignments, intended for the small expressions of closed-form terms.
template <typename Scalar, typename... Rest>
DenseTensor<Scalar> einsum(std::string_view spec, const DenseTensor<Scalar>& first,
                           const Rest&... rest) {
  const std::array<const DenseTensor<Scalar>*, 1 + sizeof...(Rest)> ops{&first, &rest...};
  return detail::einsum_impl<Scalar>(spec, std::span<const DenseTensor<Scalar>* const>(ops));
}

}  // namespace devdec

#endif  // DEVDEC_TENSOR_HPP
