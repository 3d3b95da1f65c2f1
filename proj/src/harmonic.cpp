#include "devdec/harmonic.hpp"

#include <Eigen/LU>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace devdec {

DeviatorBasis::DeviatorBasis(int order, Eigen::MatrixXd columns)
    : order_(order), columns_(std::move(columns)) {
  if (columns_.rows() != component_count(order_))
    throw std::invalid_argument("DeviatorBasis: row count must be 3^order");
  if (columns_.cols() != 2 * order_ + 1)
    throw std::invalid_argument("DeviatorBasis: expected 2s+1 elements");
}

std::vector<Tensor> DeviatorBasis::elements() const {
  std::vector<Tensor> out;
  out.reserve(columns_.cols());
  for (int k = 0; k < dimension(); ++k) out.push_back(element(k));
  return out;
}

namespace {

// Nondecreasing index tuples of length s, lexicographic.
std::vector<std::vector<int>> monomials(int s) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(s, 0);
  for (;;) {
    out.push_back(cur);
    int k = s - 1;
    while (k >= 0 && cur[k] == kDim - 1) --k;
    if (k < 0) break;
    ++cur[k];
    for (int m = k + 1; m < s; ++m) cur[m] = cur[k];
  }
  return out;
}

// Columns: sym(e_{i1} x ... x e_{is}) for every monomial.
Eigen::MatrixXd symmetric_monomial_matrix(int s, const std::vector<std::vector<int>>& mono) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(component_count(s), mono.size());
  std::map<std::vector<int>, int> column_of;
  for (std::size_t c = 0; c < mono.size(); ++c) column_of[mono[c]] = static_cast<int>(c);

  std::vector<Eigen::Index> hits(mono.size(), 0);
  std::vector<int> idx(s);
  for (Eigen::Index off = 0; off < m.rows(); ++off) {
    detail::unravel(off, idx);
    std::sort(idx.begin(), idx.end());
    const int c = column_of.at(idx);
    m(off, c) = 1.0;
    ++hits[c];
  }
  for (std::size_t c = 0; c < mono.size(); ++c) m.col(c) /= static_cast<double>(hits[c]);
  return m;
}

void gram_schmidt(Eigen::MatrixXd& b) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) b.col(j) -= b.col(i).dot(b.col(j)) * b.col(i);
      b.col(j).normalize();
    }
}

}  // namespace

DeviatorBasis build_basis(int s) {
  if (s < 0 || s > kMaxOrder)
    throw std::invalid_argument("build_basis: order " + std::to_string(s) + " out of range");

  const auto mono = monomials(s);
  Eigen::MatrixXd sym = symmetric_monomial_matrix(s, mono);

  Eigen::MatrixXd spanning = sym;
  if (s >= 2) {
    Eigen::MatrixXd trace(component_count(s - 2), sym.cols());
    for (Eigen::Index c = 0; c < sym.cols(); ++c)
      trace.col(c) = trace_pair(Tensor(s, sym.col(c)), 0, 1).components();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trace);
    spanning = sym * lu.kernel();
  }
  if (spanning.cols() != 2 * s + 1)
    throw std::logic_error("build_basis: kernel dimension " + std::to_string(spanning.cols()) +
                           " differs from 2s+1 for s=" + std::to_string(s));
  gram_schmidt(spanning);
  return DeviatorBasis(s, std::move(spanning));
}

const DeviatorBasis& deviator_basis(int s) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const DeviatorBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[s];
  if (!slot) slot = std::make_unique<const DeviatorBasis>(build_basis(s));
  return *slot;
}

Tensor project_deviator(const Tensor& t) {
  const auto& b = deviator_basis(t.order()).matrix();
  return Tensor(t.order(), b * (b.transpose() * t.components()));
}

double deviator_residual(const Tensor& t) {
  return std::max(symmetry_residual(t), trace_residual(t));
}

bool is_deviator(const Tensor& t, double tol) {
  return deviator_residual(t) <= tol * t.norm();
}

void require_deviator(const Tensor& t, const char* what, double tol) {
  if (!is_deviator(t, tol))
    throw std::invalid_argument(std::string(what) + " is not a deviator (residual " +
                                std::to_string(deviator_residual(t)) + ")");
}

DeviatorCoords coords(const Tensor& t, const DeviatorBasis& basis) {
  if (t.order() != basis.order())
    throw std::invalid_argument("coords: tensor order differs from basis order");
  Eigen::VectorXd c = basis.matrix().transpose() * t.components();
  const double off = (t.components() - basis.matrix() * c).norm();
  if (off > kDeviatorTolerance * t.norm())
    throw std::invalid_argument("coords: tensor lies outside the deviator space (distance " +
                                std::to_string(off) + ")");
  return {t.order(), std::move(c)};
}

DeviatorCoords coords(const Tensor& t) { return coords(t, deviator_basis(t.order())); }

Tensor from_coords(const DeviatorCoords& c, const DeviatorBasis& basis) {
  if (c.order != basis.order() || c.values.size() != basis.dimension())
    throw std::invalid_argument("from_coords: coordinate vector does not match basis");
  return Tensor(basis.order(), basis.matrix() * c.values);
}

Tensor from_coords(const DeviatorCoords& c) { return from_coords(c, deviator_basis(c.order)); }

}  // namespace devdec
