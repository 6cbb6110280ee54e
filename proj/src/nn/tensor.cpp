#include "nn/tensor.hpp"

#include "common/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

namespace emai::nn {

namespace {

using detail::Node;
using NodePtr = std::shared_ptr<Node>;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

ConstMap as_mat(const std::vector<double>& v, std::size_t r, std::size_t c) {
  return ConstMap(v.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}
MutMap as_mat(std::vector<double>& v, std::size_t r, std::size_t c) {
  return MutMap(v.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

void check_finite(const std::vector<double>& v, const char* op) {
  for (double x : v) {
    if (!std::isfinite(x)) fail(ErrorCode::kNumeric, std::string("non-finite value produced by ") + op);
  }
}

std::string shape_of(const Node& n) {
  return "[" + std::to_string(n.rows) + " x " + std::to_string(n.cols) + "]";
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::kInvalidArgument,
          std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
}

Tensor make_result(std::size_t rows, std::size_t cols, std::vector<double> value,
                   std::vector<NodePtr> parents, std::function<void(Node&)> fn, const char* op) {
  check_finite(value, op);
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->value = std::move(value);
  node->requires_grad = std::any_of(parents.begin(), parents.end(),
                                    [](const NodePtr& p) { return p->requires_grad; });
  if (node->requires_grad) {
    node->parents = std::move(parents);
    node->backward_fn = std::move(fn);
  }
  return Tensor(std::move(node));
}

// Elementwise unary op with derivative expressed through input and output.
template <typename F, typename D>
Tensor unary(const Tensor& a, F f, D dfdx, const char* op) {
  std::vector<double> out(a.size());
  const auto in = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(in[i]);
  return make_result(a.rows(), a.cols(), std::move(out), {a.node()},
                     [dfdx](Node& self) {
                       Node& p = *self.parents[0];
                       if (!p.requires_grad) return;
                       auto& g = p.ensure_grad();
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         g[i] += self.grad[i] * dfdx(p.value[i], self.value[i]);
                       }
                     },
                     op);
}

}  // namespace

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data, bool requires_grad) {
  require(data.size() == rows * cols, ErrorCode::kInvalidArgument,
          "tensor data length " + std::to_string(data.size()) + " does not match shape [" +
              std::to_string(rows) + " x " + std::to_string(cols) + "]");
  check_finite(data, "tensor construction");
  node_ = std::make_shared<Node>();
  node_->rows = rows;
  node_->cols = cols;
  node_->value = std::move(data);
  node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(std::size_t rows, std::size_t cols, bool requires_grad) {
  return Tensor(rows, cols, std::vector<double>(rows * cols, 0.0), requires_grad);
}

Tensor Tensor::scalar(double v, bool requires_grad) { return Tensor(1, 1, {v}, requires_grad); }

std::string Tensor::shape_str() const { return shape_of(*node_); }

double Tensor::item() const {
  require(size() == 1, ErrorCode::kInvalidArgument, "item() on non-scalar tensor " + shape_str());
  return node_->value[0];
}

void Tensor::zero_grad() { node_->grad.assign(node_->value.size(), 0.0); }

void Tensor::backward() const {
  require(size() == 1, ErrorCode::kInvalidArgument,
          "backward() needs a scalar loss, got " + shape_str());
  if (!node_->requires_grad) return;

  // Iterative post-order DFS yields a topological order (parents first).
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      Node* p = n->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  node_->ensure_grad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward_fn) {
      n->backward_fn(*n);
      check_finite(n->grad, "backward pass");
    }
  }
  for (Node* n : order) {
    if (n->backward_fn) {
      n->backward_fn = nullptr;
      n->parents.clear();
      n->grad.clear();
    }
  }
  for (Node* n : order) {
    if (!n->backward_fn && n->parents.empty() && !n->grad.empty()) check_finite(n->grad, "leaf gradient");
  }
}

Tensor Tensor::detach() const { return Tensor(rows(), cols(), node_->value, false); }

Tensor Tensor::clone() const { return Tensor(rows(), cols(), node_->value, node_->requires_grad); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  require(a.cols() == b.rows(), ErrorCode::kInvalidArgument,
          "matmul: shape mismatch " + a.shape_str() + " x " + b.shape_str());
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<double> out(m * n);
  as_mat(out, m, n).noalias() =
      as_mat(std::as_const(a.node()->value), m, k) * as_mat(std::as_const(b.node()->value), k, n);
  return make_result(m, n, std::move(out), {a.node(), b.node()},
                     [m, k, n](Node& self) {
                       Node& pa = *self.parents[0];
                       Node& pb = *self.parents[1];
                       const auto g = as_mat(std::as_const(self.grad), m, n);
                       if (pa.requires_grad) {
                         as_mat(pa.ensure_grad(), m, k).noalias() += g * as_mat(std::as_const(pb.value), k, n).transpose();
                       }
                       if (pb.requires_grad) {
                         as_mat(pb.ensure_grad(), k, n).noalias() += as_mat(std::as_const(pa.value), m, k).transpose() * g;
                       }
                     },
                     "matmul");
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  return make_result(a.rows(), a.cols(), std::move(out), {a.node(), b.node()},
                     [](Node& self) {
                       for (auto& p : self.parents) {
                         if (!p->requires_grad) continue;
                         auto& g = p->ensure_grad();
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                       }
                     },
                     "add");
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] - b.data()[i];
  return make_result(a.rows(), a.cols(), std::move(out), {a.node(), b.node()},
                     [](Node& self) {
                       const double sign[2] = {1.0, -1.0};
                       for (int k = 0; k < 2; ++k) {
                         Node& p = *self.parents[k];
                         if (!p.requires_grad) continue;
                         auto& g = p.ensure_grad();
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += sign[k] * self.grad[i];
                       }
                     },
                     "sub");
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
  return make_result(a.rows(), a.cols(), std::move(out), {a.node(), b.node()},
                     [](Node& self) {
                       Node& pa = *self.parents[0];
                       Node& pb = *self.parents[1];
                       if (pa.requires_grad) {
                         auto& g = pa.ensure_grad();
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * pb.value[i];
                       }
                       if (pb.requires_grad) {
                         auto& g = pb.ensure_grad();
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * pa.value[i];
                       }
                     },
                     "mul");
}

Tensor add_row(const Tensor& a, const Tensor& bias) {
  require(bias.rows() == 1 && bias.cols() == a.cols(), ErrorCode::kInvalidArgument,
          "add_row: shape mismatch " + a.shape_str() + " + " + bias.shape_str());
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(a.size());
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = a.data()[r * n + c] + bias.data()[c];
  }
  return make_result(m, n, std::move(out), {a.node(), bias.node()},
                     [m, n](Node& self) {
                       Node& pa = *self.parents[0];
                       Node& pb = *self.parents[1];
                       if (pa.requires_grad) {
                         auto& g = pa.ensure_grad();
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                       }
                       if (pb.requires_grad) {
                         auto& g = pb.ensure_grad();
                         for (std::size_t r = 0; r < m; ++r) {
                           for (std::size_t c = 0; c < n; ++c) g[c] += self.grad[r * n + c];
                         }
                       }
                     },
                     "add_row");
}

Tensor scale(const Tensor& a, double s) {
  return unary(a, [s](double x) { return s * x; }, [s](double, double) { return s; }, "scale");
}

Tensor add_scalar(const Tensor& a, double s) {
  return unary(a, [s](double x) { return x + s; }, [](double, double) { return 1.0; }, "add_scalar");
}

Tensor relu(const Tensor& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; }, "relu");
}

Tensor elu(const Tensor& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : std::expm1(x); },
               [](double x, double y) { return x > 0.0 ? 1.0 : y + 1.0; }, "elu");
}

Tensor abs(const Tensor& a) {
  return unary(a, [](double x) { return std::fabs(x); },
               [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }, "abs");
}

Tensor square(const Tensor& a) {
  return unary(a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; }, "square");
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double v : a.data()) s += v;
  return make_result(1, 1, {s}, {a.node()},
                     [](Node& self) {
                       Node& p = *self.parents[0];
                       if (!p.requires_grad) return;
                       auto& g = p.ensure_grad();
                       for (double& v : g) v += self.grad[0];
                     },
                     "sum");
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.size())); }

Tensor reshape(const Tensor& a, std::size_t rows, std::size_t cols) {
  require(rows * cols == a.size(), ErrorCode::kInvalidArgument,
          "reshape: cannot view " + a.shape_str() + " as [" + std::to_string(rows) + " x " +
              std::to_string(cols) + "]");
  return make_result(rows, cols, std::vector<double>(a.data().begin(), a.data().end()), {a.node()},
                     [](Node& self) {
                       Node& p = *self.parents[0];
                       if (!p.requires_grad) return;
                       auto& g = p.ensure_grad();
                       for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                     },
                     "reshape");
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  require(begin < end && end <= a.cols(), ErrorCode::kInvalidArgument,
          "slice_cols: range [" + std::to_string(begin) + ", " + std::to_string(end) +
              ") out of bounds for " + a.shape_str());
  const std::size_t m = a.rows(), n = a.cols(), w = end - begin;
  std::vector<double> out(m * w);
  for (std::size_t r = 0; r < m; ++r) {
    std::copy_n(a.data().begin() + static_cast<std::ptrdiff_t>(r * n + begin), w,
                out.begin() + static_cast<std::ptrdiff_t>(r * w));
  }
  return make_result(m, w, std::move(out), {a.node()},
                     [m, n, w, begin](Node& self) {
                       Node& p = *self.parents[0];
                       if (!p.requires_grad) return;
                       auto& g = p.ensure_grad();
                       for (std::size_t r = 0; r < m; ++r) {
                         for (std::size_t c = 0; c < w; ++c) g[r * n + begin + c] += self.grad[r * w + c];
                       }
                     },
                     "slice_cols");
}

Tensor gather_cols(const Tensor& a, std::span<const int> index) {
  require(index.size() == a.rows(), ErrorCode::kInvalidArgument,
          "gather_cols: " + std::to_string(index.size()) + " indices for " + a.shape_str());
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<std::size_t> idx(m);
  std::vector<double> out(m);
  for (std::size_t r = 0; r < m; ++r) {
    require(index[r] >= 0 && static_cast<std::size_t>(index[r]) < n, ErrorCode::kInvalidArgument,
            "gather_cols: index " + std::to_string(index[r]) + " out of range for " + a.shape_str());
    idx[r] = r * n + static_cast<std::size_t>(index[r]);
    out[r] = a.data()[idx[r]];
  }
  return make_result(m, 1, std::move(out), {a.node()},
                     [idx = std::move(idx)](Node& self) {
                       Node& p = *self.parents[0];
                       if (!p.requires_grad) return;
                       auto& g = p.ensure_grad();
                       for (std::size_t r = 0; r < idx.size(); ++r) g[idx[r]] += self.grad[r];
                     },
                     "gather_cols");
}

Tensor rowwise_vecmat(const Tensor& q, const Tensor& w, std::size_t width) {
  const std::size_t b = q.rows(), n = q.cols();
  require(w.rows() == b && w.cols() == n * width, ErrorCode::kInvalidArgument,
          "rowwise_vecmat: " + q.shape_str() + " against " + w.shape_str() + " with width " +
              std::to_string(width));
  std::vector<double> out(b * width, 0.0);
  const auto qd = q.data();
  const auto wd = w.data();
  for (std::size_t r = 0; r < b; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const double qi = qd[r * n + i];
      const double* wrow = &wd[r * n * width + i * width];
      double* o = &out[r * width];
      for (std::size_t e = 0; e < width; ++e) o[e] += qi * wrow[e];
    }
  }
  return make_result(b, width, std::move(out), {q.node(), w.node()},
                     [b, n, width](Node& self) {
                       Node& pq = *self.parents[0];
                       Node& pw = *self.parents[1];
                       for (std::size_t r = 0; r < b; ++r) {
                         const double* g = &self.grad[r * width];
                         for (std::size_t i = 0; i < n; ++i) {
                           const std::size_t off = r * n * width + i * width;
                           if (pq.requires_grad) {
                             double acc = 0.0;
                             for (std::size_t e = 0; e < width; ++e) acc += g[e] * pw.value[off + e];
                             pq.ensure_grad()[r * n + i] += acc;
                           }
                           if (pw.requires_grad) {
                             auto& gw = pw.ensure_grad();
                             const double qi = pq.value[r * n + i];
                             for (std::size_t e = 0; e < width; ++e) gw[off + e] += g[e] * qi;
                           }
                         }
                       }
                     },
                     "rowwise_vecmat");
}

Tensor row_dot(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "row_dot");
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) out[r] += a.data()[r * n + c] * b.data()[r * n + c];
  }
  return make_result(m, 1, std::move(out), {a.node(), b.node()},
                     [m, n](Node& self) {
                       Node& pa = *self.parents[0];
                       Node& pb = *self.parents[1];
                       for (std::size_t r = 0; r < m; ++r) {
                         for (std::size_t c = 0; c < n; ++c) {
                           const std::size_t i = r * n + c;
                           if (pa.requires_grad) pa.ensure_grad()[i] += self.grad[r] * pb.value[i];
                           if (pb.requires_grad) pb.ensure_grad()[i] += self.grad[r] * pa.value[i];
                         }
                       }
                     },
                     "row_dot");
}

Tensor log_softmax_rows(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(a.size());
  for (std::size_t r = 0; r < m; ++r) {
    const double* x = &a.data()[r * n];
    const double mx = *std::max_element(x, x + n);
    double z = 0.0;
    for (std::size_t c = 0; c < n; ++c) z += std::exp(x[c] - mx);
    const double lse = mx + std::log(z);
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = x[c] - lse;
  }
  return make_result(m, n, std::move(out), {a.node()},
                     [m, n](Node& self) {
                       Node& p = *self.parents[0];
                       if (!p.requires_grad) return;
                       auto& g = p.ensure_grad();
                       for (std::size_t r = 0; r < m; ++r) {
                         double gsum = 0.0;
                         for (std::size_t c = 0; c < n; ++c) gsum += self.grad[r * n + c];
                         for (std::size_t c = 0; c < n; ++c) {
                           const std::size_t i = r * n + c;
                           g[i] += self.grad[i] - std::exp(self.value[i]) * gsum;
                         }
                       }
                     },
                     "log_softmax_rows");
}

}  // namespace emai::nn
