#include "errid/tape.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "errid/rand.hpp"

namespace errid {

namespace tape_testing {
bool corrupt_tanh_backward = false;
}

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using CMatMap = Eigen::Map<const RowMat>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using CVecMap = Eigen::Map<const Eigen::VectorXd>;

namespace {

CMatMap as_mat(const Tensor& t) { return CMatMap(t.data.data(), t.rows(), t.cols()); }
MatMap as_mat(Tensor& t) { return MatMap(t.data.data(), t.rows(), t.cols()); }
CVecMap as_vec(const Tensor& t) { return CVecMap(t.data.data(), static_cast<long>(t.size())); }
VecMap as_vec(Tensor& t) { return VecMap(t.data.data(), static_cast<long>(t.size())); }

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Tensor& Tape::grad_of(int id) {
  Node& n = nodes_[static_cast<size_t>(id)];
  if (n.grad.data.empty() && val_of(id).size() > 0) n.grad = Tensor::zeros(val_of(id).shape);
  return n.grad;
}

int Tape::push(Tensor val, bool tracked, std::function<void(Tape&, int)> back) {
  Node n;
  n.val = std::move(val);
  n.tracked = tracked;
  if (tracked) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Value Tape::constant(Tensor t) { return {push(std::move(t), false, nullptr)}; }

Value Tape::param(const std::string& name) {
  require(store_ != nullptr, "tape has no parameter store");
  int pidx = store_->index_of(name);
  Node n;
  n.external = &store_->at(pidx).value;
  n.tracked = true;
  n.param_idx = pidx;
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

Value Tape::frozen(const std::string& name) {
  require(store_ != nullptr, "tape has no parameter store");
  int pidx = store_->index_of(name);
  Node n;
  n.external = &store_->at(pidx).value;
  n.tracked = false;
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

Value Tape::add(Value a, Value b) {
  const Tensor& ta = val_of(a.id);
  const Tensor& tb = val_of(b.id);
  check_same_shape(ta, tb, "add");
  Tensor out = ta;
  as_vec(out) += as_vec(tb);
  int ia = a.id, ib = b.id;
  return {push(std::move(out), is_tracked(ia) || is_tracked(ib), [ia, ib](Tape& t, int self) {
    if (t.is_tracked(ia)) as_vec(t.grad_of(ia)) += as_vec(t.grad_of(self));
    if (t.is_tracked(ib)) as_vec(t.grad_of(ib)) += as_vec(t.grad_of(self));
  })};
}

Value Tape::sub(Value a, Value b) {
  const Tensor& ta = val_of(a.id);
  const Tensor& tb = val_of(b.id);
  check_same_shape(ta, tb, "sub");
  Tensor out = ta;
  as_vec(out) -= as_vec(tb);
  int ia = a.id, ib = b.id;
  return {push(std::move(out), is_tracked(ia) || is_tracked(ib), [ia, ib](Tape& t, int self) {
    if (t.is_tracked(ia)) as_vec(t.grad_of(ia)) += as_vec(t.grad_of(self));
    if (t.is_tracked(ib)) as_vec(t.grad_of(ib)) -= as_vec(t.grad_of(self));
  })};
}

Value Tape::mul(Value a, Value b) {
  const Tensor& ta = val_of(a.id);
  const Tensor& tb = val_of(b.id);
  check_same_shape(ta, tb, "mul");
  Tensor out = ta;
  as_vec(out).array() *= as_vec(tb).array();
  int ia = a.id, ib = b.id;
  return {push(std::move(out), is_tracked(ia) || is_tracked(ib), [ia, ib](Tape& t, int self) {
    const Tensor& g = t.grad_of(self);
    if (t.is_tracked(ia))
      as_vec(t.grad_of(ia)).array() += as_vec(g).array() * as_vec(t.val_of(ib)).array();
    if (t.is_tracked(ib))
      as_vec(t.grad_of(ib)).array() += as_vec(g).array() * as_vec(t.val_of(ia)).array();
  })};
}

Value Tape::scale(Value a, double s) {
  Tensor out = val_of(a.id);
  as_vec(out) *= s;
  int ia = a.id;
  return {push(std::move(out), is_tracked(ia), [ia, s](Tape& t, int self) {
    if (t.is_tracked(ia)) as_vec(t.grad_of(ia)) += s * as_vec(t.grad_of(self));
  })};
}

Value Tape::one_minus(Value a) {
  Tensor out = val_of(a.id);
  as_vec(out) = 1.0 - as_vec(out).array();
  int ia = a.id;
  return {push(std::move(out), is_tracked(ia), [ia](Tape& t, int self) {
    if (t.is_tracked(ia)) as_vec(t.grad_of(ia)) -= as_vec(t.grad_of(self));
  })};
}

Value Tape::matmul(Value a, Value b) {
  const Tensor& ta = val_of(a.id);
  const Tensor& tb = val_of(b.id);
  require(ta.rank() == 2, "matmul: left operand must be rank-2, got " + ta.shape_str());
  require(tb.rank() == 1 || tb.rank() == 2,
          "matmul: right operand must be rank-1 or rank-2, got " + tb.shape_str());
  require(ta.cols() == tb.rows(), std::string("matmul: inner dimensions disagree ") +
                                      ta.shape_str() + " vs " + tb.shape_str());
  Tensor out;
  if (tb.rank() == 1) {
    out = Tensor::zeros({ta.rows()});
    as_vec(out) = as_mat(ta) * as_vec(tb);
  } else {
    out = Tensor::zeros({ta.rows(), tb.cols()});
    as_mat(out) = as_mat(ta) * as_mat(tb);
  }
  int ia = a.id, ib = b.id;
  return {push(std::move(out), is_tracked(ia) || is_tracked(ib), [ia, ib](Tape& t, int self) {
    const Tensor& g = t.grad_of(self);
    const Tensor& va = t.val_of(ia);
    const Tensor& vb = t.val_of(ib);
    if (vb.rank() == 1) {
      if (t.is_tracked(ia)) as_mat(t.grad_of(ia)) += as_vec(g) * as_vec(vb).transpose();
      if (t.is_tracked(ib)) as_vec(t.grad_of(ib)) += as_mat(va).transpose() * as_vec(g);
    } else {
      if (t.is_tracked(ia)) as_mat(t.grad_of(ia)) += as_mat(g) * as_mat(vb).transpose();
      if (t.is_tracked(ib)) as_mat(t.grad_of(ib)) += as_mat(va).transpose() * as_mat(g);
    }
  })};
}

Value Tape::matvec_t(Value a, Value x) {
  const Tensor& ta = val_of(a.id);
  const Tensor& tx = val_of(x.id);
  require(ta.rank() == 2 && tx.rank() == 1,
          "matvec_t: expected matrix and vector, got " + ta.shape_str() + " and " + tx.shape_str());
  require(ta.rows() == tx.rows(), std::string("matvec_t: dimensions disagree ") + ta.shape_str() +
                                      " vs " + tx.shape_str());
  Tensor out = Tensor::zeros({ta.cols()});
  as_vec(out) = as_mat(ta).transpose() * as_vec(tx);
  int ia = a.id, ix = x.id;
  return {push(std::move(out), is_tracked(ia) || is_tracked(ix), [ia, ix](Tape& t, int self) {
    const Tensor& g = t.grad_of(self);
    if (t.is_tracked(ia)) as_mat(t.grad_of(ia)) += as_vec(t.val_of(ix)) * as_vec(g).transpose();
    if (t.is_tracked(ix)) as_vec(t.grad_of(ix)) += as_mat(t.val_of(ia)) * as_vec(g);
  })};
}

Value Tape::affine(Value w, Value x, Value b) { return add(matmul(w, x), b); }

Value Tape::tanh_op(Value a) {
  Tensor out = val_of(a.id);
  for (double& v : out.data) v = std::tanh(v);
  int ia = a.id;
  return {push(std::move(out), is_tracked(ia), [ia](Tape& t, int self) {
    if (!t.is_tracked(ia)) return;
    const Tensor& y = t.val_of(self);
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    if (tape_testing::corrupt_tanh_backward) {
      for (std::int64_t i = 0; i < y.size(); ++i)
        ga.data[i] += g.data[i] * (1.0 - y.data[i]);  // wrong on purpose
      return;
    }
    for (std::int64_t i = 0; i < y.size(); ++i)
      ga.data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
  })};
}

Value Tape::sigmoid_op(Value a) {
  Tensor out = val_of(a.id);
  for (double& v : out.data) v = stable_sigmoid(v);
  int ia = a.id;
  return {push(std::move(out), is_tracked(ia), [ia](Tape& t, int self) {
    if (!t.is_tracked(ia)) return;
    const Tensor& y = t.val_of(self);
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    for (std::int64_t i = 0; i < y.size(); ++i)
      ga.data[i] += g.data[i] * y.data[i] * (1.0 - y.data[i]);
  })};
}

Value Tape::relu_op(Value a) {
  Tensor out = val_of(a.id);
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  int ia = a.id;
  return {push(std::move(out), is_tracked(ia), [ia](Tape& t, int self) {
    if (!t.is_tracked(ia)) return;
    const Tensor& x = t.val_of(ia);
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    for (std::int64_t i = 0; i < x.size(); ++i)
      if (x.data[i] > 0.0) ga.data[i] += g.data[i];
  })};
}

Value Tape::nonlinearity(Value a, Nonlin kind) {
  switch (kind) {
    case Nonlin::Tanh: return tanh_op(a);
    case Nonlin::Sigmoid: return sigmoid_op(a);
    case Nonlin::Relu: return relu_op(a);
  }
  throw std::invalid_argument("nonlinearity: unknown kind");
}

Value Tape::softmax(Value a) {
  const Tensor& ta = val_of(a.id);
  require(ta.size() > 0, "softmax: empty input");
  Tensor out = ta;
  const int rows = ta.rank() == 2 ? ta.rows() : 1;
  const int cols = ta.rank() == 2 ? ta.cols() : static_cast<int>(ta.size());
  for (int r = 0; r < rows; ++r) {
    double* p = out.data.data() + static_cast<size_t>(r) * cols;
    double mx = *std::max_element(p, p + cols);
    double sum = 0.0;
    for (int c = 0; c < cols; ++c) {
      p[c] = std::exp(p[c] - mx);
      sum += p[c];
    }
    for (int c = 0; c < cols; ++c) p[c] /= sum;
  }
  int ia = a.id;
  return {push(std::move(out), is_tracked(ia), [ia, rows, cols](Tape& t, int self) {
    if (!t.is_tracked(ia)) return;
    const Tensor& y = t.val_of(self);
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    for (int r = 0; r < rows; ++r) {
      const double* yp = y.data.data() + static_cast<size_t>(r) * cols;
      const double* gp = g.data.data() + static_cast<size_t>(r) * cols;
      double* op = ga.data.data() + static_cast<size_t>(r) * cols;
      double dot = 0.0;
      for (int c = 0; c < cols; ++c) dot += yp[c] * gp[c];
      for (int c = 0; c < cols; ++c) op[c] += yp[c] * (gp[c] - dot);
    }
  })};
}

Value Tape::concat(Value a, Value b) {
  const Tensor& ta = val_of(a.id);
  const Tensor& tb = val_of(b.id);
  require(ta.rank() == 1 && tb.rank() == 1,
          "concat: expected rank-1 operands, got " + ta.shape_str() + " and " + tb.shape_str());
  Tensor out = Tensor::zeros({static_cast<int>(ta.size() + tb.size())});
  std::copy(ta.data.begin(), ta.data.end(), out.data.begin());
  std::copy(tb.data.begin(), tb.data.end(), out.data.begin() + ta.size());
  int ia = a.id, ib = b.id;
  std::int64_t na = ta.size();
  return {push(std::move(out), is_tracked(ia) || is_tracked(ib), [ia, ib, na](Tape& t, int self) {
    const Tensor& g = t.grad_of(self);
    if (t.is_tracked(ia)) {
      Tensor& ga = t.grad_of(ia);
      for (std::int64_t i = 0; i < na; ++i) ga.data[i] += g.data[i];
    }
    if (t.is_tracked(ib)) {
      Tensor& gb = t.grad_of(ib);
      for (std::int64_t i = na; i < g.size(); ++i) gb.data[i - na] += g.data[i];
    }
  })};
}

Value Tape::slice(Value a, int from, int len) {
  const Tensor& ta = val_of(a.id);
  require(ta.rank() == 1, "slice: expected rank-1 operand, got " + ta.shape_str());
  require(from >= 0 && len >= 0 && from + len <= ta.size(), "slice: out of range");
  Tensor out = Tensor::zeros({len});
  std::copy(ta.data.begin() + from, ta.data.begin() + from + len, out.data.begin());
  int ia = a.id;
  return {push(std::move(out), is_tracked(ia), [ia, from, len](Tape& t, int self) {
    if (!t.is_tracked(ia)) return;
    const Tensor& g = t.grad_of(self);
    Tensor& ga = t.grad_of(ia);
    for (int i = 0; i < len; ++i) ga.data[from + i] += g.data[i];
  })};
}

Value Tape::stack_cols(const std::vector<Value>& cols) {
  require(!cols.empty(), "stack_cols: empty input");
  const int n = static_cast<int>(val_of(cols[0].id).size());
  bool tr = false;
  std::vector<int> ids;
  ids.reserve(cols.size());
  for (Value v : cols) {
    const Tensor& tv = val_of(v.id);
    require(tv.rank() == 1 && tv.size() == n, "stack_cols: ragged input");
    tr = tr || is_tracked(v.id);
    ids.push_back(v.id);
  }
  const int k = static_cast<int>(cols.size());
  Tensor out = Tensor::zeros({n, k});
  for (int j = 0; j < k; ++j) {
    const Tensor& tv = val_of(ids[static_cast<size_t>(j)]);
    for (int i = 0; i < n; ++i) out.at(i, j) = tv.at(i);
  }
  return {push(std::move(out), tr, [ids, n, k](Tape& t, int self) {
    const Tensor& g = t.grad_of(self);
    for (int j = 0; j < k; ++j) {
      int id = ids[static_cast<size_t>(j)];
      if (!t.is_tracked(id)) continue;
      Tensor& gj = t.grad_of(id);
      for (int i = 0; i < n; ++i) gj.data[i] += g.at(i, j);
    }
  })};
}

Value Tape::embed_row(Value table, int row) {
  const Tensor& tt = val_of(table.id);
  require(tt.rank() == 2, "embed_row: table must be rank-2, got " + tt.shape_str());
  require(row >= 0 && row < tt.rows(),
          "embed_row: row " + std::to_string(row) + " out of range for " + tt.shape_str());
  const int m = tt.cols();
  Tensor out = Tensor::zeros({m});
  for (int c = 0; c < m; ++c) out.at(c) = tt.at(row, c);
  int it = table.id;
  return {push(std::move(out), is_tracked(it), [it, row, m](Tape& t, int self) {
    if (!t.is_tracked(it)) return;
    const Tensor& g = t.grad_of(self);
    Tensor& gt = t.grad_of(it);
    for (int c = 0; c < m; ++c) gt.at(row, c) += g.at(c);
  })};
}

Value Tape::embed_cols(Value table, const std::vector<int>& rows) {
  const Tensor& tt = val_of(table.id);
  require(tt.rank() == 2, "embed_cols: table must be rank-2, got " + tt.shape_str());
  require(!rows.empty(), "embed_cols: empty id sequence");
  const int c = tt.cols();
  const int l = static_cast<int>(rows.size());
  for (int r : rows)
    require(r >= 0 && r < tt.rows(),
            "embed_cols: id " + std::to_string(r) + " out of range for " + tt.shape_str());
  Tensor out = Tensor::zeros({c, l});
  for (int j = 0; j < l; ++j)
    for (int i = 0; i < c; ++i) out.at(i, j) = tt.at(rows[static_cast<size_t>(j)], i);
  int it = table.id;
  std::vector<int> ids = rows;
  return {push(std::move(out), is_tracked(it), [it, ids, c](Tape& t, int self) {
    if (!t.is_tracked(it)) return;
    const Tensor& g = t.grad_of(self);
    Tensor& gt = t.grad_of(it);
    for (size_t j = 0; j < ids.size(); ++j)
      for (int i = 0; i < c; ++i) gt.at(ids[j], i) += g.at(i, static_cast<int>(j));
  })};
}

Value Tape::im2col(Value m, int w) {
  const Tensor& tm = val_of(m.id);
  require(tm.rank() == 2, "im2col: expected rank-2 input, got " + tm.shape_str());
  require(w >= 1 && w <= tm.cols(), "im2col: width " + std::to_string(w) +
                                        " invalid for input " + tm.shape_str());
  const int c = tm.rows();
  const int l = tm.cols();
  const int windows = l - w + 1;
  Tensor out = Tensor::zeros({c * w, windows});
  for (int k = 0; k < windows; ++k)
    for (int r = 0; r < c; ++r)
      for (int j = 0; j < w; ++j) out.at(r * w + j, k) = tm.at(r, k + j);
  int im = m.id;
  return {push(std::move(out), is_tracked(im), [im, c, w, windows](Tape& t, int self) {
    if (!t.is_tracked(im)) return;
    const Tensor& g = t.grad_of(self);
    Tensor& gm = t.grad_of(im);
    for (int k = 0; k < windows; ++k)
      for (int r = 0; r < c; ++r)
        for (int j = 0; j < w; ++j) gm.at(r, k + j) += g.at(r * w + j, k);
  })};
}

Value Tape::add_col_broadcast(Value m, Value b) {
  const Tensor& tm = val_of(m.id);
  const Tensor& tb = val_of(b.id);
  require(tm.rank() == 2 && tb.rank() == 1 && tm.rows() == tb.rows(),
          "add_col_broadcast: shapes disagree " + tm.shape_str() + " vs " + tb.shape_str());
  Tensor out = tm;
  for (int r = 0; r < tm.rows(); ++r)
    for (int c = 0; c < tm.cols(); ++c) out.at(r, c) += tb.at(r);
  int im = m.id, ib = b.id;
  return {push(std::move(out), is_tracked(im) || is_tracked(ib), [im, ib](Tape& t, int self) {
    const Tensor& g = t.grad_of(self);
    if (t.is_tracked(im)) as_vec(t.grad_of(im)) += as_vec(g);
    if (t.is_tracked(ib)) {
      Tensor& gb = t.grad_of(ib);
      for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c) gb.at(r) += g.at(r, c);
    }
  })};
}

Value Tape::row_max(Value m) {
  const Tensor& tm = val_of(m.id);
  require(tm.rank() == 2 && tm.cols() >= 1, "row_max: expected nonempty rank-2 input");
  const int rows = tm.rows();
  const int cols = tm.cols();
  Tensor out = Tensor::zeros({rows});
  std::vector<int> argmax(static_cast<size_t>(rows), 0);
  for (int r = 0; r < rows; ++r) {
    double best = tm.at(r, 0);
    int besti = 0;
    for (int c = 1; c < cols; ++c)
      if (tm.at(r, c) > best) {
        best = tm.at(r, c);
        besti = c;
      }
    out.at(r) = best;
    argmax[static_cast<size_t>(r)] = besti;
  }
  int im = m.id;
  return {push(std::move(out), is_tracked(im), [im, argmax, rows](Tape& t, int self) {
    if (!t.is_tracked(im)) return;
    const Tensor& g = t.grad_of(self);
    Tensor& gm = t.grad_of(im);
    for (int r = 0; r < rows; ++r) gm.at(r, argmax[static_cast<size_t>(r)]) += g.at(r);
  })};
}

Value Tape::sum(Value a) {
  const Tensor& ta = val_of(a.id);
  double s = 0.0;
  for (double v : ta.data) s += v;
  int ia = a.id;
  return {push(Tensor::scalar(s), is_tracked(ia), [ia](Tape& t, int self) {
    if (!t.is_tracked(ia)) return;
    double g = t.grad_of(self).data[0];
    for (double& v : t.grad_of(ia).data) v += g;
  })};
}

Value Tape::mean(Value a) {
  const Tensor& ta = val_of(a.id);
  require(ta.size() > 0, "mean: empty input");
  return scale(sum(a), 1.0 / static_cast<double>(ta.size()));
}

Value Tape::cross_entropy(Value logits, int gold) {
  const Tensor& tl = val_of(logits.id);
  require(tl.rank() == 1 && tl.size() > 0, "cross_entropy: logits must be nonempty rank-1");
  require(gold >= 0 && gold < tl.size(), "cross_entropy: gold index out of range");
  double mx = *std::max_element(tl.data.begin(), tl.data.end());
  double sum = 0.0;
  for (double v : tl.data) sum += std::exp(v - mx);
  double lse = mx + std::log(sum);
  double loss = lse - tl.at(gold);
  int il = logits.id;
  return {push(Tensor::scalar(loss), is_tracked(il), [il, gold, lse](Tape& t, int self) {
    if (!t.is_tracked(il)) return;
    double g = t.grad_of(self).data[0];
    const Tensor& l = t.val_of(il);
    Tensor& gl = t.grad_of(il);
    for (std::int64_t i = 0; i < l.size(); ++i) {
      double p = std::exp(l.data[i] - lse);
      gl.data[i] += g * (p - (i == gold ? 1.0 : 0.0));
    }
  })};
}

Value Tape::bce_logit(Value logit, bool positive) {
  const Tensor& tl = val_of(logit.id);
  require(tl.size() == 1, "bce_logit: logit must be scalar, got " + tl.shape_str());
  const double z = tl.data[0];
  const double y = positive ? 1.0 : 0.0;
  // max(z,0) - z*y + log(1 + exp(-|z|))
  const double loss = std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::fabs(z)));
  int il = logit.id;
  return {push(Tensor::scalar(loss), is_tracked(il), [il, y](Tape& t, int self) {
    if (!t.is_tracked(il)) return;
    double g = t.grad_of(self).data[0];
    double z = t.val_of(il).data[0];
    t.grad_of(il).data[0] += g * (stable_sigmoid(z) - y);
  })};
}

Value Tape::dropout(Value a, double p, std::mt19937_64& rng, bool training) {
  require(p >= 0.0 && p < 1.0, "dropout: p must be in [0, 1)");
  if (!training || p == 0.0) return a;
  const Tensor& ta = val_of(a.id);
  Tensor mask = Tensor::zeros(ta.shape);
  const double keep = 1.0 - p;
  const double inv = 1.0 / keep;
  for (std::int64_t i = 0; i < ta.size(); ++i)
    mask.data[i] = uniform01(rng) < keep ? inv : 0.0;
  Value m = constant(std::move(mask));
  return mul(a, m);
}

void Tape::backward(Value loss) {
  require(loss.valid() && loss.id < static_cast<int>(nodes_.size()), "backward: invalid loss");
  require(val_of(loss.id).size() == 1, "backward: loss must be scalar, got " +
                                           val_of(loss.id).shape_str());
  if (backward_done_)
    throw std::logic_error("backward: tape already replayed; double backward not supported");
  backward_done_ = true;
  grad_of(loss.id).data[0] = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<size_t>(i)];
    if (!n.tracked || !n.back) continue;
    if (n.grad.data.empty()) continue;  // never received gradient
    n.back(*this, i);
  }
  if (store_) {
    for (size_t i = 0; i < nodes_.size(); ++i) {
      Node& n = nodes_[i];
      if (n.param_idx >= 0 && !n.grad.data.empty())
        as_vec(store_->at(n.param_idx).grad) += as_vec(n.grad);
    }
  }
}

const Tensor& Tape::value(Value v) const { return val_of(v.id); }

const Tensor& Tape::grad(Value v) const {
  const Node& n = nodes_[static_cast<size_t>(v.id)];
  static const Tensor empty{};
  return n.grad.data.empty() ? empty : n.grad;
}

LstmState lstm_cell(Tape& t, Value x, LstmState prev, Value w, Value b) {
  const Tensor& th = t.value(prev.h);
  const int n = static_cast<int>(th.size());
  Value xin = t.concat(x, prev.h);
  Value gates = t.affine(w, xin, b);
  Value i = t.sigmoid_op(t.slice(gates, 0, n));
  Value f = t.sigmoid_op(t.slice(gates, n, n));
  Value g = t.tanh_op(t.slice(gates, 2 * n, n));
  Value o = t.sigmoid_op(t.slice(gates, 3 * n, n));
  Value c = t.add(t.mul(f, prev.c), t.mul(i, g));
  Value h = t.mul(o, t.tanh_op(c));
  return {h, c};
}

}  // namespace errid
