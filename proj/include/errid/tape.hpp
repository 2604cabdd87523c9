#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "errid/params.hpp"
#include "errid/tensor.hpp"

namespace errid {

class Tape;

// Handle to a node on a tape.
struct Value {
  int id = -1;
  bool valid() const { return id >= 0; }
};

enum class Nonlin { Tanh, Sigmoid, Relu };

// Reverse-mode tape. Ops append nodes in execution order; backward() replays
// the record in reverse and accumulates parameter gradients into the bound
// ParameterStore. A tape is single-use: one forward build, one backward.
class Tape {
 public:
  explicit Tape(ParameterStore* store = nullptr) : store_(store) {}

  Value constant(Tensor t);
  Value param(const std::string& name);
  // Parameter value without gradient tracking (frozen embeddings).
  Value frozen(const std::string& name);

  Value add(Value a, Value b);
  Value sub(Value a, Value b);
  Value mul(Value a, Value b);
  Value scale(Value a, double s);
  Value one_minus(Value a);

  // (m x k)(k x n) -> (m x n); a rank-1 right operand is treated as a column.
  Value matmul(Value a, Value b);
  // A^T x for A (m x k), x (m) -> (k)
  Value matvec_t(Value a, Value x);
  // W x + b
  Value affine(Value w, Value x, Value b);

  Value tanh_op(Value a);
  Value sigmoid_op(Value a);
  Value relu_op(Value a);
  Value nonlinearity(Value a, Nonlin kind);

  // Rank-1 (or per-row on rank-2) max-shifted softmax.
  Value softmax(Value a);

  Value concat(Value a, Value b);           // rank-1 ++ rank-1
  Value slice(Value a, int from, int len);  // rank-1

  // k vectors of length n -> (n x k), column j = input j
  Value stack_cols(const std::vector<Value>& cols);
  // (V x m) table -> row as vector (m)
  Value embed_row(Value table, int row);
  // (V x c) table, l ids -> (c x l), column j = table row ids[j] transposed
  Value embed_cols(Value table, const std::vector<int>& rows);
  // (c x l) -> (c*w x l-w+1); column k = row-major flatten of window k..k+w-1
  Value im2col(Value m, int w);
  // (r x c) + (r) broadcast over columns
  Value add_col_broadcast(Value m, Value b);
  // (r x c) -> (r): max over columns; ties take the first position
  Value row_max(Value m);

  Value sum(Value a);
  Value mean(Value a);

  // -log softmax(logits)[gold], fused and max-shifted
  Value cross_entropy(Value logits, int gold);

  // Binary cross-entropy on a scalar logit, stable at saturation.
  Value bce_logit(Value logit, bool positive);

  // Inverted dropout; identity when !training or p == 0.
  Value dropout(Value a, double p, std::mt19937_64& rng, bool training);

  void backward(Value loss);

  const Tensor& value(Value v) const;
  const Tensor& grad(Value v) const;
  size_t node_count() const { return nodes_.size(); }
  ParameterStore* store() const { return store_; }

 private:
  struct Node {
    Tensor val;
    const Tensor* external = nullptr;  // set for parameter leaves
    Tensor grad;
    std::function<void(Tape&, int self)> back;
    bool tracked = false;
    int param_idx = -1;
  };

  const Tensor& val_of(int id) const {
    const Node& n = nodes_[static_cast<size_t>(id)];
    return n.external ? *n.external : n.val;
  }
  Tensor& grad_of(int id);
  int push(Tensor val, bool tracked, std::function<void(Tape&, int)> back);
  bool is_tracked(int id) const { return nodes_[static_cast<size_t>(id)].tracked; }

  ParameterStore* store_;
  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

struct LstmState {
  Value h;
  Value c;
};

// Standard LSTM cell over a fused gate block: w (4n x d+n), b (4n), gate
// order [input, forget, cell, output]. c = f*c_prev + i*g, h = o*tanh(c).
LstmState lstm_cell(Tape& t, Value x, LstmState prev, Value w, Value b);

namespace tape_testing {
// Negative control for the gradient-check harness: when set, the tanh
// backward rule is deliberately wrong.
extern bool corrupt_tanh_backward;
}  // namespace tape_testing

}  // namespace errid
