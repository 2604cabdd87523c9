#pragma once

#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "errid/tensor.hpp"

namespace errid {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

// Named parameters with matching gradient storage. Insertion order is stable
// and determines checkpoint layout.
class ParameterStore {
 public:
  int add(const std::string& name, Tensor init);
  bool contains(const std::string& name) const;
  int index_of(const std::string& name) const;

  Parameter& at(int idx) { return params_[static_cast<size_t>(idx)]; }
  const Parameter& at(int idx) const { return params_[static_cast<size_t>(idx)]; }
  Parameter& at(const std::string& name) { return params_[static_cast<size_t>(index_of(name))]; }
  const Parameter& at(const std::string& name) const {
    return params_[static_cast<size_t>(index_of(name))];
  }

  size_t size() const { return params_.size(); }
  bool empty() const { return params_.empty(); }

  void zero_grads();
  double grad_norm() const;
  std::int64_t value_count() const;

 private:
  std::vector<Parameter> params_;
  std::unordered_map<std::string, int> index_;
};

// Versioned binary checkpoint: header with a config text block, then each
// parameter as name, shape and row-major doubles. save(load(f)) is
// byte-identical to f.
void save_checkpoint(const std::string& path, const ParameterStore& store,
                     const std::string& config_text);
std::string load_checkpoint(const std::string& path, ParameterStore& store);

// Reads just the config text block without loading parameters.
std::string read_checkpoint_config(const std::string& path);

}  // namespace errid
