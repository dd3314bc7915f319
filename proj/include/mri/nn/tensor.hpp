#pragma once

#include <functional>
#include <memory>
#include <numeric>
#include <vector>

#include "mri/errors.hpp"

namespace mri::nn {

struct Tensor;
using TensorPtr = std::shared_ptr<Tensor>;

// Reverse-mode tape node. Graphs are built define-by-run; backward() walks
// them once in reverse topological order. grad always matches value in shape.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;

  std::vector<TensorPtr> parents;
  std::function<void(Tensor&)> backward_fn;  // pulls this->grad into parents

  int numel() const {
    int n = 1;
    for (int d : shape) n *= d;
    return n;
  }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }

  static TensorPtr make(std::vector<int> shape, bool requires_grad = false) {
    auto t = std::make_shared<Tensor>();
    t->shape = std::move(shape);
    const size_t n = static_cast<size_t>(t->numel());
    t->value.assign(n, 0.0);
    t->grad.assign(n, 0.0);
    t->requires_grad = requires_grad;
    return t;
  }

  static TensorPtr from_values(std::vector<int> shape, std::vector<double> values,
                               bool requires_grad = false) {
    auto t = make(std::move(shape), requires_grad);
    if (values.size() != t->value.size())
      throw shape_error("Tensor::from_values: size mismatch");
    t->value = std::move(values);
    return t;
  }

  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

// True when gradients must flow through this node.
inline bool needs_grad(const TensorPtr& t) {
  return t->requires_grad || !t->parents.empty();
}

// Marks the child as grad-carrying if any parent carries gradients.
inline void link(const TensorPtr& child, std::initializer_list<TensorPtr> parents) {
  for (const auto& p : parents) {
    child->parents.push_back(p);
    if (needs_grad(p)) child->requires_grad = true;
  }
}

// Reverse pass from a scalar root. Each node is visited exactly once.
void backward(const TensorPtr& root);

}  // namespace mri::nn
