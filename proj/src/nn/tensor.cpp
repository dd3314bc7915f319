#include "mri/nn/tensor.hpp"

#include <unordered_set>

namespace mri::nn {

void backward(const TensorPtr& root) {
  if (root->numel() != 1) throw shape_error("backward: root must be a scalar");

  // iterative post-order DFS; reversed it yields a topological order in which
  // every consumer is processed before its inputs
  struct Frame {
    Tensor* node;
    size_t child;
  };
  std::vector<Tensor*> order;
  std::unordered_set<Tensor*> visited;
  std::vector<Frame> stack;

  visited.insert(root.get());
  stack.push_back({root.get(), 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.child < f.node->parents.size()) {
      Tensor* p = f.node->parents[f.child++].get();
      if (visited.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }

  root->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backward_fn) (*it)->backward_fn(**it);
}

}  // namespace mri::nn
