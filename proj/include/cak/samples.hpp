#pragma once

#include <functional>
#include <random>

#include "cak/model.hpp"

namespace cak {

// Rooted tree shapes as parent arrays with parent[0] = -1 and parent[i] < i.
// Shapes are listed up to relabelling only in the sense of this normal form (duplicates possible).
std::vector<std::vector<int>> tree_shapes(std::size_t max_nodes, int max_depth = -1);

std::vector<ElemSet> children_of(const std::vector<int>& parent);

// Tree model over a shape: frame = children, σ(s) = image of local[s] ∈ T(children(s)).
TModel tree_model(const Functor& f, const std::vector<int>& parent, const std::vector<TValue>& local,
                  std::map<std::string, ElemSet> valuation);
// Powerset tree where σ(s) is the set of children.
TModel pset_tree(const std::vector<int>& parent, std::map<std::string, ElemSet> valuation);

// Random tree model with a uniformly random shape of 1..max_nodes nodes.
TModel random_tree_model(std::mt19937_64& rng, const Functor& f, std::size_t max_nodes,
                         const std::vector<std::string>& props, int max_depth = -1);

TModel random_model(std::mt19937_64& rng, const Functor& f, std::size_t n, const std::vector<std::string>& props);
// Every model on n states (σ over enumerate_values with bag counts ≤ 2); stops when fn returns false.
void for_each_model(const Functor& f, std::size_t n, const std::vector<std::string>& props,
                    const std::function<bool(const TModel&)>& fn);
// Every valuation of props over n states, as maps.
std::vector<std::map<std::string, ElemSet>> all_valuations(std::size_t n, const std::vector<std::string>& props);

}  // namespace cak
