// Labeled binary trees feeding the tree-sum construction of a consistent
// diagram. Leaves reference nonzero terms of the two input wall logs as
// (input 1|2, mode multiple k, t-order j); internal vertices combine their
// children with the Lie bracket. Trees are kept canonical: children of
// every vertex are sorted by canonical key, so structurally equal trees
// are pointer-comparable through their keys.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "scatter/wall.hpp"

namespace scatter {

struct TreeNode;
using LabeledTree = std::shared_ptr<const TreeNode>;

struct TreeNode {
    // leaf fields; input == 0 marks an internal vertex
    int input = 0;
    long long mult = 0;
    int torder = 0;
    LabeledTree left, right;
    std::string key;  // canonical form, also the deterministic sort key
    int leaf_count = 1;
    int total_order = 0;

    bool is_leaf() const { return input != 0; }
};

// canonical order: leaves before nodes, leaves by labels, nodes by
// children; this fixes the child order at every vertex
inline bool tree_less(const LabeledTree& a, const LabeledTree& b) {
    if (a->is_leaf() != b->is_leaf()) return a->is_leaf();
    if (a->is_leaf())
        return std::tie(a->input, a->mult, a->torder) <
               std::tie(b->input, b->mult, b->torder);
    if (tree_less(a->left, b->left)) return true;
    if (tree_less(b->left, a->left)) return false;
    return tree_less(a->right, b->right);
}

inline LabeledTree make_leaf(int input, long long mult, int torder) {
    if (input != 1 && input != 2) throw std::invalid_argument("leaf input must be 1 or 2");
    if (mult < 1 || torder < 1) throw std::invalid_argument("leaf labels must be positive");
    auto n = std::make_shared<TreeNode>();
    n->input = input;
    n->mult = mult;
    n->torder = torder;
    n->key = "L" + std::to_string(input) + "." + std::to_string(mult) + "." +
             std::to_string(torder);
    n->leaf_count = 1;
    n->total_order = torder;
    return n;
}

// children are stored in canonical order; the stored order is also the
// bracket order used by propagation, so orientation data stays well defined
inline LabeledTree make_node(LabeledTree a, LabeledTree b) {
    if (!a || !b) throw std::invalid_argument("node needs two children");
    if (tree_less(b, a)) std::swap(a, b);
    auto n = std::make_shared<TreeNode>();
    n->leaf_count = a->leaf_count + b->leaf_count;
    n->total_order = a->total_order + b->total_order;
    n->key = "(" + a->key + "+" + b->key + ")";
    n->left = std::move(a);
    n->right = std::move(b);
    return n;
}

inline long long aut_count(const LabeledTree& t) {
    if (t->is_leaf()) return 1;
    long long base = aut_count(t->left) * aut_count(t->right);
    return t->left->key == t->right->key ? 2 * base : base;
}

// number of ribbon structures on the underlying tree: 2^(k-1) orderings
// divided by the automorphisms, which act freely on them
inline long long ribbon_count(const LabeledTree& t) {
    long long orderings = 1LL << (t->leaf_count - 1);
    long long a = aut_count(t);
    if (orderings % a != 0)
        throw std::logic_error("automorphisms do not divide the ribbon orderings");
    return orderings / a;
}

struct LeafTerm {
    int input;
    long long mult;
    int torder;
    Rat coefficient;  // scalar on the primitive normal of the input wall
};

// decompose a wall log into leaf labels: term c t^j z^(k m) d_n with
// n = c_scalar * rot90(m)
inline std::vector<LeafTerm> leaf_terms(const Wall& w, int input) {
    std::vector<LeafTerm> out;
    IVec n = rot90(w.direction);
    for (const auto& [key, payload] : w.log_theta.terms()) {
        auto p = primitive_part(key.m);
        Rat c = n.x != 0 ? payload.x / Rat(n.x) : payload.y / Rat(n.y);
        if (QVec{Rat(n.x) * c, Rat(n.y) * c} != payload)
            throw std::invalid_argument("wall log term not on the primitive normal");
        out.push_back(LeafTerm{input, p.multiple, key.j, c});
    }
    return out;
}

// all canonical trees with total t-order <= N over the nonzero terms of
// the two input logs, sorted by (total order, canonical key)
inline std::vector<LabeledTree> enumerate_trees(const Wall& w1, const Wall& w2, int N) {
    std::vector<std::vector<LabeledTree>> by_order(N + 1);
    auto add_unique = [&](int order, const LabeledTree& t) {
        for (const auto& u : by_order[order])
            if (u->key == t->key) return;
        by_order[order].push_back(t);
    };
    for (const Wall* w : {&w1, &w2}) {
        int input = (w == &w1) ? 1 : 2;
        for (const auto& lt : leaf_terms(*w, input))
            if (lt.torder <= N) add_unique(lt.torder, make_leaf(input, lt.mult, lt.torder));
    }
    for (int total = 2; total <= N; ++total) {
        for (int j1 = 1; 2 * j1 <= total; ++j1) {
            int j2 = total - j1;
            for (const auto& t1 : by_order[j1]) {
                for (const auto& t2 : by_order[j2]) {
                    if (j1 == j2 && t2->key < t1->key) continue;
                    add_unique(total, make_node(t1, t2));
                }
            }
        }
    }
    std::vector<LabeledTree> out;
    for (int total = 1; total <= N; ++total) {
        auto& bucket = by_order[total];
        std::sort(bucket.begin(), bucket.end(),
                  [](const LabeledTree& a, const LabeledTree& b) { return a->key < b->key; });
        out.insert(out.end(), bucket.begin(), bucket.end());
    }
    return out;
}

struct TreeEvaluation {
    IVec m_T{};
    int j_T = 0;
    QVec n_T{};              // propagated dual payload (no leaf coefficients)
    int chi_sign = 1;        // (-1)^chi over internal vertices
    bool transversal = true; // false: some vertex joined parallel modes
    std::optional<IVec> ray; // primitive wall direction when transversal
    double coefficient = 0.0;
    double coefficient_error = 0.0;
};

// bottom-up propagation of (mode, order, dual payload, orientation sign)
// in the stored child order
inline TreeEvaluation propagate(const LabeledTree& t, const Wall& w1, const Wall& w2) {
    TreeEvaluation ev;
    if (t->is_leaf()) {
        const Wall& w = t->input == 1 ? w1 : w2;
        IVec n = rot90(w.direction);
        ev.m_T = w.direction * t->mult;
        ev.j_T = t->torder;
        ev.n_T = QVec{Rat(n.x), Rat(n.y)};
        return ev;
    }
    TreeEvaluation a = propagate(t->left, w1, w2);
    TreeEvaluation b = propagate(t->right, w1, w2);
    ev.m_T = a.m_T + b.m_T;
    ev.j_T = a.j_T + b.j_T;
    long long cr = cross(a.m_T, b.m_T);
    if (!a.transversal || !b.transversal || cr == 0) {
        ev.transversal = false;
        return ev;
    }
    Rat ca = pairing(b.m_T, a.n_T);
    Rat cb = pairing(a.m_T, b.n_T);
    ev.n_T = b.n_T * ca - a.n_T * cb;
    ev.chi_sign = a.chi_sign * b.chi_sign * (cr > 0 ? 1 : -1);
    if (ev.n_T.is_zero()) {
        // bracket annihilation without parallel modes cannot happen for
        // transversal children in rank 2
        throw std::logic_error("propagated payload vanished on a transversal vertex");
    }
    return ev;
}

inline TreeEvaluation evaluate_tree(const LabeledTree& t, const Wall& w1, const Wall& w2) {
    TreeEvaluation ev = propagate(t, w1, w2);
    if (ev.transversal) {
        ev.ray = primitive_part(ev.m_T).direction;
        if (pairing(ev.m_T, ev.n_T) != 0)
            throw std::logic_error("propagated payload not perpendicular to the mode");
    }
    return ev;
}

// product of the leaf coefficients referenced by the tree
inline Rat leaf_coefficient_product(const LabeledTree& t, const Wall& w1, const Wall& w2) {
    if (t->is_leaf()) {
        const Wall& w = t->input == 1 ? w1 : w2;
        IVec n = rot90(w.direction);
        QVec payload = w.log_theta.payload(w.direction * t->mult, t->torder);
        if (payload.is_zero())
            throw std::invalid_argument("leaf references a vanishing input term");
        return n.x != 0 ? payload.x / Rat(n.x) : payload.y / Rat(n.y);
    }
    return leaf_coefficient_product(t->left, w1, w2) *
           leaf_coefficient_product(t->right, w1, w2);
}

}  // namespace scatter
