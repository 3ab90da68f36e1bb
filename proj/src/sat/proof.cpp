#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "lemlift/sat.hpp"

namespace lemlift::sat {

std::optional<BoolClause> resolve(const BoolClause& a, const BoolClause& b, Var pivot) {
  const Lit pos = Lit::make(pivot, false);
  const Lit neg = Lit::make(pivot, true);
  auto has = [](const BoolClause& c, Lit l) { return std::find(c.begin(), c.end(), l) != c.end(); };
  const bool a_pos = has(a, pos);
  const bool a_neg = has(a, neg);
  const bool b_pos = has(b, pos);
  const bool b_neg = has(b, neg);
  if (!((a_pos && b_neg && !a_neg && !b_pos) || (a_neg && b_pos && !a_pos && !b_neg))) return std::nullopt;
  BoolClause out;
  out.reserve(a.size() + b.size());
  for (auto l : a) {
    if (l.var() != pivot) out.push_back(l);
  }
  for (auto l : b) {
    if (l.var() != pivot) out.push_back(l);
  }
  return normalized(std::move(out));
}

ProofNodeId ProofLog::add_leaf(ClauseId id, BoolClause clause) {
  ProofNode n;
  n.kind = ProofNode::Kind::Leaf;
  n.leaf = id;
  n.clause = normalized(std::move(clause));
  nodes_.push_back(std::move(n));
  return static_cast<ProofNodeId>(nodes_.size() - 1);
}

ProofNodeId ProofLog::add_resolvent(Var pivot, ProofNodeId left, ProofNodeId right) {
  auto r = resolve(nodes_.at(left).clause, nodes_.at(right).clause, pivot);
  if (!r) throw Error("internal error: invalid resolution step on variable " + std::to_string(pivot + 1));
  ProofNode n;
  n.kind = ProofNode::Kind::Resolvent;
  n.pivot = pivot;
  n.left = left;
  n.right = right;
  n.clause = std::move(*r);
  nodes_.push_back(std::move(n));
  return static_cast<ProofNodeId>(nodes_.size() - 1);
}

void ProofLog::write_trace(std::ostream& os) const {
  // Only the nodes reachable from the final node, renumbered densely.
  if (!final_) return;
  std::vector<uint8_t> live(nodes_.size(), 0);
  std::vector<ProofNodeId> stack{*final_};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    if (live[n]) continue;
    live[n] = 1;
    if (nodes_[n].kind == ProofNode::Kind::Resolvent) {
      stack.push_back(nodes_[n].left);
      stack.push_back(nodes_[n].right);
    }
  }
  std::vector<ProofNodeId> renumber(nodes_.size(), 0);
  ProofNodeId next = 0;
  for (ProofNodeId n = 0; n < nodes_.size(); ++n) {
    if (!live[n]) continue;
    renumber[n] = next++;
    const auto& node = nodes_[n];
    if (node.kind == ProofNode::Kind::Leaf) {
      os << "L " << node.leaf << '\n';
    } else {
      os << "R " << node.pivot + 1 << ' ' << renumber[node.left] << ' ' << renumber[node.right] << '\n';
    }
  }
}

ProofLog ProofLog::read_trace(std::istream& is, std::span<const BoolClause> inputs) {
  ProofLog p;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    char kind = 0;
    ls >> kind;
    auto fail = [&](const std::string& why) {
      throw Error("proof trace line " + std::to_string(lineno) + ": " + why);
    };
    if (kind == 'L') {
      uint64_t id = 0;
      if (!(ls >> id)) fail("missing clause id");
      if (id >= inputs.size()) fail("clause id out of range");
      p.add_leaf(static_cast<ClauseId>(id), inputs[id]);
    } else if (kind == 'R') {
      uint64_t pivot = 0;
      uint64_t left = 0;
      uint64_t right = 0;
      if (!(ls >> pivot >> left >> right) || pivot == 0) fail("malformed resolvent");
      if (left >= p.size() || right >= p.size()) fail("forward node reference");
      // Stored unchecked: validation is the checker's job.
      ProofNode n;
      n.kind = ProofNode::Kind::Resolvent;
      n.pivot = static_cast<Var>(pivot - 1);
      n.left = static_cast<ProofNodeId>(left);
      n.right = static_cast<ProofNodeId>(right);
      auto r = resolve(p.nodes_[left].clause, p.nodes_[right].clause, n.pivot);
      if (r) n.clause = std::move(*r);
      p.nodes_.push_back(std::move(n));
    } else {
      fail("unknown node kind");
    }
  }
  if (p.size() > 0) p.set_final(static_cast<ProofNodeId>(p.size() - 1));
  return p;
}

std::optional<ProofViolation> check_proof(const ProofLog& proof, std::span<const BoolClause> inputs) {
  if (!proof.final_node()) return ProofViolation{0, "proof has no final node"};
  for (ProofNodeId n = 0; n < proof.size(); ++n) {
    const auto& node = proof.node(n);
    if (node.kind == ProofNode::Kind::Leaf) {
      if (node.leaf >= inputs.size()) return ProofViolation{n, "leaf refers to an unknown clause"};
      if (normalized(inputs[node.leaf]) != node.clause) {
        return ProofViolation{n, "leaf clause differs from input clause " + std::to_string(node.leaf)};
      }
      continue;
    }
    if (node.left >= n || node.right >= n) return ProofViolation{n, "child does not precede its parent"};
    auto r = resolve(proof.node(node.left).clause, proof.node(node.right).clause, node.pivot);
    if (!r) {
      return ProofViolation{n, "pivot " + std::to_string(node.pivot + 1) + " does not clash between the children"};
    }
    if (*r != node.clause) return ProofViolation{n, "recorded resolvent differs from the recomputed one"};
  }
  if (!proof.node(*proof.final_node()).clause.empty()) {
    return ProofViolation{*proof.final_node(), "final clause is not empty"};
  }
  return std::nullopt;
}

std::vector<ClauseId> proof_core(const ProofLog& proof) {
  if (!proof.final_node()) throw Error("proof has no final node");
  if (!proof.node(*proof.final_node()).clause.empty()) throw Error("proof does not derive the empty clause");
  std::vector<uint8_t> visited(proof.size(), 0);
  std::vector<ProofNodeId> stack{*proof.final_node()};
  std::vector<ClauseId> leaves;
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    if (visited[n]) continue;
    visited[n] = 1;
    const auto& node = proof.node(n);
    if (node.kind == ProofNode::Kind::Leaf) {
      leaves.push_back(node.leaf);
    } else {
      if (node.left >= n || node.right >= n) throw Error("malformed proof: child does not precede its parent");
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  return leaves;
}

}  // namespace lemlift::sat
