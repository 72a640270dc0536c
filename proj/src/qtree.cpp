// Copyright 2026 The flminer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flminer/qtree.hpp"

#include <algorithm>
#include <queue>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "flminer/error.hpp"

namespace flminer {
namespace {

using nlohmann::json;

// Only q1 and q2 come from the published tree; the rest are drawn from the
// 25-feature schema.
std::vector<QuestionNode> default_nodes() {
  return {
      {"q1", "Does the article mention forced labor?", 1.0, {},
       {"forced labor", "forced labour", "coerced labor", "modern slavery", "bonded labor"}},
      {"q2", "Does the article mention a relevant good or product that is produced by forced labor?",
       1.0, {"q1"},
       {"cotton", "tuna", "seafood", "onions", "cobalt", "gold", "steel", "garments", "textiles",
        "polysilicon", "palm oil", "tomatoes", "shrimp"}},
      {"q3", "Does the article describe the supply chain the product moves through?", 1.0,
       {"q2"}, {"supply chain", "supplier", "sourced from", "manufacturer", "distributor"}},
      {"q4", "Does the product or service cross a national border?", 1.0, {"q3"},
       {"export", "import", "shipped to", "cross-border", "crossed the border"}},
      {"q5", "Is the product on a published list of goods produced by child or forced labor?",
       1.0, {"q2"}, {"list of goods", "high-risk product", "withhold release order"}},
      {"q6", "Does the article name a company portrayed as being at fault?", 1.0, {"q1"},
       {"company", "firm", "corporation", "contractor", "inc."}},
      {"q7", "Does the firm provide housing or transportation for its workers?", 1.0, {"q6"},
       {"housing", "housed", "dormitor", "transported workers", "company bus"}},
      {"q8", "Are there concerns or evidence of fake or forged documentation?", 1.0, {"q6"},
       {"forged", "fake documents", "falsified", "confiscated passports"}},
      {"q9", "Did the incident happen in a high-risk sourcing country?", 1.0, {"q1"},
       {"high-risk country", "xinjiang", "north korea", "corruption index"}},
      {"q10", "Does the article connect the incident to enforcement on imports?", 1.0,
       {"q4", "q9"}, {"customs", "import ban", "detained at", "seized"}},
      {"q11", "Does the article report child labor, prison labor or sex trafficking?", 1.0,
       {"q1"}, {"child labor", "child labour", "prison labor", "sex trafficking"}},
  };
}

}  // namespace

QuestionTree::QuestionTree(std::vector<QuestionNode> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
  parents_.resize(nodes_.size());
  children_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (const auto& p : nodes_[i].parents) {
      auto it = index_.find(p);
      if (it == index_.end()) continue;
      parents_[i].push_back(it->second);
      children_[it->second].push_back(i);
    }
  }
}

std::optional<std::size_t> QuestionTree::index_of(std::string_view id) const noexcept {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> QuestionTree::topological_order() const {
  std::vector<std::size_t> indegree(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) indegree[i] = parents_[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto n = ready.top();
    ready.pop();
    order.push_back(n);
    for (auto c : children_[n]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  return order;
}

QuestionTree QuestionTree::from_json(std::string_view text) {
  std::vector<QuestionNode> nodes;
  try {
    const json doc = json::parse(text);
    for (const auto& item : doc.at("nodes")) {
      QuestionNode n;
      n.id = item.at("id").get<std::string>();
      n.text = item.value("text", std::string{});
      n.weight = item.value("weight", 1.0);
      n.parents = item.value("parents", std::vector<std::string>{});
      n.keywords = item.value("keywords", std::vector<std::string>{});
      nodes.push_back(std::move(n));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidTree, std::string("tree file: ") + e.what());
  }
  return QuestionTree(std::move(nodes));
}

std::string QuestionTree::to_json() const {
  json nodes = json::array();
  for (const auto& n : nodes_) {
    json item = {{"id", n.id}, {"text", n.text}, {"weight", n.weight}, {"parents", n.parents}};
    if (!n.keywords.empty()) item["keywords"] = n.keywords;
    nodes.push_back(std::move(item));
  }
  return json{{"nodes", nodes}}.dump(2);
}

const QuestionTree& QuestionTree::default_tree() {
  static const QuestionTree tree(default_nodes());
  return tree;
}

std::vector<std::string> validate_tree(const QuestionTree& tree) {
  std::vector<std::string> out;
  if (tree.size() == 0) {
    out.push_back("empty tree");
    return out;
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& n = tree.node(i);
    if (n.id.empty()) out.push_back("empty node id");
    if (tree.index_of(n.id) != i) out.push_back("duplicate node id " + n.id);
    if (!(n.weight > 0.0)) out.push_back("non-positive weight at " + n.id);
    if (n.parents.empty()) ++roots;
    for (const auto& p : n.parents) {
      if (p == n.id) {
        out.push_back("self loop at " + n.id);
      } else if (!tree.index_of(p)) {
        out.push_back(fmt::format("unresolved parent {} of {}", p, n.id));
      }
    }
  }
  if (roots == 0) out.push_back("no root");
  if (roots > 1) out.push_back("multiple roots");
  if (tree.topological_order().size() != tree.size()) out.push_back("cycle");
  return out;
}

std::string_view answer_name(Answer a) noexcept { return a == Answer::kYes ? "yes" : "no"; }

std::optional<Answer> parse_answer(std::string_view text) noexcept {
  if (text == "yes") return Answer::kYes;
  if (text == "no") return Answer::kNo;
  return std::nullopt;
}

Evaluation Evaluation::empty_for(const QuestionTree& tree, std::string article_id) {
  return Evaluation{std::move(article_id), std::vector<NodeResult>(tree.size()), std::nullopt};
}

bool Evaluation::complete() const noexcept {
  return !failure && std::none_of(nodes.begin(), nodes.end(), [](const NodeResult& r) {
    return r.state == NodeState::kUnresolved;
  });
}

std::set<std::size_t> eligible_frontier(const QuestionTree& tree, Evaluation& partial) {
  if (partial.nodes.size() != tree.size()) {
    throw Error(ErrorCode::kInconsistentEvaluation,
                fmt::format("evaluation has {} nodes, tree has {}", partial.nodes.size(),
                            tree.size()));
  }
  const auto order = tree.topological_order();
  if (order.size() != tree.size()) throw Error(ErrorCode::kInvalidTree, "question tree has a cycle");

  std::set<std::size_t> frontier;
  for (auto n : order) {
    auto& result = partial.nodes[n];
    if (result.asked() != result.answer.has_value()) {
      throw Error(ErrorCode::kInconsistentEvaluation,
                  "answer present without asked state at " + tree.node(n).id);
    }
    const auto& parents = tree.parent_indices()[n];
    bool resolved = true;
    bool any_yes = false;
    for (auto p : parents) {
      const auto& pr = partial.nodes[p];
      if (pr.state == NodeState::kUnresolved) resolved = false;
      if (pr.answer == Answer::kYes) any_yes = true;
    }
    const bool root = parents.empty();
    const bool askable = root || (resolved && any_yes);

    switch (result.state) {
      case NodeState::kAnswered:
        if (!askable) {
          throw Error(ErrorCode::kInconsistentEvaluation,
                      "answered node was never eligible: " + tree.node(n).id);
        }
        break;
      case NodeState::kPruned:
        if (root || !resolved || any_yes) {
          throw Error(ErrorCode::kInconsistentEvaluation,
                      "pruned node has a live parent: " + tree.node(n).id);
        }
        break;
      case NodeState::kUnresolved:
        if (askable) {
          frontier.insert(n);
        } else if (resolved) {
          result.state = NodeState::kPruned;
        }
        break;
    }
  }
  return frontier;
}

std::set<std::string> eligible_frontier_ids(const QuestionTree& tree, Evaluation& partial) {
  std::set<std::string> ids;
  for (auto n : eligible_frontier(tree, partial)) ids.insert(tree.node(n).id);
  return ids;
}

Evaluation evaluate(const QuestionTree& tree, AnswerProvider& provider,
                    const ArticleRecord& article, const FrontierPicker& pick) {
  if (auto problems = validate_tree(tree); !problems.empty()) {
    throw Error(ErrorCode::kInvalidTree, problems.front());
  }
  Evaluation eval = Evaluation::empty_for(tree, article.article_id);
  while (true) {
    const auto frontier_set = eligible_frontier(tree, eval);
    if (frontier_set.empty()) break;
    const std::vector<std::size_t> frontier(frontier_set.begin(), frontier_set.end());
    std::size_t pos = pick ? pick(frontier) : 0;
    if (pos >= frontier.size()) pos = 0;
    const auto n = frontier[pos];
    const auto& node = tree.node(n);
    try {
      const Answer a = provider.answer(article, node.text, node.id);
      eval.nodes[n] = NodeResult{NodeState::kAnswered, a};
    } catch (const std::exception& e) {
      eval.failure = ProviderFailure{node.id, e.what()};
      break;
    }
  }
  return eval;
}

double relevance_score(const QuestionTree& tree, const Evaluation& eval) {
  if (eval.nodes.size() != tree.size()) {
    throw Error(ErrorCode::kMismatchedTree,
                fmt::format("evaluation covers {} nodes, tree has {}", eval.nodes.size(),
                            tree.size()));
  }
  const auto& nodes = tree.nodes();
  const bool uniform = std::all_of(nodes.begin(), nodes.end(), [&](const QuestionNode& n) {
    return n.weight == nodes.front().weight;
  });
  if (uniform) {
    // Equal weights cancel; dividing counts avoids accumulated rounding.
    std::size_t yes = 0;
    for (const auto& r : eval.nodes) yes += static_cast<std::size_t>(r.score());
    return tree.size() ? static_cast<double>(yes) / static_cast<double>(tree.size()) : 0.0;
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const double w = tree.node(i).weight;
    num += w * eval.nodes[i].score();
    den += w;
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace flminer

namespace flminer {

std::string_view relevance_name(Relevance r) noexcept {
  return r == Relevance::kRelevant ? "relevant" : "irrelevant";
}

}  // namespace flminer
