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

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flminer/article.hpp"

namespace flminer {

struct QuestionNode {
  std::string id;
  std::string text;
  double weight = 1.0;
  std::vector<std::string> parents;
  // Lowercase phrases used by the keyword answer provider; not part of the
  // tree semantics.
  std::vector<std::string> keywords;

  friend bool operator==(const QuestionNode&, const QuestionNode&) = default;
};

/// A single-rooted DAG of yes/no questions. An edge parent -> child means a
/// yes to the parent makes the child relevant. Nodes keep file order.
class QuestionTree {
 public:
  QuestionTree() = default;
  explicit QuestionTree(std::vector<QuestionNode> nodes);

  const std::vector<QuestionNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::optional<std::size_t> index_of(std::string_view id) const noexcept;
  const QuestionNode& node(std::size_t index) const { return nodes_.at(index); }

  /// Parent indices per node; unresolved parent ids are dropped.
  const std::vector<std::vector<std::size_t>>& parent_indices() const noexcept {
    return parents_;
  }
  const std::vector<std::vector<std::size_t>>& child_indices() const noexcept {
    return children_;
  }

  /// Kahn order with ties broken by file order. Only meaningful for acyclic trees.
  std::vector<std::size_t> topological_order() const;

  /// `{"nodes": [{"id", "text", "weight", "parents", "keywords"}]}`.
  static QuestionTree from_json(std::string_view text);
  std::string to_json() const;

  static const QuestionTree& default_tree();

 private:
  std::vector<QuestionNode> nodes_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
};

/// Empty iff single root, acyclic, all parent ids resolve, no self loops,
/// unique ids and positive weights.
std::vector<std::string> validate_tree(const QuestionTree& tree);

enum class Answer { kYes, kNo };

std::string_view answer_name(Answer a) noexcept;
std::optional<Answer> parse_answer(std::string_view text) noexcept;

enum class NodeState { kUnresolved, kAnswered, kPruned };

struct NodeResult {
  NodeState state = NodeState::kUnresolved;
  std::optional<Answer> answer;  // set iff state == kAnswered

  bool asked() const noexcept { return state == NodeState::kAnswered; }
  int score() const noexcept { return answer == Answer::kYes ? 1 : 0; }

  friend bool operator==(const NodeResult&, const NodeResult&) = default;
};

struct ProviderFailure {
  std::string node_id;
  std::string message;
  friend bool operator==(const ProviderFailure&, const ProviderFailure&) = default;
};

/// Per-node outcomes for one article, aligned with QuestionTree::nodes().
struct Evaluation {
  std::string article_id;
  std::vector<NodeResult> nodes;
  std::optional<ProviderFailure> failure;

  static Evaluation empty_for(const QuestionTree& tree, std::string article_id = {});

  bool complete() const noexcept;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

/// Returns the eligible unanswered nodes (by tree index, ascending) and marks
/// every node whose parents are all resolved with no yes-parent as pruned,
/// transitively. Throws InconsistentEvaluation if `partial` contradicts the
/// frontier rule.
std::set<std::size_t> eligible_frontier(const QuestionTree& tree, Evaluation& partial);

/// Node-id flavoured wrapper of the above.
std::set<std::string> eligible_frontier_ids(const QuestionTree& tree, Evaluation& partial);

class AnswerProvider {
 public:
  virtual ~AnswerProvider() = default;

  /// May throw; evaluate() records the failure and stops.
  virtual Answer answer(const ArticleRecord& article, std::string_view question,
                        std::string_view node_id) = 0;
  virtual std::string identity() const = 0;
};

/// Picks which frontier node to ask next; receives the frontier in ascending
/// index order and returns a position in it.
using FrontierPicker = std::function<std::size_t(const std::vector<std::size_t>&)>;

Evaluation evaluate(const QuestionTree& tree, AnswerProvider& provider,
                    const ArticleRecord& article, const FrontierPicker& pick = {});

/// sum(w_i * s_i) / sum(w_i); unresolved nodes count as 0.
double relevance_score(const QuestionTree& tree, const Evaluation& eval);

enum class Relevance { kRelevant, kIrrelevant };

/// "relevant" / "irrelevant".
std::string_view relevance_name(Relevance r) noexcept;

inline Relevance classify(double score, double threshold) noexcept {
  return score >= threshold ? Relevance::kRelevant : Relevance::kIrrelevant;
}

}  // namespace flminer
