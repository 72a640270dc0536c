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

#include "flminer/temporal_miner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <thread>
#include <unordered_set>

#include <fmt/format.h>

#include "flminer/error.hpp"

namespace flminer {
namespace {

struct Cand {
  MltlOp op;
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::size_t size = 1;
  std::size_t depth = 0;
  std::uint64_t vars = 0;
};

std::vector<Cand> generate(const TemporalConfig& config, std::size_t num_vars,
                           const std::vector<Interval>& intervals) {
  std::vector<Cand> out;
  std::vector<std::vector<std::uint32_t>> by_size(config.max_size + 1);
  auto push = [&](Cand c) {
    by_size[c.size].push_back(static_cast<std::uint32_t>(out.size()));
    out.push_back(c);
  };
  for (std::size_t s = 1; s <= config.max_size; ++s) {
    if (s == 1) {
      for (std::size_t v = 0; v < num_vars; ++v) {
        push(Cand{MltlOp::kAtom, 0, 0, static_cast<std::uint32_t>(v), 0, 1, 0,
                  std::uint64_t{1} << v});
      }
      continue;
    }
    for (auto i : by_size[s - 1]) {
      const Cand child = out[i];
      if (config.operators.negation && child.op != MltlOp::kNot) {
        push(Cand{MltlOp::kNot, 0, 0, i, 0, s, child.depth, child.vars});
      }
    }
    for (MltlOp op : {MltlOp::kFinally, MltlOp::kGlobally}) {
      if (op == MltlOp::kFinally && !config.use_finally) continue;
      if (op == MltlOp::kGlobally && !config.use_globally) continue;
      for (auto i : by_size[s - 1]) {
        const Cand child = out[i];
        if (child.depth + 1 > config.max_temporal_depth) continue;
        for (const auto& [lo, hi] : intervals) {
          push(Cand{op, lo, hi, i, 0, s, child.depth + 1, child.vars});
        }
      }
    }
    for (MltlOp op : {MltlOp::kAnd, MltlOp::kOr}) {
      if (op == MltlOp::kAnd && !config.operators.conjunction) continue;
      if (op == MltlOp::kOr && !config.operators.disjunction) continue;
      for (std::size_t s1 = 1; 2 * s1 <= s - 1; ++s1) {
        const std::size_t s2 = s - 1 - s1;
        for (auto i : by_size[s1]) {
          for (auto j : by_size[s2]) {
            if (s1 == s2 && j <= i) continue;
            const Cand& x = out[i];
            const Cand& y = out[j];
            const std::uint64_t vars = x.vars | y.vars;
            if (static_cast<std::size_t>(std::popcount(vars)) > config.max_vars_per_formula) {
              continue;
            }
            push(Cand{op, 0, 0, i, j, s, std::max(x.depth, y.depth), vars});
          }
        }
      }
    }
  }
  return out;
}

std::vector<MltlFormula> build_all(const std::vector<Cand>& cands,
                                   const std::vector<std::string>& variables) {
  std::vector<MltlFormula> f;
  f.reserve(cands.size());
  for (const auto& c : cands) {
    switch (c.op) {
      case MltlOp::kAtom: f.push_back(MltlFormula::atom(variables[c.a])); break;
      case MltlOp::kNot: f.push_back(MltlFormula::negate(f[c.a])); break;
      case MltlOp::kAnd: f.push_back(MltlFormula::conj(f[c.a], f[c.b])); break;
      case MltlOp::kOr: f.push_back(MltlFormula::disj(f[c.a], f[c.b])); break;
      case MltlOp::kFinally: f.push_back(MltlFormula::finally(c.lo, c.hi, f[c.a])); break;
      case MltlOp::kGlobally: f.push_back(MltlFormula::globally(c.lo, c.hi, f[c.a])); break;
      default: throw Error(ErrorCode::kInvalidConfig, "unexpected operator in temporal grammar");
    }
  }
  return f;
}

std::vector<std::string> resolve_variables(const TemporalConfig& config,
                                           const std::vector<Trace>& traces) {
  std::vector<std::string> vars;
  if (!config.variables.empty()) {
    vars = config.variables;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (const auto& t : traces) {
      for (const auto& v : vars) {
        if (!t.var_index(v)) {
          throw Error(ErrorCode::kUnknownVariable,
                      fmt::format("trace {} lacks variable {}", t.trace_id, v));
        }
      }
    }
  } else if (!traces.empty()) {
    std::set<std::string> shared(traces[0].vars.begin(), traces[0].vars.end());
    for (const auto& t : traces) {
      std::set<std::string> mine(t.vars.begin(), t.vars.end());
      std::set<std::string> keep;
      std::set_intersection(shared.begin(), shared.end(), mine.begin(), mine.end(),
                            std::inserter(keep, keep.end()));
      shared = std::move(keep);
    }
    vars.assign(shared.begin(), shared.end());
  }
  if (vars.size() > 64) throw Error(ErrorCode::kInvalidConfig, "temporal mining supports at most 64 variables");
  return vars;
}

void collect_bounds(const MltlFormula& f, std::vector<Interval>& out) {
  if (f.op() == MltlOp::kFinally || f.op() == MltlOp::kGlobally || f.op() == MltlOp::kUntil) {
    out.emplace_back(f.lo(), f.hi());
  }
  if (f.lhs().valid()) collect_bounds(f.lhs(), out);
  if (f.rhs().valid()) collect_bounds(f.rhs(), out);
}

void check_classes(const std::vector<Trace>& traces) {
  const bool pos = std::any_of(traces.begin(), traces.end(),
                               [](const Trace& t) { return t.label == Label::kPositive; });
  const bool neg = std::any_of(traces.begin(), traces.end(),
                               [](const Trace& t) { return t.label == Label::kNegative; });
  if (!pos || !neg) {
    throw Error(ErrorCode::kDegenerateDataset,
                "temporal mining needs at least one positive and one negative trace");
  }
}

// All trace positions laid end to end, one bit each.
class Positions {
 public:
  explicit Positions(const std::vector<Trace>& traces) : traces_(traces) {
    for (const auto& t : traces) {
      validate_trace(t);
      offsets_.push_back(total_);
      total_ += t.length();
    }
    words_ = (total_ + 63) / 64;
  }

  std::size_t words() const { return words_; }
  std::size_t offset(std::size_t trace) const { return offsets_[trace]; }
  static bool get(const std::vector<std::uint64_t>& v, std::size_t p) {
    return (v[p / 64] >> (p % 64)) & 1U;
  }
  static void set(std::vector<std::uint64_t>& v, std::size_t p) {
    v[p / 64] |= std::uint64_t{1} << (p % 64);
  }

  std::vector<std::uint64_t> atom(const std::string& name) const {
    std::vector<std::uint64_t> out(words_, 0);
    for (std::size_t t = 0; t < traces_.size(); ++t) {
      const auto v = *traces_[t].var_index(name);
      for (std::size_t i = 0; i < traces_[t].length(); ++i) {
        if (traces_[t].at(v, i)) set(out, offsets_[t] + i);
      }
    }
    return out;
  }

  std::vector<std::uint64_t> negate(const std::vector<std::uint64_t>& a) const {
    std::vector<std::uint64_t> out(words_);
    for (std::size_t w = 0; w < words_; ++w) out[w] = ~a[w];
    if (total_ % 64) out[words_ - 1] &= (std::uint64_t{1} << (total_ % 64)) - 1;
    return out;
  }

  // F (eventually) when `any`, G (always) otherwise.
  std::vector<std::uint64_t> window(const std::vector<std::uint64_t>& a, std::size_t lo,
                                    std::size_t hi, bool any) const {
    std::vector<std::uint64_t> out(words_, 0);
    std::vector<std::size_t> prefix;
    for (std::size_t t = 0; t < traces_.size(); ++t) {
      const std::size_t len = traces_[t].length();
      const std::size_t off = offsets_[t];
      prefix.assign(len + 1, 0);
      for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + (get(a, off + i) ? 1 : 0);
      for (std::size_t i = 0; i < len; ++i) {
        bool value;
        if (i + lo >= len) {
          value = !any;
        } else {
          const std::size_t first = i + lo;
          const std::size_t last = std::min(i + hi, len - 1);
          const std::size_t ones = prefix[last + 1] - prefix[first];
          value = any ? ones > 0 : ones == last + 1 - first;
        }
        if (value) set(out, off + i);
      }
    }
    return out;
  }

 private:
  const std::vector<Trace>& traces_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
  std::size_t words_ = 0;
};

struct SignatureHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : v) {
      h ^= x;
      h *= 1099511628211ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::vector<Interval> resolve_intervals(const TemporalConfig& config,
                                        const std::vector<std::string>& variables,
                                        const std::vector<Trace>& traces) {
  std::set<std::size_t> highs(config.upper_bounds.begin(), config.upper_bounds.end());
  if (config.infer_bounds && !traces.empty()) {
    for (const auto& a : variables) {
      for (const auto& c : variables) {
        if (a == c) continue;
        const auto inferred = infer_bound(traces, a, c);
        if (inferred.t_star) highs.insert(*inferred.t_star);
      }
    }
  }
  std::set<Interval> out;
  for (auto lo : config.lower_bounds) {
    for (auto hi : highs) {
      if (lo <= hi) out.emplace(lo, hi);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<MltlFormula> enumerate_temporal(const TemporalConfig& config,
                                            const std::vector<std::string>& variables,
                                            const std::vector<Interval>& intervals) {
  if (variables.size() > 64) throw Error(ErrorCode::kInvalidConfig, "at most 64 variables");
  return build_all(generate(config, variables.size(), intervals), variables);
}

bool ranks_before(const TemporalScore& a, const TemporalScore& b) noexcept {
  const double ja = std::abs(a.stats.j);
  const double jb = std::abs(b.stats.j);
  if (ja != jb) return ja > jb;
  if (a.size != b.size) return a.size < b.size;
  return a.text < b.text;
}

TemporalScore score_temporal(const MltlFormula& f, const std::vector<Trace>& traces) {
  std::size_t c[4] = {};
  for (const auto& t : traces) {
    const bool sat = eval_mltl(f, t, 0);
    const bool pos = t.label == Label::kPositive;
    ++c[(pos ? 0 : 2) + (sat ? 0 : 1)];
  }
  TemporalScore s{f, format_mltl(f), f.size(), {}, make_stats(c[0], c[1], c[2], c[3], 0, 0)};
  collect_bounds(f, s.bounds);
  return s;
}

std::vector<TemporalScore> mine_temporal(const TemporalConfig& config,
                                         const std::vector<Trace>& traces, std::size_t top_k,
                                         std::size_t workers) {
  check_classes(traces);
  if (config.max_size < 1) throw Error(ErrorCode::kInvalidConfig, "max_size must be >= 1");
  const auto variables = resolve_variables(config, traces);
  const auto intervals = resolve_intervals(config, variables, traces);
  const auto cands = generate(config, variables.size(), intervals);
  const Positions pos(traces);

  std::vector<std::vector<std::uint64_t>> vec(cands.size());
  auto compute = [&](std::size_t i) {
    const Cand& c = cands[i];
    switch (c.op) {
      case MltlOp::kAtom: vec[i] = pos.atom(variables[c.a]); break;
      case MltlOp::kNot: vec[i] = pos.negate(vec[c.a]); break;
      case MltlOp::kAnd:
      case MltlOp::kOr: {
        vec[i] = vec[c.a];
        for (std::size_t w = 0; w < pos.words(); ++w) {
          if (c.op == MltlOp::kAnd) vec[i][w] &= vec[c.b][w];
          else vec[i][w] |= vec[c.b][w];
        }
        break;
      }
      case MltlOp::kFinally: vec[i] = pos.window(vec[c.a], c.lo, c.hi, true); break;
      case MltlOp::kGlobally: vec[i] = pos.window(vec[c.a], c.lo, c.hi, false); break;
      default: break;
    }
  };

  // Children always have a smaller size, so each size level is independent.
  workers = std::max<std::size_t>(1, workers);
  std::size_t begin = 0;
  while (begin < cands.size()) {
    std::size_t end = begin;
    while (end < cands.size() && cands[end].size == cands[begin].size) ++end;
    if (workers == 1) {
      for (std::size_t i = begin; i < end; ++i) compute(i);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          for (std::size_t i = begin + w; i < end; i += workers) compute(i);
        });
      }
      for (auto& t : threads) t.join();
    }
    begin = end;
  }

  const auto formulas = build_all(cands, variables);
  struct Scored {
    TemporalScore score;
    std::size_t index;
  };
  std::vector<Scored> scored;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    std::size_t c[4] = {};
    for (std::size_t t = 0; t < traces.size(); ++t) {
      const bool sat = Positions::get(vec[i], pos.offset(t));
      ++c[(traces[t].label == Label::kPositive ? 0 : 2) + (sat ? 0 : 1)];
    }
    const bool constant = (c[0] + c[2] == 0) || (c[1] + c[3] == 0);
    if (constant) continue;
    TemporalScore s{formulas[i], format_mltl(formulas[i]), formulas[i].size(), {},
                    make_stats(c[0], c[1], c[2], c[3], 0, 0)};
    collect_bounds(formulas[i], s.bounds);
    scored.push_back({std::move(s), i});
  }
  std::sort(scored.begin(), scored.end(),
            [](const Scored& x, const Scored& y) { return ranks_before(x.score, y.score); });

  std::vector<TemporalScore> out;
  std::unordered_set<std::vector<std::uint64_t>, SignatureHash> seen;
  for (auto& s : scored) {
    if (out.size() >= top_k) break;
    if (config.dedup_equivalent && !seen.insert(vec[s.index]).second) continue;
    out.push_back(std::move(s.score));
  }
  return out;
}

}  // namespace flminer
