#pragma once

#include <functional>
#include <map>
#include <random>

#include "cornering/engine.hpp"

namespace cornering {

enum class Strategy : uint8_t { PopFirst, Interleaved, Exhaustive };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::PopFirst: return "pop-first";
    case Strategy::Interleaved: return "interleaved";
    case Strategy::Exhaustive: return "exhaustive";
  }
  return "?";
}

struct ReduceConfig {
  Strategy strategy = Strategy::PopFirst;
  std::uint64_t seed = 0;
  std::size_t max_steps = 100000;
  BaseRwConfig base_cfg{};
};

struct ReduceResult {
  TermPtr term;
  Trace trace;
};

namespace detail {

// One regrouping or fusion step towards merging adjacent base cells;
// returns false at the fusion fixpoint.
inline bool fuse_progress(TraceBuilder& tb) {
  struct Hit {
    Path pos;
    StructLaw law;
    Orient o;
  };
  std::optional<Hit> hit;
  std::function<void(const TermPtr&, Path&)> scan = [&](const TermPtr& t, Path& p) {
    if (hit) return;
    if (t->kind == TermKind::VComp) {
      if (t->fst->kind == TermKind::Base && t->snd->kind == TermKind::Base) {
        hit = Hit{p, StructLaw::FuseSeq, Orient::Fwd};
        return;
      }
      if (t->fst->kind == TermKind::Base && t->snd->kind == TermKind::VComp &&
          t->snd->fst->kind == TermKind::Base) {
        hit = Hit{p, StructLaw::VAssoc, Orient::Fwd};
        return;
      }
      if (t->snd->kind == TermKind::Base && t->fst->kind == TermKind::VComp &&
          t->fst->snd->kind == TermKind::Base) {
        hit = Hit{p, StructLaw::VAssoc, Orient::Bwd};
        return;
      }
    }
    if (t->kind == TermKind::HComp) {
      if (t->fst->kind == TermKind::Base && t->snd->kind == TermKind::Base) {
        hit = Hit{p, StructLaw::FusePar, Orient::Fwd};
        return;
      }
      if (t->fst->kind == TermKind::Base && t->snd->kind == TermKind::HComp &&
          t->snd->fst->kind == TermKind::Base) {
        hit = Hit{p, StructLaw::HAssoc, Orient::Bwd};
        return;
      }
      if (t->snd->kind == TermKind::Base && t->fst->kind == TermKind::HComp &&
          t->fst->snd->kind == TermKind::Base) {
        hit = Hit{p, StructLaw::HAssoc, Orient::Fwd};
        return;
      }
    }
    if (t->fst) {
      p.push_back(0);
      scan(t->fst, p);
      p.back() = 1;
      scan(t->snd, p);
      p.pop_back();
    }
  };
  Path p;
  scan(tb.current(), p);
  if (!hit) return false;
  tb.struct_step(hit->pos, hit->law, hit->o);
  return true;
}

struct BaseMove {
  Path pos;
  std::string rule;
  std::size_t occurrence;
};

inline std::vector<BaseMove> base_moves(const TermPtr& t,
                                        const std::vector<BaseRule>& rules,
                                        const BaseRwConfig& cfg) {
  std::vector<BaseMove> out;
  std::function<void(const TermPtr&, Path&)> scan = [&](const TermPtr& n, Path& p) {
    if (n->kind == TermKind::Base) {
      auto moves = enumerate_base_rewrites(n->base, rules, cfg);
      // occurrences are indexed per rule, in result-hash order, matching
      // the replay convention in apply_step
      std::map<std::string, std::vector<std::size_t>> per_rule;
      for (const auto& [rule, result] : moves)
        per_rule[rule->name].push_back(base_hash(result));
      for (auto& [name, hashes] : per_rule) {
        std::sort(hashes.begin(), hashes.end());
        for (std::size_t i = 0; i < hashes.size(); ++i)
          out.push_back({p, name, i});
      }
      return;
    }
    if (n->fst) {
      p.push_back(0);
      scan(n->fst, p);
      p.back() = 1;
      scan(n->snd, p);
      p.pop_back();
    }
  };
  Path p;
  scan(t, p);
  return out;
}

}  // namespace detail

// Applies interaction steps and base rewrites until neither applies or
// the step budget runs out. Strategies differ in how the two rewrite
// families are interleaved; by confluence they agree on closed terms.
inline ReduceResult reduce_combined(const TermPtr& a,
                                    const std::vector<BaseRule>& rules,
                                    const ReduceConfig& cfg = {}) {
  TraceBuilder tb(a, &rules);
  std::mt19937_64 rng(cfg.seed);
  auto out_of_budget = [&] { return tb.size() > cfg.max_steps; };

  auto run_pop = [&]() {
    PopResult pr = pop(tb.current());
    tb.splice(pr.trace, {});
  };
  auto fuse_all = [&]() {
    while (detail::fuse_progress(tb)) {
      if (out_of_budget()) throw StepBudgetExceeded("reduce: step budget");
    }
  };
  auto one_base = [&](std::size_t pick) -> bool {
    auto moves = detail::base_moves(tb.current(), rules, cfg.base_cfg);
    if (moves.empty()) return false;
    const auto& m = moves[pick % moves.size()];
    tb.base_step(m.pos, m.rule, m.occurrence);
    return true;
  };

  switch (cfg.strategy) {
    case Strategy::PopFirst: {
      run_pop();
      for (;;) {
        if (out_of_budget()) throw StepBudgetExceeded("reduce: step budget");
        fuse_all();
        if (!one_base(0)) break;
      }
      break;
    }
    case Strategy::Interleaved: {
      for (;;) {
        if (out_of_budget()) throw StepBudgetExceeded("reduce: step budget");
        auto betas = enumerate_beta_redexes(tb.current());
        auto bases = detail::base_moves(tb.current(), rules, cfg.base_cfg);
        if (!betas.empty() && (bases.empty() || rng() % 2 == 0)) {
          auto& [pos, rule] = betas[rng() % betas.size()];
          tb.beta_step(pos, rule);
          continue;
        }
        if (!bases.empty()) {
          one_base(rng());
          continue;
        }
        // No direct move; rearrange. Fusion may expose base redexes,
        // normalization exposes the remaining interaction steps.
        TermPtr before = tb.current();
        fuse_all();
        if (!detail::base_moves(tb.current(), rules, cfg.base_cfg).empty())
          continue;
        run_pop();
        fuse_all();
        if (term_eq(tb.current(), before)) break;
        if (detail::base_moves(tb.current(), rules, cfg.base_cfg).empty() &&
            enumerate_beta_redexes(tb.current()).empty() &&
            is_popped(tb.current()))
          break;
      }
      break;
    }
    case Strategy::Exhaustive: {
      for (;;) {
        if (out_of_budget()) throw StepBudgetExceeded("reduce: step budget");
        auto betas = enumerate_beta_redexes(tb.current());
        if (!betas.empty()) {
          tb.beta_step(betas.front().first, betas.front().second);
          continue;
        }
        fuse_all();
        if (one_base(0)) continue;
        TermPtr before = tb.current();
        run_pop();
        fuse_all();
        if (term_eq(tb.current(), before)) break;
      }
      break;
    }
  }
  return {tb.current(), tb.finish()};
}

}  // namespace cornering
