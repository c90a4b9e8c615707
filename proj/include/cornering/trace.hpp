#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cornering/equations.hpp"
#include "cornering/print.hpp"

namespace cornering {

enum class StepKind : uint8_t { Beta, Struct, BaseRw };

// One replayable rewrite step. Beta steps strictly decrease the special
// count, Struct and BaseRw steps preserve it.
struct Step {
  StepKind kind = StepKind::Struct;
  BetaRule beta{};
  StructLaw law{};
  Orient orient = Orient::Fwd;
  std::size_t arg = 0;        // split point for backward fuse/merge laws
  std::string rule;           // BaseRw: rule name
  std::size_t occurrence = 0; // BaseRw: index into the enumerated results
  Path pos;
  std::string before;  // digests of the whole term
  std::string after;
};

struct Trace {
  TermPtr start;
  std::vector<Step> steps;
  TermPtr end;
};

// Applies one step at its position; throws StepMismatch when the redex
// is absent and InvalidPosition when the path is. Rules are needed only
// to replay BaseRw steps.
inline TermPtr apply_step(const TermPtr& t, const Step& s,
                          const std::vector<BaseRule>* rules = nullptr,
                          const BaseRwConfig& cfg = {}) {
  TermPtr sub = subterm_at(t, s.pos);
  TermPtr repl;
  switch (s.kind) {
    case StepKind::Beta: {
      auto r = apply_beta_root(sub, s.beta);
      if (!r) throw StepMismatch("beta " + std::string(beta_name(s.beta)) +
                                 " does not match at " + path_str(s.pos));
      repl = *r;
      break;
    }
    case StepKind::Struct: {
      auto r = apply_struct_root(sub, s.law, s.orient, s.arg);
      if (!r) throw StepMismatch("struct " + std::string(law_name(s.law)) +
                                 " does not match at " + path_str(s.pos));
      repl = *r;
      break;
    }
    case StepKind::BaseRw: {
      if (sub->kind != TermKind::Base)
        throw StepMismatch("base rewrite target is not a base cell");
      if (!rules) throw StepMismatch("base rewrite requires the rule set");
      auto moves = enumerate_base_rewrites(sub->base, *rules, cfg);
      std::vector<BaseMor> candidates;
      for (const auto& [rule, result] : moves)
        if (rule->name == s.rule) candidates.push_back(result);
      std::sort(candidates.begin(), candidates.end(),
                [](const BaseMor& a, const BaseMor& b) {
                  return base_hash(a) < base_hash(b);
                });
      if (s.occurrence >= candidates.size())
        throw StepMismatch("base rule " + s.rule + " occurrence out of range");
      repl = t_base(candidates[s.occurrence]);
      break;
    }
  }
  return replace_at(t, s.pos, repl);
}

// Every single-position, single-schema application across the term,
// in both orientations.
struct StructStep {
  Path pos;
  StructMove move;
  TermPtr result;  // the whole rewritten term
};

inline void enumerate_struct_steps(const TermPtr& root, const TermPtr& t, Path& prefix,
                                   std::vector<StructStep>& out) {
  for (const auto& m : struct_moves_at(t)) {
    auto r = apply_struct_root(t, m.law, m.orient, m.arg);
    if (!r) continue;
    out.push_back({prefix, m, replace_at(root, prefix, *r)});
  }
  if (t->fst) {
    prefix.push_back(0);
    enumerate_struct_steps(root, t->fst, prefix, out);
    prefix.back() = 1;
    enumerate_struct_steps(root, t->snd, prefix, out);
    prefix.pop_back();
  }
}

inline std::vector<StructStep> enumerate_struct_steps(const TermPtr& t) {
  std::vector<StructStep> out;
  Path p;
  enumerate_struct_steps(t, t, p, out);
  return out;
}

// Builds a trace by actually performing each step, so a finished trace
// replays by construction.
class TraceBuilder {
 public:
  explicit TraceBuilder(TermPtr start, const std::vector<BaseRule>* rules = nullptr)
      : start_(start), cur_(std::move(start)), rules_(rules) {}

  const TermPtr& current() const { return cur_; }
  std::size_t size() const { return steps_.size(); }

  void struct_step(const Path& pos, StructLaw law, Orient o, std::size_t arg = 0) {
    Step s;
    s.kind = StepKind::Struct;
    s.law = law;
    s.orient = o;
    s.arg = arg;
    s.pos = pos;
    push(std::move(s));
  }

  void beta_step(const Path& pos, BetaRule r) {
    Step s;
    s.kind = StepKind::Beta;
    s.beta = r;
    s.pos = pos;
    push(std::move(s));
  }

  void base_step(const Path& pos, const std::string& rule, std::size_t occurrence) {
    Step s;
    s.kind = StepKind::BaseRw;
    s.rule = rule;
    s.occurrence = occurrence;
    s.pos = pos;
    push(std::move(s));
  }

  // Replays another trace whose start is the subterm at `at`.
  void splice(const Trace& tr, const Path& at) {
    if (!term_eq(subterm_at(cur_, at), tr.start))
      throw StepMismatch("spliced trace does not start at the subterm");
    for (const Step& s : tr.steps) {
      Step shifted = s;
      Path p = at;
      p.insert(p.end(), s.pos.begin(), s.pos.end());
      shifted.pos = std::move(p);
      push(std::move(shifted));
    }
  }

  Trace finish() const { return Trace{start_, steps_, cur_}; }

 private:
  void push(Step s) {
    s.before = term_digest(cur_);
    TermPtr next = apply_step(cur_, s, rules_);
    s.after = term_digest(next);
    steps_.push_back(std::move(s));
    cur_ = std::move(next);
  }

  TermPtr start_;
  TermPtr cur_;
  const std::vector<BaseRule>* rules_;
  std::vector<Step> steps_;
};

// Replays a trace from its start term; returns the final term and
// checks it against the recorded end.
inline TermPtr replay(const Trace& tr, const std::vector<BaseRule>* rules = nullptr) {
  TermPtr cur = tr.start;
  for (const auto& s : tr.steps) {
    if (term_digest(cur) != s.before)
      throw StepMismatch("replay: digest mismatch before step");
    cur = apply_step(cur, s, rules);
    if (term_digest(cur) != s.after)
      throw StepMismatch("replay: digest mismatch after step");
  }
  if (!term_eq(cur, tr.end)) throw StepMismatch("replay: end term mismatch");
  return cur;
}

// Line-oriented trace format, one record per step.
inline std::string trace_str(const Trace& tr) {
  std::ostringstream os;
  os << "cornering-trace v1\n";
  os << "start " << term_str(tr.start) << "\n";
  std::size_t i = 0;
  for (const auto& s : tr.steps) {
    os << "step " << i++ << " ";
    switch (s.kind) {
      case StepKind::Beta:
        os << "beta " << beta_name(s.beta);
        break;
      case StepKind::Struct:
        os << "struct " << law_name(s.law) << " "
           << (s.orient == Orient::Fwd ? "fwd" : "bwd");
        if (s.law == StructLaw::FuseSeq || s.law == StructLaw::FusePar ||
            s.law == StructLaw::HIdMerge)
          os << " arg=" << s.arg;
        break;
      case StepKind::BaseRw:
        os << "base " << s.rule << " occ=" << s.occurrence;
        break;
    }
    os << " at " << path_str(s.pos) << " before=" << s.before
       << " after=" << s.after << "\n";
  }
  os << "end " << term_str(tr.end) << "\n";
  return os.str();
}

}  // namespace cornering
