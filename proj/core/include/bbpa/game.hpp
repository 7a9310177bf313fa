#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bbpa/semantics.hpp"

namespace bbpa {

enum class Side { Left, Right };

struct StrategyNode;

/// An obligation pair (left/right orientation of the root position) that the
/// attacker refutes, with the sub-strategy doing so.
struct Refutation {
    VarString left;
    VarString right;
    std::shared_ptr<const StrategyNode> proof;
};

/// One attacker move at position (left, right). Every defender answer to the
/// move has at least one obligation listed in `refutations`.
struct StrategyNode {
    VarString left;
    VarString right;
    Side side;
    Transition attack;
    std::vector<Refutation> refutations;
};

struct GameVerdict {
    bool distinguished = false;
    std::shared_ptr<const StrategyNode> witness; // set iff distinguished
    GameBounds bounds;
};

/// Depth-bounded branching-bisimulation game in the relative transition
/// system of `context`.
///
/// The attacker picks a side and a move s -a-> s'. The defender answers
/// either with "stay" (only when a = τ; obligation (s', t)) or with a silent
/// path t -τ-> t1 ... -τ-> tk -a-> t' of at most `tau_bound` silent steps;
/// obligations are (s, ti) for every i >= 1 and (s', t'). Every answer
/// consumes one round. Only simple silent paths are enumerated.
///
/// Answers that leave the explored region (a silent path longer than
/// `tau_bound`, or a string longer than `len_cap`) cannot be checked and are
/// counted as defender escapes. Attacker moves to strings longer than
/// `len_cap` are not played. A Distinguished verdict is therefore monotone
/// in all three bounds, and never issued for identical strings.
///
/// Holds a reference to `system`; positions are memoised across play()
/// calls.
class BoundedGame {
public:
    BoundedGame(const BpaSystem& system, RedundancyContext context, GameBounds bounds);

    GameVerdict play(const VarString& left, const VarString& right);

    const GameBounds& bounds() const { return bounds_; }
    const RedundancyContext& context() const { return context_; }
    std::size_t positions_explored() const { return memo_.size(); }

private:
    struct Memo {
        int failed_upto = -1;
        unsigned win_depth = 0;
        std::shared_ptr<const StrategyNode> win;
    };

    std::shared_ptr<const StrategyNode> wins(const VarString& left, const VarString& right, unsigned depth);

    const BpaSystem* system_;
    RedundancyContext context_;
    GameBounds bounds_;
    std::unordered_map<std::pair<VarString, VarString>, Memo, VarStringPairHash> memo_;
};

GameVerdict distinguish(const BpaSystem& system, const VarString& left, const VarString& right,
                        const RedundancyContext& context, const GameBounds& bounds);

/// Re-checks a strategy against a fresh enumeration of defender answers.
bool replay_witness(const BpaSystem& system, const RedundancyContext& context, const GameBounds& bounds,
                    const StrategyNode& witness);

/// Indented, one line per attacker move.
std::string format_witness(const BpaSystem& system, const StrategyNode& witness);

} // namespace bbpa
