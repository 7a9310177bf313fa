#include "bbpa/game.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace bbpa {

namespace {

using Pair = std::pair<VarString, VarString>;

Pair oriented(Side side, const VarString& attacker, const VarString& defender)
{
    return side == Side::Left ? Pair{attacker, defender} : Pair{defender, attacker};
}

// True iff every defender answer to `attack` carries an obligation satisfying
// `refuted`. Escapes (answers leaving the bounds) make it false. The
// obligations relied upon are appended to `used`.
template <class Refuted>
bool answers_refuted(const BpaSystem& system, const RedundancyContext& context, const GameBounds& bounds, Side side,
                     const Transition& attack, const VarString& defender, Refuted&& refuted, std::vector<Pair>& used)
{
    if (is_silent(attack.label)) {
        Pair stay = oriented(side, attack.target, defender);
        if (!refuted(stay)) return false;
        used.push_back(std::move(stay));
    }

    std::vector<VarString> path{defender};
    std::function<bool(const VarString&, unsigned)> walk = [&](const VarString& t, unsigned steps) -> bool {
        for (const Transition& tr : transitions(system, t, context)) {
            if (tr.label == attack.label) {
                if (tr.target.size() > bounds.len_cap) return false;
                Pair fin = oriented(side, attack.target, tr.target);
                if (!refuted(fin)) return false;
                used.push_back(std::move(fin));
            }
            if (!is_silent(tr.label)) continue;
            if (std::find(path.begin(), path.end(), tr.target) != path.end()) continue;
            if (tr.target.size() > bounds.len_cap) return false;
            Pair mid = oriented(side, attack.source, tr.target);
            if (refuted(mid)) {
                used.push_back(std::move(mid));
                continue;
            }
            if (steps + 1 > bounds.tau_bound) return false;
            path.push_back(tr.target);
            if (!walk(tr.target, steps + 1)) return false;
            path.pop_back();
        }
        return true;
    };
    return walk(defender, 0);
}

void dedupe(std::vector<Pair>& pairs)
{
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

} // namespace

BoundedGame::BoundedGame(const BpaSystem& system, RedundancyContext context, GameBounds bounds)
    : system_(&system), context_(std::move(context)), bounds_(bounds)
{
}

GameVerdict BoundedGame::play(const VarString& left, const VarString& right)
{
    GameVerdict v;
    v.bounds = bounds_;
    v.witness = wins(left, right, bounds_.depth);
    v.distinguished = v.witness != nullptr;
    return v;
}

std::shared_ptr<const StrategyNode> BoundedGame::wins(const VarString& left, const VarString& right, unsigned depth)
{
    if (depth == 0 || left == right) return nullptr;
    Pair key{left, right};
    if (auto it = memo_.find(key); it != memo_.end()) {
        const Memo& m = it->second;
        if (m.win && m.win_depth <= depth) return m.win;
        if (static_cast<int>(depth) <= m.failed_upto) return nullptr;
    }

    auto refuted = [&](const Pair& ob) { return wins(ob.first, ob.second, depth - 1) != nullptr; };

    for (Side side : {Side::Left, Side::Right}) {
        const VarString& attacker = side == Side::Left ? left : right;
        const VarString& defender = side == Side::Left ? right : left;
        for (const Transition& attack : transitions(*system_, attacker, context_)) {
            if (attack.target.size() > bounds_.len_cap) continue;
            std::vector<Pair> used;
            if (!answers_refuted(*system_, context_, bounds_, side, attack, defender, refuted, used)) continue;
            dedupe(used);
            auto node = std::make_shared<StrategyNode>();
            node->left = left;
            node->right = right;
            node->side = side;
            node->attack = attack;
            for (Pair& ob : used) {
                auto proof = wins(ob.first, ob.second, depth - 1);
                node->refutations.push_back(Refutation{std::move(ob.first), std::move(ob.second), std::move(proof)});
            }
            Memo& m = memo_[key];
            m.win = node;
            m.win_depth = depth;
            return node;
        }
    }
    Memo& m = memo_[key];
    m.failed_upto = std::max(m.failed_upto, static_cast<int>(depth));
    return nullptr;
}

GameVerdict distinguish(const BpaSystem& system, const VarString& left, const VarString& right,
                        const RedundancyContext& context, const GameBounds& bounds)
{
    BoundedGame game(system, context, bounds);
    return game.play(left, right);
}

bool replay_witness(const BpaSystem& system, const RedundancyContext& context, const GameBounds& bounds,
                    const StrategyNode& witness)
{
    std::map<const StrategyNode*, bool> checked;
    std::function<bool(const StrategyNode&)> check = [&](const StrategyNode& node) -> bool {
        if (auto it = checked.find(&node); it != checked.end()) return it->second;
        checked[&node] = false; // a strategy is a finite DAG; a cycle is a malformed witness
        bool ok = node.left != node.right;
        const VarString& attacker = node.side == Side::Left ? node.left : node.right;
        const VarString& defender = node.side == Side::Left ? node.right : node.left;
        if (ok) {
            auto moves = transitions(system, attacker, context);
            ok = node.attack.source == attacker && node.attack.target.size() <= bounds.len_cap &&
                 std::find(moves.begin(), moves.end(), node.attack) != moves.end();
        }
        if (ok) {
            auto refuted = [&](const Pair& ob) {
                for (const Refutation& r : node.refutations) {
                    if (r.left == ob.first && r.right == ob.second && r.proof && r.proof->left == r.left &&
                        r.proof->right == r.right && check(*r.proof)) {
                        return true;
                    }
                }
                return false;
            };
            std::vector<Pair> used;
            ok = answers_refuted(system, context, bounds, node.side, node.attack, defender, refuted, used);
        }
        checked[&node] = ok;
        return ok;
    };
    return check(witness);
}

std::string format_witness(const BpaSystem& system, const StrategyNode& witness)
{
    std::ostringstream out;
    std::function<void(const StrategyNode&, int)> emit = [&](const StrategyNode& node, int indent) {
        out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "(" << format_string(system, node.left)
            << " | " << format_string(system, node.right) << ") attacker "
            << (node.side == Side::Left ? "left" : "right") << ": " << format_string(system, node.attack.source)
            << " -" << system.name(node.attack.label) << "-> " << format_string(system, node.attack.target) << '\n';
        for (const Refutation& r : node.refutations) {
            if (r.proof) emit(*r.proof, indent + 1);
        }
    };
    emit(witness, 0);
    return out.str();
}

} // namespace bbpa
