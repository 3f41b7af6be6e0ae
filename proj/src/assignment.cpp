#include <psched/assignment.hpp>

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace psched {

namespace {

bool weight_order(const AssignmentItem& a, const AssignmentItem& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    return a.id < b.id;
}

// Kuhn-style augmentation over the slot interval graph, iterative so long
// displacement chains cannot overflow the stack. slot_owner maps slot offset
// to an index into `items`, -1 when free.
bool try_augment(std::size_t item_idx, const std::vector<AssignmentItem>& items, Step slots_lo,
                 std::vector<std::int64_t>& slot_owner, std::vector<std::uint32_t>& visited,
                 std::uint32_t stamp) {
    struct Frame {
        std::size_t item;
        Step next_slot;        // next candidate slot for this item
        std::size_t descended; // slot offset whose owner we are displacing
    };
    static thread_local std::vector<Frame> stack;
    stack.clear();
    stack.push_back({item_idx, items[item_idx].slot_lo, 0});

    while (!stack.empty()) {
        Frame& frame = stack.back();
        const AssignmentItem& item = items[frame.item];
        bool moved = false;
        while (frame.next_slot <= item.slot_hi) {
            const Step slot = frame.next_slot++;
            const auto offset = static_cast<std::size_t>(slot - slots_lo);
            if (visited[offset] == stamp) continue;
            visited[offset] = stamp;
            if (slot_owner[offset] < 0) {
                // free slot found: the whole chain shifts one slot over
                slot_owner[offset] = static_cast<std::int64_t>(frame.item);
                for (std::size_t depth = stack.size() - 1; depth-- > 0;)
                    slot_owner[stack[depth].descended] =
                        static_cast<std::int64_t>(stack[depth].item);
                return true;
            }
            frame.descended = offset;
            const auto owner = static_cast<std::size_t>(slot_owner[offset]);
            stack.push_back({owner, items[owner].slot_lo, 0});
            moved = true;
            break;
        }
        if (!moved) stack.pop_back();
    }
    return false;
}

}  // namespace

void AssignmentProblem::validate() const {
    for (const AssignmentItem& item : items) {
        if (item.slot_lo > item.slot_hi)
            throw std::invalid_argument("assignment: item with empty slot range");
        if (item.slot_lo < slots_lo || item.slot_hi > slots_hi)
            throw std::invalid_argument("assignment: item range outside slot interval");
        if (!(item.weight > 0.0)) throw std::invalid_argument("assignment: non-positive weight");
    }
}

AssignmentSolution solve(const AssignmentProblem& problem) {
    AssignmentSolution solution;
    if (problem.items.empty() || problem.slots_lo > problem.slots_hi) return solution;
    problem.validate();

    std::vector<AssignmentItem> order = problem.items;
    for (AssignmentItem& item : order)
        if (item.deadline == 0) item.deadline = item.slot_hi;
    std::sort(order.begin(), order.end(), weight_order);

    const auto slot_count = static_cast<std::size_t>(problem.slots_hi - problem.slots_lo + 1);
    std::vector<std::int64_t> slot_owner(slot_count, -1);
    std::vector<std::uint32_t> visited(slot_count, 0);
    std::uint32_t stamp = 0;
    std::size_t matched = 0;

    std::vector<bool> chosen(order.size(), false);
    for (std::size_t i = 0; i < order.size() && matched < slot_count; ++i) {
        ++stamp;
        if (try_augment(i, order, problem.slots_lo, slot_owner, visited, stamp)) {
            chosen[i] = true;
            ++matched;
        }
    }

    // Canonicalize the chosen set earliest-deadline-first so the lowest slots
    // are filled whenever any chosen item is available there.
    struct Ready {
        Step deadline;
        PacketId id;
        double weight;
        bool operator>(const Ready& other) const {
            if (deadline != other.deadline) return deadline > other.deadline;
            return id > other.id;
        }
    };
    std::vector<std::pair<Step, Ready>> by_release;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (chosen[i])
            by_release.push_back(
                {order[i].slot_lo, {order[i].slot_hi, order[i].id, order[i].weight}});
    std::sort(by_release.begin(), by_release.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.id < b.second.id;
    });

    std::priority_queue<Ready, std::vector<Ready>, std::greater<>> ready;
    std::size_t next_release = 0;
    for (Step slot = problem.slots_lo; slot <= problem.slots_hi; ++slot) {
        while (next_release < by_release.size() && by_release[next_release].first <= slot)
            ready.push(by_release[next_release++].second);
        if (ready.empty()) continue;
        const Ready item = ready.top();
        ready.pop();
        if (item.deadline < slot)
            throw std::logic_error("assignment: canonicalization found infeasible chosen set");
        solution.assigned.emplace(item.id, slot);
        solution.total_weight += item.weight;
    }
    if (!ready.empty())
        throw std::logic_error("assignment: canonicalization left chosen items unplaced");
    return solution;
}

AssignmentSolution solve_bruteforce(const AssignmentProblem& problem) {
    const std::size_t slot_count =
        problem.slots_lo > problem.slots_hi
            ? 0
            : static_cast<std::size_t>(problem.slots_hi - problem.slots_lo + 1);
    if (problem.items.size() > 10 || slot_count > 10)
        throw std::invalid_argument("solve_bruteforce: refusing more than 10 items or 10 slots");
    problem.validate();

    double best_total = -1.0;
    std::vector<std::int64_t> best_slot;
    std::vector<std::int64_t> slot_of_item(problem.items.size(), -1);
    std::vector<bool> slot_used(slot_count, false);

    std::vector<double> remaining(problem.items.size() + 1, 0.0);
    for (std::size_t i = problem.items.size(); i-- > 0;)
        remaining[i] = remaining[i + 1] + problem.items[i].weight;

    double current = 0.0;
    auto recurse = [&](auto&& self, std::size_t idx) -> void {
        if (current + remaining[idx] <= best_total) return;
        if (idx == problem.items.size()) {
            best_total = current;
            best_slot = slot_of_item;
            return;
        }
        const AssignmentItem& item = problem.items[idx];
        for (Step slot = item.slot_lo; slot <= item.slot_hi; ++slot) {
            const auto offset = static_cast<std::size_t>(slot - problem.slots_lo);
            if (slot_used[offset]) continue;
            slot_used[offset] = true;
            slot_of_item[idx] = static_cast<std::int64_t>(offset);
            current += item.weight;
            self(self, idx + 1);
            current -= item.weight;
            slot_of_item[idx] = -1;
            slot_used[offset] = false;
        }
        self(self, idx + 1);  // leave unassigned
    };
    recurse(recurse, 0);

    AssignmentSolution best;
    if (best_total < 0.0) return best;
    best.total_weight = best_total;
    for (std::size_t i = 0; i < best_slot.size(); ++i)
        if (best_slot[i] >= 0)
            best.assigned.emplace(problem.items[i].id, problem.slots_lo + best_slot[i]);
    return best;
}

OfflineResult offline_optimum(const Instance& inst, Step t_end, Window window,
                              OfflineWindowMode mode) {
    if (window.first > window.last) throw std::invalid_argument("offline_optimum: empty window");
    if (window.first < 1 || window.last > t_end)
        throw std::invalid_argument("offline_optimum: window must lie within [1, t_end]");

    AssignmentProblem problem;
    if (mode == OfflineWindowMode::Restrict) {
        problem.slots_lo = window.first;
        problem.slots_hi = window.last;
    } else {
        problem.slots_lo = 1;
        problem.slots_hi = t_end;
    }
    for (const Packet& p : inst.packets) {
        AssignmentItem item;
        item.id = p.id;
        item.weight = p.weight;
        item.slot_lo = std::max(p.release, problem.slots_lo);
        item.slot_hi = std::min(p.deadline, problem.slots_hi);
        item.deadline = p.deadline;
        if (item.slot_lo > item.slot_hi) continue;  // never schedulable
        problem.items.push_back(item);
    }

    OfflineResult result;
    result.schedule = solve(problem);
    result.total_weight = result.schedule.total_weight;
    for (const auto& [id, slot] : result.schedule.assigned) {
        if (window.contains(slot))
            result.zeta_off += inst.packets[static_cast<std::size_t>(id)].weight;
    }
    return result;
}

}  // namespace psched
