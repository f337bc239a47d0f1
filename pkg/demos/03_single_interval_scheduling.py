"""One scheduling round under the microscope.

Builds a small synthetic interval, shows the satellite ranking, runs the
greedy orchestrator, and compares its utility against the exhaustive solver.

Run:  python demos/03_single_interval_scheduling.py
"""

import numpy as np

from leo_offload import exact_solve, validate_assignment
from leo_offload.economics import BudgetLedger
from leo_offload.harness import random_interval_state
from leo_offload.orchestrator import (
    IntervalState,
    ao2,
    assignment_utility,
    candidate_set,
    check_bandwidth,
)
from leo_offload.ranking import rank_satellites

rng = np.random.default_rng(18)
state = random_interval_state(rng, n_sats=3, n_sites=4, n_tasks=8)


def clone(s):
    return IntervalState(
        snapshot=s.snapshot, tasks=dict(s.tasks), batteries=s.batteries,
        ledger=BudgetLedger(s.ledger.budget_per_interval),
        sites=s.sites, prices=s.prices,
    )


print(f"{len(state.tasks)} tasks on 3 satellites, budget "
      f"${state.ledger.budget_per_interval:.4f} for this interval\n")

by_sat = candidate_set(state.tasks)
ranks = rank_satellites(by_sat, state.snapshot, state.sites, state.batteries,
                        state.prices, state.duration_s)
print("satellite ranking (marginal utility gain per unit of normalized spend):")
for r in ranks:
    print(f"  sat {r.satellite}: m={r.m:10.3e}  dQoS={r.delta_qos:9.3e}  "
          f"dSus={r.delta_sus:7.1e}  fee={r.norm_fee:.3f}  vol={r.norm_volume:.3f}")

work = clone(state)
assignment = ao2(work)
print(f"\ngreedy schedule: {len(assignment.scheduled_ids())} of "
      f"{len(state.tasks)} tasks, spend ${work.ledger.spent:.4f}")
for tid in assignment.scheduled_ids():
    e = assignment.chosen_edge(tid)
    print(f"  task {tid}: satellite {e.satellite} -> site {e.site}")

assert validate_assignment(assignment, state.snapshot, state.tasks).ok
assert check_bandwidth(assignment, state.snapshot, state.tasks, state.duration_s) == []
print("independent audits: structure, capacity, budget all clean")

u_greedy = assignment_utility(state, assignment)[0]
best = exact_solve(clone(state))
print(f"\nutility: greedy {u_greedy:.4f} vs exhaustive {best.utility:.4f} "
      f"({100 * u_greedy / best.utility:.1f}% of optimal on this instance)")
print("""
The greedy walk commits each task to its cheapest-fee feasible site, so on
instances where the cheap site is far from the destination it trades some
delay utility for spend. When an assignment can land a task on the site
that IS its destination, the delay term explodes (floored at 1 ns) and the
exhaustive optimum dwarfs everything; the dominance ordering still holds.
""")
