"""
Greedy welfare maximization on two small scenarios
==================================================

A buyer scenario where the greedy allocation is fair up to one good, and a
general scenario where no utilitarian-optimal allocation can be.
"""

from fairalloc import Scenario, check_fairness, enumerate_all, gamma, welfare

# Three agents, five resources. Every agent values a resource either at its
# price or at zero, so this is a buyer scenario.
buyer = Scenario.from_integers([
    [500, 200, 50, 0, 0],
    [500, 0, 50, 100, 250],
    [500, 200, 0, 100, 0],
])
print("class:", buyer.scenario_class.value)

# gamma hands each resource to a top valuer, preferring the least served one.
allocation, trace = gamma(buyer)
for step in trace:
    print(f"r{step.resource}: candidates {step.candidates} -> agent {step.chosen}, partial {[str(p) for p in step.partial]}")

rep = welfare(buyer, allocation)
print("allocation:", allocation, "utilities:", [int(u) for u in rep.per_agent], "sw_u:", rep.sw_u)

# Nash optimality needs ground truth, so enumerate all 3**5 allocations.
truth = enumerate_all(buyer)
report = check_fairness(buyer, allocation, enumerated=truth)
for name, verdict in report.items():
    print(f"  {name:12s} {verdict.status.value}")
print("Nash optimum", truth.msw_nash_value, "reached by", [str(a) for a in truth.msw_nash_set])

# Two agents who disagree about values. Agent 1 values both goods most, so the
# only utilitarian optimum gives everything to agent 1 and agent 2 envies it
# beyond any single good.
general = Scenario.from_integers([[10, 10], [3, 2]])
truth = enumerate_all(general)
for a in truth.msw_u_set:
    print(f"msw_u member {a}: ef1 {check_fairness(general, a).ef1.status.value}")
print("Nash optimum", [str(a) for a in truth.msw_nash_set], "value", truth.msw_nash_value)
