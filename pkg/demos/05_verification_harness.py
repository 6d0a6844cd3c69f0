"""
Mechanical verification and fuzzing
===================================

verify_equivalence replays the whole story for one circuit and one
assignment; fuzz_equivalence does it for a seeded stream of random
instances.  The undirected probes steer the mouse into each forbidden
deviation and confirm that the punishment arrives on schedule.
"""

from catmouse import fuzz_equivalence, parse_circuit, undirected_probes, verify_equivalence

circuit = parse_circuit("""\
inputs 2
gate g0 AND i0 i1
output g0
""")

report = verify_equivalence(circuit, "11")
print("bits 11:", "ok" if report.ok else report.violations)
for mode, outcome in sorted(report.outcomes.items()):
    print(f"  {mode}: solver {outcome.value}, scripted {report.scripted[mode].value}")

# Each probe forces one illegal-looking idea: backtracking, crossing a
# threat edge, crossing a guard, or (for the cat) wasting a move.
print()
for probe in undirected_probes(circuit, "11"):
    state = "fired" if probe.fired else "not applicable"
    verdict = "ok" if probe.ok else probe.detail
    print(f"  {probe.name:>18}: {state}, {verdict}")

# A short fuzzing run.  Failures would come with a reproducer script.
print()
fuzz = fuzz_equivalence(25, seed=2026)
print(f"fuzz: {fuzz.checked} instances checked, "
      f"{len(fuzz.failures)} failures")
for failure in fuzz.failures:
    print(failure.reproducer())
