"""
Monotone circuits: parse, evaluate, generate
============================================

"""

from catmouse import evaluate, generate_random, parse_circuit, serialize_circuit

# A circuit is a layered AND/OR dag over input bits.  The text format
# names each gate and wires it to two earlier references.
text = """\
inputs 3
gate g0 OR i0 i1
gate g1 AND i1 i2
gate g2 AND g0 g1
output g2
"""
circuit = parse_circuit(text)
print("gates:", [(g.id, g.kind) for g in circuit.gates])

# evaluate returns the output bit and the value of every wire.
for bits in ("011", "110", "100"):
    value, wires = evaluate(circuit, bits)
    print(f"inputs {bits}  ->  {value}   (g0={int(wires['g0'])}, g1={int(wires['g1'])})")

# Random instances for larger experiments: a seeded generator with a
# layer budget, a width cap, and a bias knob for OR gates.
random_circuit = generate_random(layers=3, width=4, num_inputs=4, p_or=0.5, seed=7)
print()
print(serialize_circuit(random_circuit))
