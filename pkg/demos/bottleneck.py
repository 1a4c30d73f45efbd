"""
A bottleneck: two junction strategies side by side
==================================================

The same Riemann data flow from a wide canal (width 1) into a narrow one
(width 0.5). The junction traces are computed once with the kinetic
relaxation conditions and once with the classical Lax-curve conditions.
"""

from relaxnet import build_network, get_preset, simulate
from relaxnet.diagnostics import network_difference
from relaxnet.output import svg_lines

cfg = get_preset("Bottleneck_Test1")

relax = build_network(cfg)
simulate(relax, cfg.T)

classical = build_network(cfg.with_overrides(strategy="classical"))
simulate(classical, cfg.T)

# L1 distance between the two evolutions, per canal and field
for (cid, field), d in network_difference(relax, classical).items():
    print(f"canal {cid} {field}: {d:.2e}")

# width-weighted mass balance: the narrow canal carries twice the discharge per unit width
trace = relax.traces[1].states
print("junction traces (h*, q*):", {k: (round(h, 4), round(q, 4)) for k, (h, q) in trace.items()})

series = [(f"relaxation canal {c.id}", c.display_x(), c.u1) for c in relax.canals]
series += [(f"classical canal {c.id}", c.display_x(), c.u1) for c in classical.canals]
with open("bottleneck_h.svg", "w") as fh:
    fh.write(svg_lines(series, title=f"h at t = {cfg.T}", ylabel="h"))
print("wrote bottleneck_h.svg")
