#!/usr/bin/env python3
"""Certified extremal spectral radii over a structured family.

The greedy row-exchange iteration follows the current member's Perron
vector: each row position switches to the admissible row with the extreme
score against that vector, which provably improves the radius, and the
finite selection space forces termination at a member whose optimality is
certified by explicit inequality margins.  The exhaustive scan provides the
independent cross-check.
"""

import time

import numpy as np

from hourglass import (
    IruSet,
    certify_extremal,
    epsilon_lift,
    iru_enumerate,
    rho_extremal_exhaustive,
    spectral_simplex,
)
from hourglass.alternative import CertificationError

print("=" * 70)
print("Greedy search vs exhaustive scan")
print("=" * 70)

rng = np.random.default_rng(3)
family = IruSet([rng.uniform(0.1, 2.0, size=(3, 3)) for _ in range(3)])
members = iru_enumerate(family)
print("\nfamily of", members.size, "members")

for direction in ("max", "min"):
    t0 = time.perf_counter()
    oracle, _ = rho_extremal_exhaustive(members, direction)
    t1 = time.perf_counter()
    trace = spectral_simplex(family, direction)
    t2 = time.perf_counter()
    print(f"\n{direction}: exhaustive {oracle:.12f} ({(t1-t0)*1e3:.1f} ms)"
          f"   greedy {trace.rho:.12f} ({(t2-t1)*1e3:.1f} ms)")
    print("  visited selections:",
          " -> ".join(str(s.selection) for s in trace.iterations))
    print("  radii along the trace:",
          ", ".join(f"{s.rho:.9f}" for s in trace.iterations))
    cert = trace.certificate
    print(f"  certificate: worst margin {cert.worst_margin:.2e} "
          f">= -{cert.cert_tol:.1e}")

print()
print("=" * 70)
print("Certificates reject non-extremal candidates")
print("=" * 70)

value, best = rho_extremal_exhaustive(members, "min")
for k in (best, (best + 1) % members.size):
    try:
        cert = certify_extremal(family, members.matrices[k], "min",
                                cert_tol=1e-9)
        print(f"\nmember {k}: certified, rho = {cert.rho:.9f}")
    except CertificationError as err:
        print(f"\nmember {k}: rejected ({err})")

print()
print("=" * 70)
print("Boundary families: lift, solve, compare lifts")
print("=" * 70)

# The greedy search needs strictly positive entries.  Lift a 0/1 family at
# two sizes and compare: the selected rows agree and the radii differ by
# about the lift size, which audits the boundary limit.
binary = IruSet([(rng.uniform(size=(2, 3)) > 0.5).astype(float)
                 for _ in range(3)])
for eps in (1e-3, 1e-5):
    trace = spectral_simplex(epsilon_lift(binary, eps), "max")
    print(f"  eps = {eps:.0e}: rho = {trace.rho:.10f}, "
          f"selection = {trace.selection}")
