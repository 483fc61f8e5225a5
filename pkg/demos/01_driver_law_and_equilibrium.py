"""Driver laws and equilibrium flows on a ring road.

Walks through the preferred-speed curve, the calibration helper, and the two
ways of pinning an equilibrium: by common speed or by road length.
"""

import numpy as np

from ringwave import (
    BandoFtl,
    Composition,
    PopulationSpec,
    VelocityPreference,
    accel,
    equilibrium_from_length,
    equilibrium_from_velocity,
    eval_preference,
    eval_preference_slope,
    preference_with_slope,
    preferred_headway,
    spread_ordering,
)

# A preferred-speed curve: zero at the vehicle length, saturating at v_max.
pref = VelocityPreference(v_max=9.72, l_v=4.5, d0=2.23)
print("preferred speed vs headway:")
for h in (4.5, 6.0, 8.0, 10.4, 14.0, 20.0, 40.0):
    print(f"  V({h:5.1f} m) = {eval_preference(pref, h):6.3f} m/s"
          f"   V'  = {eval_preference_slope(pref, h):.4f} 1/s")

# A driver law: relaxation toward V(h) plus follow-the-leader coupling.
model = BandoFtl(a=2.0, b=9.0, pref=pref)
h0 = preferred_headway(model, 4.0)
print(f"\nzero-acceleration headway at 4 m/s: {h0:.4f} m")
print(f"acceleration there: {accel(model, h0, 0.0, 4.0):.2e} m/s^2")
print(f"closing at 1 m/s  : {accel(model, h0, -1.0, 4.0):+.4f} m/s^2")
print(f"opening at 1 m/s  : {accel(model, h0, +1.0, 4.0):+.4f} m/s^2")

# Two vehicle classes with a common preference but different gains.  The
# calibration helper pins the preference slope at a reference headway.
cal = preference_with_slope(1.27491124260355, 10.4, 4.5, 2.23)
relaxed = BandoFtl(a=4.0, b=20.0, pref=cal)
aggressive = BandoFtl(a=0.5, b=20.0, pref=cal)

pops = (
    PopulationSpec(class_id=1, model=relaxed, count=441),
    PopulationSpec(class_id=2, model=aggressive, count=59),
)
comp = Composition(populations=pops, ordering=spread_ordering(pops))

v_bar = eval_preference(cal, 10.4)
eq = equilibrium_from_velocity(comp, v_bar)
print(f"\nequilibrium at v_bar = {v_bar:.4f} m/s:")
print(f"  headways: {dict((k, round(v, 4)) for k, v in eq.h_bar.items())}")
print(f"  ring length L = {eq.length:.2f} m for {comp.n} vehicles"
      f" (L/n = {eq.length / comp.n:.2f} m)")

# The inverse direction: prescribe the length, recover the speed.
back = equilibrium_from_length(comp, eq.length)
print(f"\nfrom L = {eq.length:.1f} m the solver recovers"
      f" v_bar = {back.v_bar:.6f} m/s")

# Length grows monotonically with the common speed.
print("\nspeed -> length:")
for v in np.linspace(1.0, 7.5, 6):
    print(f"  {v:4.1f} m/s -> {equilibrium_from_velocity(comp, v).length:9.1f} m")
