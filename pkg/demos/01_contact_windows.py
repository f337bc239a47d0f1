"""Contact-window geometry of a Walker shell over the bundled site catalog.

Walks one orbital period at one-minute resolution, prints how intermittent
the ground-satellite links are, and shows a few windows for one satellite.

Run:  python demos/01_contact_windows.py
"""

import numpy as np

from leo_offload import ConstellationConfig, contact_windows
from leo_offload.harness import bundled_sites_path
from leo_offload.orbit import load_sites_csv

cfg = ConstellationConfig(num_planes=24, sats_per_plane=22, altitude_km=550.0)
sites, _ = load_sites_csv(bundled_sites_path())
horizon = range(96)  # one ~5730 s period at 60 s intervals

print(f"shell: {cfg.num_planes}x{cfg.sats_per_plane} at {cfg.altitude_km} km, "
      f"period {cfg.orbital_period_s:.0f} s")
print(f"catalog: {len(sites)} ground sites\n")

windows = contact_windows(cfg, sites, horizon)
lengths = np.array([w.length for w in windows])
covered = {w.satellite for w in windows}

print(f"windows found:        {len(windows)}")
print(f"window length:        mean {lengths.mean():.1f}, max {lengths.max()} intervals")
print(f"satellites w/contact: {len(covered)} of {cfg.num_sats} within one period")

sat = windows[0].satellite
print(f"\nwindows of satellite {sat}:")
for w in windows:
    if w.satellite == sat:
        print(f"  site {w.site:2d}: intervals {w.start:3d}..{w.end:3d} ({w.length} long)")

gaps = []
per_sat = {}
for w in windows:
    per_sat.setdefault(w.satellite, []).append(w)
for sat_windows in per_sat.values():
    sat_windows.sort(key=lambda w: w.start)
    for a, b in zip(sat_windows, sat_windows[1:]):
        if b.start > a.end + 1:
            gaps.append(b.start - a.end - 1)
if gaps:
    print(f"\ngap between windows:  mean {np.mean(gaps):.1f}, "
          f"p90 {np.percentile(gaps, 90):.0f} intervals")
print("\nLinks are short and intermittent: offloading has to plan around them.")
