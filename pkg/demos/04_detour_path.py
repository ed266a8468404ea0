"""
Detours through the design square
=================================

Two nearby cut configurations can be impossible to connect by the straight
line between them: every interpolated state would make the cuts cross.
This script reproduces that situation for two vertical cuts stacked on top
of each other, then finds an admissible detour with grid pathfinding.

Run:  python demos/04_detour_path.py
Writes detour.csv (and detour.png with matplotlib).
"""

from kirigami import (
    admissible_path,
    build_two_cut_map,
    euclidean_distance,
    pair_intersects,
    straight_path_crosses,
)
from kirigami.analysis import BASES_ABSOLUTE
from kirigami.dataio import write_path_csv

# both cuts start vertical here, so the axes below are absolute angles;
# these two configurations sit 12.2 degrees apart
start = (5.0, 4.0)
goal = (-5.0, -3.0)
print(f"straight-line distance: {euclidean_distance(start, goal):.3f} degrees")
print(f"straight chord blocked: {straight_path_crosses(start, goal)}")

# map the blocked region over the full angle square and route around it
square = build_two_cut_map(90.0, resolution=512, base_angles=BASES_ABSOLUTE)
path = admissible_path(square, start, goal)
print(f"detour found: {path.found}, length {path.length:.1f} degrees, "
      f"{len(path.vertices)} vertices")
print("every vertex admissible:",
      all(not pair_intersects(a1, a2) for a1, a2 in path.vertices))

write_path_csv(path, "detour.csv")
print("wrote detour.csv")

# a far-away target needs only a modest detour - the nearby goal above
# cost a path seventeen times its distance
far = (65.0, -45.0)
print(f"\nfar target at distance {euclidean_distance(start, far):.3f} degrees")
print(f"straight chord blocked: {straight_path_crosses(start, far)}")
far_path = admissible_path(square, start, far)
print(f"path length {far_path.length:.1f} degrees")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping figure")
else:
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(
        square.occupancy,
        origin="lower",
        extent=(-90, 90, -90, 90),
        cmap="gray_r",
        interpolation="nearest",
    )
    for p, color, label in ((path, "tab:red", "detour"),
                            (far_path, "tab:blue", "far target")):
        xs = [v[1] for v in p.vertices]
        ys = [v[0] for v in p.vertices]
        ax.plot(xs, ys, color=color, lw=1.5, label=label)
    ax.plot([start[1], goal[1], far[1]], [start[0], goal[0], far[0]], "k.")
    ax.legend(loc="lower right")
    ax.set_xlabel("second cut angle (deg)")
    ax.set_ylabel("first cut angle (deg)")
    fig.savefig("detour.png", dpi=120, bbox_inches="tight")
    plt.close(fig)
    print("wrote detour.png")
