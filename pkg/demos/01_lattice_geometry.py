"""
Cut lattice geometry and the intersection test
==============================================

Builds the alternating cut pattern on the periodic lattice, perturbs it,
and counts intersections between neighboring cuts. Shows the 30-degree
tipping point: below it no perturbation can make any two cuts touch.

Run:  python demos/01_lattice_geometry.py
Writes lattice_rest.png and lattice_tilted.png if matplotlib is available.
"""

import numpy as np

from kirigami import (
    CutGrid,
    LatticeSpec,
    base_angle,
    count_intersections,
    cut_segment,
    is_admissible,
    uniform_grid,
)

spec = LatticeSpec()
print(f"lattice: {spec.rows} x {spec.cols} cells, spacing {spec.spacing}, "
      f"cut length {spec.cut_length:.4f}")

# the rest pattern alternates vertical and horizontal cuts like a
# checkerboard; its perturbation angles are all zero
rest = CutGrid(np.zeros((spec.rows, spec.cols)), beta_max=90.0)
print("\nbase angles (degrees from vertical):")
for i in range(spec.rows):
    print("  " + " ".join(f"{base_angle(spec, i, j):3.0f}"
                          for j in range(spec.cols)))
print(f"rest pattern intersections: {count_intersections(spec, rest)}")

# a single hard tilt survives: +45 degrees on the vertical cut at (0, 0)
# still clears every neighbor
one = rest.replace_beta(0, 0, 45.0)
print(f"one cut at +45deg: {count_intersections(spec, one)} intersections,"
      f" admissible={is_admissible(spec, one)}")

# but tilting the cut below it the same way turns both cuts to +/-45
# degrees absolute, and that pair crosses
two = one.replace_beta(1, 0, 45.0)
print(f"its lower neighbor too: {count_intersections(spec, two)} intersections,"
      f" admissible={is_admissible(spec, two)}")

# the tipping point: at |beta| <= 30 degrees every pattern is admissible,
# one degree past it collisions appear
for bound in (30.0, 31.0):
    worst = max(
        count_intersections(spec, uniform_grid(bound, np.random.default_rng(seed), spec))
        for seed in range(200)
    )
    print(f"worst of 200 uniform patterns at {bound:.0f}deg: {worst} intersections")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not installed; skipping figures")
else:
    def draw(grid: CutGrid, path: str, title: str) -> None:
        fig, ax = plt.subplots(figsize=(5, 5))
        for i in range(spec.rows):
            for j in range(spec.cols):
                seg = cut_segment(spec, grid, i, j)
                ax.plot([seg.x0, seg.x1], [seg.y0, seg.y1], "k-", lw=2)
        ax.set_aspect("equal")
        ax.set_title(title)
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        print(f"wrote {path}")

    draw(rest, "lattice_rest.png", "rest pattern")
    draw(uniform_grid(30.0, np.random.default_rng(1), spec),
         "lattice_tilted.png", "uniform perturbation at 30 degrees")
