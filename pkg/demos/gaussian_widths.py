"""Measuring how big the constraint cones are, in the Gaussian-width sense.

The width of the cone (intersected with the unit ball) controls the
sample complexity of recovery: narrower cone, fewer samples.  The script
estimates widths by Monte Carlo for growing rank/sparsity budgets and
compares them with the closed-form caps.
"""

from tenreg import ConstraintSpec, estimate_width_mc, width_bound_theta2, width_bound_theta3

DIMS = (10, 10, 10)


def main():
    print(f"dims {DIMS}, 200 draws per estimate; full space would measure ~31.6\n")

    print("sparse slices, s=3 kept slices, growing rank budget r:")
    for r in (1, 2, 3, 4):
        est = estimate_width_mc(ConstraintSpec("theta2", r, 3), DIMS, samples=200)
        cap = width_bound_theta2(*DIMS, r, 3)
        print(f"  r={r}: width {est.mean:6.2f} +- {est.std_error:.2f}  (cap {cap:.1f}, {est.kind})")

    print("sparse slices, rank r=2, growing slice budget s:")
    for s in (1, 2, 4, 8):
        est = estimate_width_mc(ConstraintSpec("theta2", 2, s), DIMS, samples=200)
        cap = width_bound_theta2(*DIMS, 2, s)
        print(f"  s={s}: width {est.mean:6.2f} +- {est.std_error:.2f}  (cap {cap:.1f})")

    print("all mode ranks bounded by r (sequential projection -> lower bound):")
    for r in (1, 2, 3, 4):
        est = estimate_width_mc(ConstraintSpec("theta3", r), DIMS, samples=200)
        cap = width_bound_theta3(*DIMS, r)
        print(f"  r={r}: width {est.mean:6.2f} +- {est.std_error:.2f}  (cap {cap:.1f}, {est.kind})")


if __name__ == "__main__":
    main()
