"""Weighted inequalities: CKN conditions, observed constants, A_q weights, log-Sobolev margins.

Run: python demos/04_inequalities.py
"""

from homstab.inequalities import (
    CknSpec,
    GaussianMixture,
    WeightSpec,
    aq_membership,
    ckn_conditions,
    ckn_empirical,
    log_sobolev_check,
    log_sobolev_margin,
    muckenhoupt_ratio,
    optimal_gaussian_width,
)

for alpha in (0.0, 0.5, 0.99, 1.0):
    rep = ckn_conditions(CknSpec.hardy_type(alpha))
    failed = [k for k, v in rep.flags().items() if not v]
    print(f"alpha = {alpha}: admissible {rep.overall} {failed or ''}")

emp = ckn_empirical(CknSpec.hardy_type(0.5), samples=20, seed=0)
print(f"largest observed ratio over 20 bumps at alpha = 0.5: {emp.constant:.4f}")

for t1, t2, q in [(0.5, 0.0, 2.0), (5.0, 0.0, 2.0), (-2.5, 0.0, 2.0)]:
    spec = WeightSpec(t1, t2, q)
    res = muckenhoupt_ratio(spec)
    print(f"|x'|^{t1} |x|^{t2} in A_{q}: predicted {aq_membership(spec)}, "
          f"ratio spread {res.growth:.3g} -> bounded {res.bounded}")

a = 1.3
print("log-Sobolev margin of the extremal Gaussian:", log_sobolev_margin(GaussianMixture.gaussian(optimal_gaussian_width(a)), a))
print("smallest margin over 60 random pairs:", log_sobolev_check(samples=60, seed=1))
