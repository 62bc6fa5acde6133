"""Compare the truncated Taylor-block form with the exact exponentials.

Prints, for each (lambda, nu), the measured gap of the block form and of the
truncated xi polynomial next to the sqrt(D) * (nu pi)^lam / lam! * e^{nu pi}
estimate and the propagated bound.

    python3 scripts/taylor_remainder.py --dim 32
"""
import argparse
import math

from qdeform.exotic import check_taylor_consistency, make_params, remainder_bound
from qdeform.fock import StructureFunctionSpec, make_fock_space


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=32)
    ap.add_argument("--lams", default="4,8")
    ap.add_argument("--nus", default="0.05,0.1,0.2")
    args = ap.parse_args()

    head = f"{'lam':>3} {'nu':>5}  {'xi gap':>9} {'block gap':>9} {'sqrtD*rem':>9} {'propagated':>10}  within"
    print(head)
    for lam in map(int, args.lams.split(",")):
        for nu in map(float, args.nus.split(",")):
            rep = check_taylor_consistency(make_fock_space(args.dim, lam), make_params(nu, lam=lam),
                                           StructureFunctionSpec.undeformed(lam))
            est = math.sqrt(args.dim) * remainder_bound(nu, lam)
            xi = rep.record("xi_poly").masked_norm
            block = rep.record("block_form").masked_norm
            prop = rep.metadata["propagated_bound"]
            print(f"{lam:3d} {nu:5.2f}  {xi:9.2e} {block:9.2e} {est:9.2e} {prop:10.2e}  "
                  f"{'yes' if block <= est else 'no':>3}/{'yes' if block <= prop else 'no'}")


if __name__ == "__main__":
    main()
