#!/usr/bin/env python3
"""Summary table of stability invariants for every builtin fixture."""

from kstab.fixtures import BUILTIN_NAMES, builtin_spherical_input
from kstab.invariants import alpha, barycenter_g, delta_p, ding_check


def main():
    header = (f"{'fixture':14s} {'delta^(1)':>12s} {'delta^(2)':>10s} "
              f"{'alpha':>8s} {'barycenter':>22s} {'verdict':>12s}")
    print(header)
    print("-" * len(header))
    for name in BUILTIN_NAMES:
        si, _ = builtin_spherical_input(name)
        d1 = delta_p(si, 1).value
        d2 = delta_p(si, 2).value
        a = alpha(si).value
        bary = barycenter_g(si)
        verdict = ding_check(si).verdict
        bary_str = "(" + ", ".join(str(b.exact) for b in bary) + ")"
        print(f"{name:14s} {str(d1.exact):>12s} {d2.value:>10.6f} "
              f"{str(a.exact):>8s} {bary_str:>22s} {verdict:>12s}")


if __name__ == "__main__":
    main()
