"""Regenerate ``frozen.json``: reference values computed independently of ``dfa``.

Run from the repository root::

    python tests/oracles/generate.py

Everything here uses mpmath at 40 digits.  Hypergeometric parameter lists are
written out literally rather than derived from a pattern, so they also check
the pattern used by the package.  The file is committed; tests only read it.
"""
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
HERE = Path(__file__).parent
R = mp.mpf


def c2j(z):
    z = mp.mpc(z)
    return [float(z.real), float(z.imag)]


# (numerator, denominator, argument coefficient, argument kind)
# defI_power: argument = c * (lam alpha)^2 ("sq") or c * lam alpha ("lin");
# defII_power: argument = c * lam^2 ff.
DEFI_TABLE = {
    1: ([], [1], -1, "sq"),
    3: (["1/6", "5/6"], ["1/3", "2/3", 1], -16, "sq"),
    5: (["1/10", "3/10", "7/10", "9/10"], ["1/5", "2/5", "3/5", "4/5", 1], -256, "sq"),
    2: (["1/2"], [1], 4j, "lin"),
    4: (["1/4", "3/4"], ["1/2", 1], 16j, "lin"),
    6: (["1/6", "3/6", "5/6"], ["1/3", "2/3", 1], 64j, "lin"),
}
DEFII_TABLE = {
    1: (["1/2"], [1], -2),
    2: (["1/4", "3/4"], ["1/2", 1], -8),
    3: (["1/6", "3/6", "5/6"], ["1/3", "2/3", 1], -32),
    4: (["1/8", "3/8", "5/8", "7/8"], ["1/4", "2/4", "3/4", 1], -128),
}


def rat(x):
    return mp.mpf(mp.fraction(*map(int, x.split("/")))) if isinstance(x, str) else mp.mpf(x)


def main():
    out = {}
    lams = [0.3, 0.7, 1.2, 2.0]
    alpha, ff = 0.4, 1.3
    rows = []
    for k, (num, den, c, kind) in DEFI_TABLE.items():
        for lam in lams:
            z = mp.mpc(c) * ((R(lam) * R(alpha)) ** 2 if kind == "sq" else R(lam) * R(alpha))
            val = mp.hyper([rat(x) for x in num], [rat(x) for x in den], z) * mp.exp(-R(lam) ** 2 * R(ff) / 2)
            rows.append({"k": k, "lam": lam, "alpha": alpha, "ff": ff, "value": c2j(val)})
    out["defI_power"] = rows
    rows = []
    for k, (num, den, c) in DEFII_TABLE.items():
        for lam in lams:
            z = c * R(lam) ** 2 * R(ff)
            val = mp.hyper([rat(x) for x in num], [rat(x) for x in den], z)
            rows.append({"k": k, "lam": lam, "ff": ff, "value": c2j(val)})
    out["defII_power"] = rows

    # large alternating arguments near the cap
    rows = []
    for num, den, z in ((["1/2"], [1], -400), (["1/4", "3/4"], ["1/2", 1], -300),
                        (["1/6", "3/6", "5/6"], ["1/3", "2/3", 1], -250), (["1/2"], [1], 300j)):
        val = mp.hyper([rat(x) for x in num], [rat(x) for x in den], z)
        rows.append({"num": num, "den": den, "z": c2j(z), "value": c2j(val)})
    out["pfq_large"] = rows

    xs = [1e-8, 1e-6, 1e-3, 0.1, 0.5, 1, 2, 2.5, 5, 10, 20, 50]
    out["bessel_k"] = [{"nu": nu, "x": x, "value": float(mp.besselk(R(nu), x))}
                       for nu in (0, 0.25) for x in xs]
    # integral representation K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
    out["bessel_k_integral"] = [{"nu": nu, "x": x, "value": float(mp.quad(lambda t: mp.exp(-x * mp.cosh(t)) * mp.cosh(nu * t), [0, 1, 3, 6, 9, 12]))}
                                for nu in (0, 0.25) for x in (0.1, 1, 3)]
    out["bessel_j0"] = [{"x": x, "value": float(mp.besselj(0, x))} for x in (0, 0.5, 2, 7, 15.5, 33, 50)]
    out["bessel_i0"] = [{"x": x, "value": float(mp.besseli(0, x))} for x in (0, 0.5, 2, 7, 15.5, 33, 50)]
    out["whittaker_w"] = [{"kappa": kp, "mu": kp, "z": z, "value": float(mp.whitw(R(kp), R(kp), z))}
                          for kp in (0, 0.25, 0.5, 0.75) for z in (1e-6, 1e-3, 0.1, 1, 5, 20, 50)]
    (HERE / "frozen.json").write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
