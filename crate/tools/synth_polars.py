#!/usr/bin/env python3
"""Write synthetic XFLR5-style polar tables for the two default airfoils.

The tables are smooth analytic stand-ins (thin-airfoil lift slope with a
tanh stall roll-off, parabolic drag plus a post-stall drag rise) written in
the XFLR5 text export layout. Replace them with real XFLR5 exports for any
quantitative work; the simulator ingests whatever files are in polars/<name>/.

    python3 tools/synth_polars.py [out_dir]
"""

import math
import os
import sys

REYNOLDS = [20e3, 50e3, 100e3, 200e3, 500e3]


def frange(lo, hi, step):
    n = int(round((hi - lo) / step))
    return [lo + i * step for i in range(n + 1)]


def re_factor(re):
    # 0 at the lowest Re, 1 at the highest
    return (math.log10(re) - math.log10(REYNOLDS[0])) / (
        math.log10(REYNOLDS[-1]) - math.log10(REYNOLDS[0]))


def naca0010(alpha, re):
    f = re_factor(re)
    lift_slope = 0.090 + 0.015 * f  # per degree
    cl_max = 0.85 + 0.30 * f
    alpha_stall = 9.0 + 3.0 * f
    cl = cl_max * math.tanh(lift_slope * alpha / cl_max)
    cd0 = 0.0085 + 0.012 * math.sqrt(REYNOLDS[0] / re)
    excess = max(0.0, abs(alpha) - alpha_stall)
    cd = cd0 + 0.010 * cl * cl + 0.0030 * excess * excess
    cm = -0.010 * excess * math.copysign(1.0, alpha) if excess > 0 else 0.0
    return cl, cd, cm


def e387_reflex(alpha, re):
    f = re_factor(re)
    lift_slope = 0.095 + 0.012 * f
    cl0 = 0.30
    cl_max = 1.05 + 0.20 * f
    alpha_stall = 9.5 + 2.0 * f
    cl = cl_max * math.tanh((cl0 + lift_slope * alpha) / cl_max)
    cd0 = 0.0090 + 0.010 * math.sqrt(REYNOLDS[0] / re)
    excess = max(0.0, alpha - alpha_stall)
    cd = cd0 + 0.008 * (cl - 0.35) ** 2 + 0.0030 * excess * excess
    cm = 0.020 - 0.0040 * alpha - 0.006 * excess
    return cl, cd, cm


AIRFOILS = {
    "NACA0010": ("NACA 0010", naca0010, frange(-16.0, 16.0, 0.5)),
    "E387": ("E387 (synthetic reflex stand-in)", e387_reflex, frange(-6.0, 14.0, 0.5)),
}


def mantissa_exponent(re):
    exp = 6
    return re / 10 ** exp, exp


def write_polar(path, title, model, alphas, re):
    mant, exp = mantissa_exponent(re)
    lines = [
        "xflr5 v6.47",
        "",
        " Calculated polar for: %s" % title,
        "",
        " 1 1 Reynolds number fixed       Mach number fixed",
        "",
        " xtrf =   1.000 (top)        1.000 (bottom)",
        " Mach =   0.000     Re =     %.3f e %d     Ncrit =   9.000" % (mant, exp),
        "",
        "  alpha     CL        CD       CDp       Cm    Top Xtr Bot Xtr   Cpmin    Chinge    XCp    ",
        " ------- -------- --------- --------- -------- ------- ------- -------- --------- ---------",
    ]
    for a in alphas:
        cl, cd, cm = model(a, re)
        cdp = 0.6 * cd
        lines.append(
            " %7.3f %8.4f %9.5f %9.5f %8.4f %7.4f %7.4f %8.4f %9.4f %9.4f"
            % (a, cl, cd, cdp, cm, 0.5, 0.5, -1.0, 0.0, 0.25)
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "polars")
    for name, (title, model, alphas) in AIRFOILS.items():
        d = os.path.join(out, name)
        os.makedirs(d, exist_ok=True)
        for re in REYNOLDS:
            fname = "%s_Re%.3f_M0.00_N9.0.txt" % (name, re / 1e6)
            write_polar(os.path.join(d, fname), title, model, alphas, re)


if __name__ == "__main__":
    main()
