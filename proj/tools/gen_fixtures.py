#!/usr/bin/env python3
"""Regenerate the frozen reference values under tests/data/.

Everything here is computed with mpmath at 30+ decimal digits, independently
of the C++ code paths: theta via mpmath.siegeltheta, Z via mpmath.siegelz,
zeta on the critical line via mpmath.zeta, zero ordinates via mpmath.zetazero,
zero counts via mpmath.nzeros, and integrals via mpmath.quad.

Run from the repository root:  python3 tools/gen_fixtures.py
"""

import os
import struct
import mpmath as mp

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "data")


def fnum(x, digits=25):
    return mp.nstr(mp.mpf(x), digits, strip_zeros=False)


def write(name, lines, header=None):
    path = os.path.join(OUT, name)
    with open(path, "w") as fh:
        if header:
            fh.write("# " + header + "\n")
        for ln in lines:
            fh.write(ln + "\n")
    print("wrote", path, f"({len(lines)} rows)")


def gen_theta_values():
    mp.mp.dps = 40
    ts = [0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 14.134725, 25.0, 32.0, 50.0,
          100.0, 1000.0, 10000.0, 100000.0]
    rows = [f"{t!r} {fnum(mp.siegeltheta(t))}" for t in ts]
    write("theta_values.txt", rows, "t  theta(t)")


def theta_antiderivative_main(T):
    # (T^2/4)ln(T/2pi) - 3T^2/8 - pi T/8 + ln(T)/48 - 7/(11520 T^2) - 31/(322560 T^4)
    T = mp.mpf(T)
    return (T**2 / 4 * mp.log(T / (2 * mp.pi)) - 3 * T**2 / 8 - mp.pi * T / 8
            + mp.log(T) / 48 - mp.mpf(7) / (11520 * T**2)
            - mp.mpf(31) / (322560 * T**4))


def gen_theta_integral():
    mp.mp.dps = 40
    rows = []
    for T in [1.0, 5.0, 10.0, 32.0, 64.0, 100.0, 1000.0]:
        J = mp.quad(mp.siegeltheta, [0, T])
        rows.append(f"{T!r} {fnum(J)}")
    # additive constant of the antiderivative, stable across T
    c64 = mp.quad(mp.siegeltheta, [0, 64]) - theta_antiderivative_main(64)
    c200 = mp.quad(mp.siegeltheta, [0, 200]) - theta_antiderivative_main(200)
    rows.append(f"const {fnum(c64)}")
    print("  antiderivative const drift 64->200:", mp.nstr(abs(c64 - c200), 5))
    write("theta_integral.txt", rows, "T  integral_0^T theta; last row: antiderivative constant")


def gen_z_values():
    mp.mp.dps = 40
    ts = [14.134725141734693790, 17.8455995, 50.0, 100.0, 150.5, 1000.0,
          7005.08, 9999.5, 10000.0, 100000.0]
    rows = [f"{t!r} {fnum(mp.siegelz(t))}" for t in ts]
    write("z_values.txt", rows, "t  Z(t)")


def gen_zeta_half_line():
    mp.mp.dps = 40
    ts = [50.0, 100.0, 612.3, 1000.0, 10000.0, 100000.0]
    rows = []
    for t in ts:
        z = mp.zeta(mp.mpc(0.5, t))
        rows.append(f"{t!r} {fnum(z.real)} {fnum(z.imag)}")
    write("zeta_half_line.txt", rows, "t  Re zeta(1/2+it)  Im zeta(1/2+it)")


def gen_zeros():
    mp.mp.dps = 25
    rows = [fnum(mp.zetazero(n).imag, 20) for n in range(1, 41)]
    write("zeros_first.txt", rows, "first 40 zero ordinates")
    # close pair near t = 7005
    n = int(mp.nzeros(7005.0))
    pair = [mp.zetazero(n + 1).imag, mp.zetazero(n + 2).imag]
    assert pair[0] > 7005.0 and pair[1] < 7005.2
    write("zeros_close_pair.txt", [fnum(g, 20) for g in pair],
          "close ordinate pair above t=7005")


def gen_counts():
    mp.mp.dps = 20
    rows = []
    for t in [100.0, 500.0, 1000.0, 5000.0, 10000.0]:
        rows.append(f"{t!r} {int(mp.nzeros(t))}")
    write("zero_counts.txt", rows, "t  N(t)")


def gen_s1_value():
    # S1(T) = sum_{gamma<=T} (T-gamma) - T - (1/pi) int_0^T theta
    mp.mp.dps = 40
    T = mp.mpf(100)
    mp.mp.dps = 30
    zs = []
    n = 1
    while True:
        g = mp.zetazero(n).imag
        if g > T:
            break
        zs.append(g)
        n += 1
    mp.mp.dps = 40
    s1 = mp.fsum(T - g for g in zs) - T - mp.quad(mp.siegeltheta, [0, T]) / mp.pi
    write("s1_at_100.txt", [fnum(s1)], "S1(100)")


def gen_oracle_grid():
    """1000 log-spaced points on [1e2, 1e5]; t is the exact float64 used."""
    mp.mp.dps = 25
    rows = []
    for i in range(1000):
        t = 100.0 * (1000.0 ** (i / 999.0))   # float64 arithmetic
        t = struct.unpack("d", struct.pack("d", t))[0]
        z = mp.siegelz(mp.mpf(t))
        rows.append(f"{t!r} {fnum(z, 22)}")
    write("z_oracle_grid.txt", rows, "t  Z(t), 1000 log-spaced points in [1e2,1e5]")


if __name__ == "__main__":
    gen_theta_values()
    gen_theta_integral()
    gen_z_values()
    gen_zeta_half_line()
    gen_zeros()
    gen_counts()
    gen_s1_value()
    gen_oracle_grid()
