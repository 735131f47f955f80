#!/usr/bin/env python3
"""Independent reference values, computed with mpmath at 40 digits.

The C++ tests freeze the printed numbers; rerun this script to regenerate
them.  Principal values are taken as integrals of the odd part,
    p.v. int f(y) / (x - y) dy = int_0^inf (f(x - t) - f(x + t)) / t dt,
which converge absolutely for piecewise smooth f.
"""
import mpmath as mp

mp.mp.dps = 40


def chi(a, b):
    return lambda y: mp.mpf(1) if a < y < b else mp.mpf(0)


def hilbert_pv(f, x, breaks):
    cuts = sorted({abs(x - b) for b in breaks} | {mp.mpf(0)})
    g = lambda t: (f(x - t) - f(x + t)) / t
    return mp.quad(g, cuts + [mp.inf]) / mp.pi


def k_transform(f, x, breaks):
    # The compensator int_{|y|>1} f(y) / y dy = int_1^inf (f(t) - f(-t)) / t dt
    # joins the odd part under one t-integral, which is finite for bounded f.
    g = lambda t: (f(x - t) - f(x + t) + (f(t) - f(-t) if t > 1 else 0)) / t
    cuts = sorted({abs(x - b) for b in breaks} | {mp.mpf(0), mp.mpf(1)})
    return mp.quad(g, cuts + [2 * (abs(x) + 1), mp.inf]) / mp.pi


def u_f(a, b, x, y):
    k = lambda t: mp.log(mp.sqrt((x - t) ** 2 + y ** 2)) - mp.log1p(abs(t))
    return -mp.quad(k, [a, 0, b] if a < 0 < b else [a, b]) / mp.pi


def I(beta):
    # int_1^inf x^{-2-beta} ln(x - 1) dx term by term after x = e^s:
    # 1/a^2 - sum_k 1/(k (k + a)) / 1 = 1/a^2 - (digamma(1 + a) + euler) / a, a = 1 + beta.
    a = 1 + mp.mpf(beta)
    return 1 / a**2 - (mp.digamma(1 + a) + mp.euler) / a


def I_quad(beta):
    # Direct quadrature; only trustworthy away from beta = -1.
    return mp.quad(lambda x: x ** (-2 - beta) * mp.log(x - 1), [1, 2, mp.inf])


def L(beta):
    a = 1 + mp.mpf(beta)
    return 1 - 2 * a / mp.pi * mp.cot((1 - mp.mpf(beta)) * mp.pi / 2) * I(beta)


def weighted_norm(beta, r):
    # int |x|^beta (H chi_(0,r))^2 dx with H chi_(0,r)(x) = ln|x/(x-r)| / pi.
    h2 = lambda x: abs(x) ** beta * (mp.log(abs(x / (x - r))) / mp.pi) ** 2
    return mp.quad(h2, [-mp.inf, -r, 0, r, 2 * r, mp.inf])


def main():
    rows = []
    f = chi(0, 1)
    for x in ["2", "-3", "0.25", "1.000000001"]:
        rows.append((f"H chi(0,1) at {x}", hilbert_pv(f, mp.mpf(float(x)), [0, 1])))  # the double nearest x
    g = lambda y: chi(0, 1)(y) - chi(1, 2)(y)
    rows.append(("H (chi(0,1) - chi(1,2)) at 0.5", hilbert_pv(g, mp.mpf("0.5"), [0, 1, 2])))
    sgn = lambda y: mp.sign(y)
    for x in ["0.5", "3", "-2"]:
        rows.append((f"K sgn at {x}", k_transform(sgn, mp.mpf(x), [0])))
    rows.append(("K chi(0,1) at 2", k_transform(f, mp.mpf(2), [0, 1])))
    rows.append(("u_f chi(-1,1) at (0.5, 2)", u_f(-1, 1, mp.mpf("0.5"), mp.mpf(2))))
    rows.append(("u_f chi(0,1) at (0.5, 2)", u_f(0, 1, mp.mpf("0.5"), mp.mpf(2))))
    for beta in ["-0.99", "-0.9", "-0.5", "0", "0.5"]:
        rows.append((f"I({beta})", I(mp.mpf(beta))))
        rows.append((f"L({beta})", L(mp.mpf(beta))))
    for beta in ["-0.5", "0.5"]:
        rows.append((f"I({beta}) by quadrature", I_quad(mp.mpf(beta))))
    for beta in ["-0.5", "0.5"]:
        for r in [1, 4]:
            rows.append((f"||H chi(0,{r})||^2 at beta={beta}", weighted_norm(mp.mpf(beta), r)))
    for label, v in rows:
        print(f"{label:40s} {mp.nstr(v, 20)}")


if __name__ == "__main__":
    main()
