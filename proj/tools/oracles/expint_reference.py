#!/usr/bin/env python3
"""Reference values for the continued exponential integral, frozen into tests.

Evaluates E(sigma) = gamma + log|sigma| + i*Arg(-sigma) + sum_{k>=1} sigma^k/(k*k!)
(principal branch: Arg in (-pi, pi], on-cut sigma>0 takes the limit from below,
i.e. Arg(-sigma) = +pi) at 50 decimal digits with mpmath, plus scaled values
exp(-sigma)*E(sigma). Output is C++ source lines pasted into test_expint.cpp.
"""
import mpmath as mp

mp.mp.dps = 60

def E_principal(sigma):
    sigma = mp.mpc(sigma)
    # cancellation costs ~0.434*(|sigma| - Re sigma) digits; pad working precision
    mp.mp.dps = 80 + int(0.45 * (abs(sigma) - sigma.real)) + int(0.45 * abs(sigma))
    # series sum, entire part
    s = mp.mpc(0)
    term = mp.mpc(1)
    peak = mp.mpf(1)
    for k in range(1, 20000):
        term = term * sigma / k
        s += term / k
        peak = max(peak, abs(term))
        if abs(term) < peak * mp.mpf(10) ** (-(mp.mp.dps + 10)):
            break
    a = mp.arg(-sigma)
    if sigma.imag == 0 and sigma.real > 0:
        a = mp.pi   # limit from below the cut
    return mp.euler + mp.log(abs(sigma)) + mp.mpc(0, 1) * a + s

def cxx(v):
    return f"cd({mp.nstr(v.real, 17, strip_zeros=False)}, {mp.nstr(v.imag, 17, strip_zeros=False)})"

pts = [
    mp.mpc(-1, 0),
    mp.mpc(1, 0),                      # on-cut, from-below convention
    mp.mpc(0.5, 0.8),
    mp.mpc(-3, 4),
    mp.mpc(0, 1),                      # sigma = i
    mp.mpc(0, -2.5),
    mp.exp(mp.mpc(0, -mp.pi/4)),       # -i*e^{i pi/4}, alternate branch point
    mp.mpc(-50, 0),
    20 * mp.exp(mp.mpc(0, mp.pi/6)),
    mp.mpc(18, 2),
    mp.mpc(-12, -9),
    60 * mp.exp(mp.mpc(0, mp.pi/12)),
    mp.mpc(-200, 40),
    mp.mpc(3, -35),                    # |Im| > 30: scaled-mandatory zone
]
print("// generated by tools/oracles/expint_reference.py (mpmath, 60 dps)")
print("struct EiRef { cd sigma; cd value; cd scaled; };")
print("static const EiRef kEiRefs[] = {")
for p in pts:
    v = E_principal(p)
    sc = mp.exp(-p) * v
    print(f"    {{{cxx(p)}, {cxx(v)}, {cxx(sc)}}},")
print("};")

# a couple of branch-shifted checks: value(m) - value(0) == 2*pi*i*m exactly by construction,
# so freeze one combined product the kernel uses: exp(-sigma)*(E + 2*pi*i*m) at m=2
p = mp.mpc(0.3, -1.1)
v = E_principal(p) + 2 * mp.pi * mp.mpc(0, 1) * 2
print("// sigma=0.3-1.1i with branch m=2, scaled:")
print(f"// {cxx(mp.exp(-p) * v)}")
