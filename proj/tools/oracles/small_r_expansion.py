#!/usr/bin/env python3
"""Symbolic small-r expansion of the half-Laplacian free resolvent kernels.

Expands the closed-form d=3 kernel in r about 0 and derives the d=5 kernel
via G5 = -(1/(2*pi*r)) dG3/dr, printing the singular-model coefficients that
the library freezes (alpha1, beta1, betaL, beta2 and the d=5 analogues).
Run offline; output is pasted into free_resolvent.cpp / tests as constants.
"""
import sympy as sp

r, z = sp.symbols('r z')
g, L = sp.symbols('gamma Lambda')   # Euler gamma and the continued log of z
LG = sp.Symbol('LG')                # stands for log(r)
K = 9

def S(x):
    return sum(x**k / (k * sp.factorial(k)) for k in range(1, K + 1))

def ser_exp(x):
    return sum(x**k / sp.factorial(k) for k in range(0, K + 1))

A = g + L + LG
Em = A + sp.I * sp.pi / 2 + S(-sp.I * z * r)
Ep = A - sp.I * sp.pi / 2 + S(sp.I * z * r)
Pm = sp.expand(ser_exp(sp.I * z * r) * Em)
Pp = sp.expand(ser_exp(-sp.I * z * r) * Ep)
brk3 = 2 / r + sp.I * z * (Pm - Pp) + 2 * sp.pi * z * ser_exp(sp.I * z * r)
G3 = sp.expand(brk3 / (4 * sp.pi**2 * r))

def bucket(expr, rmax):
    out = {}
    for term in sp.Add.make_args(sp.expand(expr)):
        pr = sp.Poly(sp.Symbol('t'), sp.Symbol('t'))  # dummy
        f = term.as_powers_dict()
        pw_r = int(f.get(r, 0))
        pw_l = int(f.get(LG, 0))
        c = sp.simplify(term / (r**pw_r * LG**pw_l))
        key = (pw_r, pw_l)
        out[key] = sp.simplify(out.get(key, 0) + c)
    for key in sorted(out):
        if key[0] <= rmax and out[key] != 0:
            print(f"  r^{key[0]} log^{key[1]}:", out[key])

print("=== d=3 kernel, coefficients of r^a log(r)^b (through r^2) ===")
bucket(G3, 2)

G5 = sp.expand(-sp.diff(G3.subs(LG, sp.log(r)), r) / (2 * sp.pi * r)).subs(sp.log(r), LG)
print("=== d=5 kernel, coefficients of r^a log(r)^b (through r^1) ===")
bucket(G5, 1)
