"""Independent brute-force / extended-precision oracle for the frozen test values.

Run: python3 tests/oracles/compute_expected.py
Nothing here imports the C++ code; values printed are pasted into the doctest suites.
"""
import itertools
from mpmath import mp, mpf, tanh, exp, log, atanh, cosh, sinh, sqrt

mp.dps = 40


def enumerate_expect(T, alpha, W, obs, d=1, pairs=None, extra=None):
    Z = mpf(0)
    acc = mpf(0)
    for signs in itertools.product((-1, 1), repeat=T * d):
        phi = [signs[k * d:(k + 1) * d] for k in range(T)]
        x = [[0] * d]
        for k in range(T):
            x.append([x[-1][p] + phi[k][p] for p in range(d)])
        e = mpf(0)
        for i in range(T + 1):
            for j in range(i + 1, T + 1):
                if pairs is not None and (i, j) not in pairs:
                    continue
                e += W([x[j][p] - x[i][p] for p in range(d)], j - i)
        if extra:
            e += extra(x)
        w = exp(alpha * e)
        Z += w
        acc += w * obs(phi, x)
    return acc / Z


def nn_quad(z, t):
    return mpf(sum(c * c for c in z)) if t == 2 else mpf(0)


def power_law(gamma, xi):
    def W(z, t):
        return mpf(sum(c * c for c in z)) ** (gamma // 2) / mpf(t) ** xi
    return W


print("endpoint_sq T=2 a=.5", enumerate_expect(2, mpf("0.5"), nn_quad, lambda p, x: x[-1][0] ** 2))
print("closed 4/(1+e^-2)", 4 / (1 + exp(-2)))
print("pair eq T=2", enumerate_expect(2, mpf("0.5"), nn_quad, lambda p, x: 1 if p[0] == p[1] else 0))
print("window T=3 w=3", enumerate_expect(3, mpf("0.5"), nn_quad, lambda p, x: 1 if p[0] == p[1] == p[2] else 0))
print("closed", 2 * exp(2) / (2 * exp(2) + 4 + 2 * exp(-2)))
m = enumerate_expect(4, mpf("0.25"), nn_quad, lambda p, x: x[-1][0] ** 2)
print("msd T=4 a=.25", m, m / 4)
t = tanh(mpf("0.5"))
print("closed chain", 4 + 2 * sum((4 - r) * t ** r for r in range(1, 4)))
print("tanh(1)^2", tanh(1) ** 2, "e^2", exp(2))
print("c_crit", log(1 + tanh(2)) / log(2))
print("alpha* .5", 2 ** mpf("0.5") * atanh(2 ** mpf("0.5") - 1), "alpha* .9", 2 ** mpf("0.9") * atanh(2 ** mpf("0.9") - 1))
V2 = 1 + tanh(min(2 * 2 ** mpf("-0.5"), 2))
V3 = (1 + tanh(min(2 * 2 ** mpf(-1) * V2, 2))) * V2
print("V2 V3", V2, V3)
print("4 tanh 1.2", 4 * tanh(mpf("1.2")), "tanh2", tanh(2))
a, b, p, beta = mpf("0.5"), sqrt(mpf("1.75")), mpf("0.5"), mpf(1)
N = p * a * sinh(beta * a) + (1 - p) * b * sinh(beta * b)
Zf = p * cosh(beta * a) + (1 - p) * cosh(beta * b)
print("four point", N / Zf)
print("energy PL T=3", sum(mpf((j - i) ** 2) / (j - i) ** 2 for i in range(4) for j in range(i + 1, 4)))
lin = lambda z, t: mpf(z[0]) if t == 2 else mpf(0)
print("ballistic T=2", enumerate_expect(2, mpf(1), lin, lambda p, x: x[-1][0]), 2 * tanh(1))
print("ballistic T=8 /8", enumerate_expect(8, mpf(1), lin, lambda p, x: x[-1][0]) / 8)


# block covariance (split measure) for T in {8}, c = .5
def split_check(T, alpha, c):
    h = T // 2
    W = power_law(2, 1 + c)
    pairs = {(i, j) for i in range(T + 1) for j in range(i + 1, T + 1) if j <= h or i >= h}
    extra = lambda x: mpf(x[-1][0]) ** 2 * 2 / T / mpf(T) ** c
    cross = enumerate_expect(T, alpha, W, lambda p, x: (x[h][0]) * (x[T][0] - x[h][0]) / h, pairs=pairs, extra=extra)
    V = enumerate_expect(h, alpha, W, lambda p, x: x[-1][0] ** 2 / mpf(h))
    beta = alpha / mpf(T) ** c
    return cross, V, V * tanh(beta * V), beta * V


for al in (mpf("0.5"), mpf(1)):
    print("split T=8 alpha", al, split_check(8, al, mpf("0.5")))
