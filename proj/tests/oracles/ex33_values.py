"""Reference values for the T=10 exponential-weight instance, in 60-digit arithmetic."""
from mpmath import mp, mpf, exp, log

mp.dps = 60
T = 10
w = lambda k: exp(k * (10 - k) ** 2)
q = lambda k: mpf(2) ** k
p = lambda k: mpf(2) * k / 11 + 3
F = lambda k, t: mpf("1e11") / 2 * exp((k + 2) * (k - 13)) * t**2 / (t**2 + mpf("1e-11"))

pm, pp = p(0), p(T + 1)
wp = max(w(k) for k in range(T + 1))
qp = max(q(k) for k in range(1, T + 2))
A = w(0) + w(T) + sum(q(k) for k in range(1, T + 1))
K = exp((1 - pp) / pp * log(2 * T + 2) + (pm - pp) / (pp * pm) * log(max(wp, qp)))


def a_d(d, c):
    num = sum(F(k, c) for k in range(1, T + 1)) - sum(F(k, d) for k in range(1, T + 1))
    den = (c * K) ** pp / pp - d**pm * A / pm
    return num / den


def dhat(d):
    return w(0) * d ** p(0) / p(0) + w(T) * d ** p(T) / p(T) + sum(q(k) * d ** p(k) / p(k) for k in range(1, T + 1))


print("A", A)
print("K", K, "closed", mpf(22) ** (mpf(-4) / 5) * exp(mpf(-98) / 5))
print("a_d(1e-9)", a_d(mpf("1e-5"), mpf("1e-9")))
print("a_d(1e9)", a_d(mpf("1e-5"), mpf("1e9")))
d = mpf("5e-10")
s = sum(F(k, d) for k in range(1, T + 1))
print("sum_F(5e-10)", s)
print("dhat(5e-10)", dhat(d))
print("sum_F/dhat", s / dhat(d))
print("cor3.3 lower", (mpf(3) / 5) ** (mpf(1) / 3) * (mpf("1e-9") * K) ** (mpf(5) / 3))
print("cor3.3 upper", mpf("1e9") * mpf(22) ** (mpf(-2) / 3))
