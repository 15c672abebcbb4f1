"""Independent reference values for the C++ tests.

Computed with numpy and cvxpy (Clarabel), without touching the C++ code.
The printed numbers are pasted into the tests as frozen constants; rerun this
script after changing any of the inputs below.
"""
import math

import cvxpy as cp
import numpy as np

np.set_printoptions(precision=17)


def embed_dimension(m, eps, c0=1.75):
    return min(m, math.ceil(c0 * math.log(m) / eps**2))


print("embed_dimension")
for m, eps in [(1000, 0.13), (2000, 0.2), (4000, 0.2), (500, 0.13), (500, 0.2), (1000, 0.2)]:
    print(f"  ({m}, {eps}) -> {embed_dimension(m, eps)}")

print("chi mean in R^2:", repr(math.sqrt(math.pi / 2)))

x = np.array([[1.0, 0.0], [0.0, 2.0]])
y = np.array([[0.0, 1.0], [1.0, 0.0]])
print("psd product:", (x @ y + y @ x) / 2)

m3 = np.array([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]])
print("psd eigenvalues:", [repr(v) for v in np.linalg.eigvalsh(m3)])
print("lorentz (3,1,2) eigenvalues:", repr(3 - math.sqrt(5)), repr(3 + math.sqrt(5)))


def diameter(points):
    return max(np.linalg.norm(p - q) for p in points for q in points)


# Extreme points of {x in K : <e, x> <= 1} in coordinates, brute force.
def orthant_points(k):
    return [np.zeros(k)] + [np.eye(k)[i] for i in range(k)]


def lorentz_points(k, samples=400, rng=np.random.default_rng(0)):
    pts = [np.zeros(k)]
    for _ in range(samples):
        u = rng.normal(size=k - 1)
        u /= np.linalg.norm(u)
        pts.append(0.5 * np.concatenate([[1.0], u]))
    return pts


print("diam orthant(4):", repr(diameter(orthant_points(4))))
print("diam orthant(1):", repr(diameter(orthant_points(1))))
lp = lorentz_points(3)
print("diam lorentz(3) sampled (<= 1):", repr(diameter(lp)))
# orthant(2) x lorentz(3): pad and combine.
prod = [np.concatenate([p, np.zeros(3)]) for p in orthant_points(2)] + [
    np.concatenate([np.zeros(2), q]) for q in lp
]
print("diam orthant(2)xlorentz(3):", repr(diameter(prod)))
ll = [np.concatenate([p, np.zeros(3)]) for p in lp] + [np.concatenate([np.zeros(3), q]) for q in lp]
print("diam lorentz(3)xlorentz(3):", repr(diameter(ll)))

# Mixed-cone program: orthant(2) x lorentz(3) x psd(2), theta = 10.
# <A, x> = a_o'x_o + 2 a_l'z + tr(A_p X), <e, x> = sum x_o + 2 z_0 + tr X.
xo = cp.Variable(2)
z = cp.Variable(3)
X = cp.Variable((2, 2), symmetric=True)
A = [
    (np.array([1.0, 0.0]), np.array([1.0, 0.0, 0.0]), np.array([[1.0, 0.0], [0.0, 0.0]])),
    (np.array([0.0, 1.0]), np.array([0.0, 1.0, 0.0]), np.array([[0.0, 1.0], [1.0, 0.0]])),
    (np.array([1.0, 1.0]), np.array([0.0, 0.0, 1.0]), np.array([[0.0, 0.0], [0.0, 1.0]])),
]
b = [3.0, 1.0, 2.0]
c = (np.array([1.0, 2.0]), np.array([1.0, 0.5, 0.0]), np.array([[2.0, 0.5], [0.5, 1.0]]))


def pair(a):
    return a[0] @ xo + 2 * a[1] @ z + cp.trace(a[2] @ X)


cons = [xo >= 0, cp.SOC(z[0], z[1:]), X >> 0, xo.sum() + 2 * z[0] + cp.trace(X) <= 10.0]
cons += [pair(a) == bi for a, bi in zip(A, b)]
prob = cp.Problem(cp.Minimize(pair(c)), cons)
prob.solve(solver="CLARABEL", tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
print("mixed program:", prob.status, repr(prob.value))

# b1 = -1 is infeasible: <A1, x> = x_o1 + 2 z_0 + X_11 >= 0 on the cone.
cons_inf = cons[:4] + [pair(A[0]) == -1.0] + cons[5:]
prob_inf = cp.Problem(cp.Minimize(pair(c)), cons_inf)
prob_inf.solve(solver="CLARABEL")
print("mixed program with b1 = -1:", prob_inf.status)

# Lorentz-only SOCP: min x0 s.t. x1 = 1, x2 = 2 in Lorentz(3) -> sqrt(5).
print("socp value:", repr(math.sqrt(5.0)))
