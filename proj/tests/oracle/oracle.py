"""Independent reference values for the frozen constants in the unit tests.

Dense scipy expm of the trapezoid generator, numpy eigenvalues of the period map.
Run: python3 tests/oracle/oracle.py
"""
import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

D1 = D2 = 0.1
A11, A12, A22 = 0.35, 0.11, 0.10
TAU = 1.0
R = 3.0


def bump_norm(radius=R):
    f = lambda x: np.exp(1.0 / ((x / radius) ** 2 - 1.0)) if abs(x) < radius else 0.0
    return 1.0 / quad(f, -radius, radius, epsabs=1e-14, epsrel=1e-14, limit=200)[0]


K = bump_norm()


def kernel(x):
    x = np.abs(x)
    out = np.zeros_like(x)
    m = x < R
    out[m] = K * np.exp(1.0 / ((x[m] / R) ** 2 - 1.0))
    return out


def mu1_ode(gp, z):
    a = np.array([[-A11, A12], [gp, -A22]])
    m = expm(a * TAU) @ np.diag([z, 1.0])
    return -np.log(max(abs(np.linalg.eigvals(m)))) / TAU


def generator(l, n, gp):
    x = np.linspace(-l, l, n)
    dx = x[1] - x[0]
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    kmat = kernel(x[:, None] - x[None, :]) * dx * w[None, :]
    eye = np.eye(n)
    top = np.hstack([D1 * kmat - (D1 + A11) * eye, A12 * eye])
    bot = np.hstack([gp * eye, D2 * kmat - (D2 + A22) * eye])
    return np.vstack([top, bot])


def lambda1(l, z, gp=0.05, n=201):
    m = expm(generator(l, n, gp) * TAU)
    m[:, :n] *= z
    return -np.log(max(abs(np.linalg.eigvals(m)))) / TAU


if __name__ == "__main__":
    print("kernel_norm", repr(K))
    print("mu1_ode z=1", repr(mu1_ode(0.05, 1.0)))
    print("mu1_ode z=0.01", repr(mu1_ode(0.05, 0.01)))
    print("mu1_ode spreading", repr(mu1_ode(0.5, 1.0)))
    for l in (2, 4, 7.8, 9.75, 16, 50):
        print("lambda1 z=1 l=%g n=201" % l, repr(lambda1(l, 1.0)))
    for l in (2, 4, 8, 16, 50):
        print("lambda1 z=0.01 l=%g n=201" % l, repr(lambda1(l, 0.01)))
    for z in (0.1, 0.5):
        print("lambda1 l=4 z=%g n=201" % z, repr(lambda1(4.0, z)))
    print("lambda1 l=7.8 z=1 n=401", repr(lambda1(7.8, 1.0, n=401)))
    print("lambda1 spreading l=0.5", repr(lambda1(0.5, 1.0, gp=0.5)))
    print("lambda1 spreading l=2", repr(lambda1(2.0, 1.0, gp=0.5)))
