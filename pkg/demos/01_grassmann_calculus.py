"""A tour of exact arithmetic in a finite Grassmann algebra.

The soul of any element is nilpotent, so inverses, square roots and the
elementary transcendental functions are finite Taylor sums about the
real body: no approximation is involved beyond float round-off.
"""

from superflip.grassmann import GrassmannNumber as G

N = 4
b = {i: G.generator(N, i) for i in range(1, N + 1)}

print("-- generators anticommute and square to zero")
print("b1*b2  =", b[1] * b[2])
print("b2*b1  =", b[2] * b[1])
print("b1*b1  =", b[1] * b[1])

x = 2 + b[1] * b[2] + 0.5 * b[3] * b[4]
print("\n-- a typical even element")
print("x           =", x)
print("body        =", x.body)
print("soul        =", x.soul())
print("degree 2    =", x.degree_soul(2))
print("norm        =", x.norm())

print("\n-- exact inverse: the geometric series terminates")
xi = x.inverse()
print("1/x         =", xi)
print("x * 1/x     =", x * xi)

print("\n-- square root with positive body")
r = x.sqrt()
print("sqrt(x)     =", r)
print("sqrt(x)^2   =", r * r)

print("\n-- the analytic dictionary: exp, log, cosh, sinh, arcosh")
print("exp(b1b2)   =", (b[1] * b[2]).exp())
print("log(x)      =", x.log())
print("exp(log x)  =", x.log().exp())
y = 3 + b[1] * b[3]
print("cosh(arcosh(y)) =", y.arcosh().cosh(), " (y =", str(y) + ")")

print("\n-- parity grading")
z = b[1] + b[2] * 0.5 + b[1] * b[2] * b[3]
print("odd z       =", z)
print("z*z         =", z * z, " (odd elements square to zero)")
