"""Compare the numerical Legendre transform against the closed-form rate
functions of the symmetric two-point classes, and show the quadratic
behaviour near the origin.

Run:  python3 demos/rate_functions.py
"""

import numpy as np

from lossdev import PortfolioModel, legendre_transform, rate_I1, rate_I2
from lossdev.model import LossClass

UNIT = LossClass("unit", (-1.0, 1.0), (0.5, 0.5))
DOUBLE = LossClass("double", (-2.0, 2.0), (0.5, 0.5))


def main():
    print("x      I1(x)       numerical   I2(x)       numerical")
    pure1 = PortfolioModel((UNIT,), weights=(1.0,))
    pure2 = PortfolioModel((DOUBLE,), weights=(1.0,))
    for x in np.linspace(0.0, 0.9, 10):
        n1 = legendre_transform(pure1, float(x)).rate
        n2 = legendre_transform(pure2, float(x)).rate
        print(f"{x:.2f}   {rate_I1(float(x)):.6f}    {n1:.6f}    "
              f"{rate_I2(float(x)):.6f}    {n2:.6f}")

    print("\nnear the origin both rates are quadratic: I(x) ~ x^2 / (2 v)")
    for x in (0.1, 0.03, 0.01):
        print(f"x={x:<5}  I1/x^2 = {rate_I1(x) / x**2:.6f}  "
              f"I2/x^2 = {rate_I2(x) / x**2:.6f}")
    print("limits: 0.5 (variance 1) and 0.125 (variance 4)")

    print("\nan equal mixture interpolates between the two pure rates")
    mix = PortfolioModel((UNIT, DOUBLE), weights=(0.5, 0.5))
    for x in (0.3, 0.5, 0.7):
        r = legendre_transform(mix, x)
        print(f"x={x}  I2={rate_I2(x):.4f} <= mix={r.rate:.4f} "
              f"<= I1={rate_I1(x):.4f}   (lambda* = {r.lambda_star:.4f})")


if __name__ == "__main__":
    main()
