"""A portfolio whose tail decay has no single exponential rate.

Two symmetric classes (+-1 and +-2) are assigned to contracts in blocks
whose lengths grow so fast that the running fraction of unit contracts
oscillates between 0 and 1.  Looking at the portfolio only at the ends
of unit blocks, the tail P[M_n >= x] decays like exp(-n I1(x)); at the
ends of double blocks it decays like exp(-n I2(x)).  The two
subsequential rates stay separated forever, so (1/n) log P[M_n >= x]
does not converge.

Run:  python3 demos/oscillating_densities.py
"""

from lossdev import (
    build_counterexample,
    density_profile,
    rate_I1,
    rate_I2,
    subsequence_rates,
)


def main():
    model, bounds = build_counterexample(growth=10, depth=4)
    print("block lengths: 1, 10, 1000, 10^6, ... (alternating classes)")

    prof = density_profile(model.rule, 10**6)
    print(f"unit-contract density over n <= 1e6: "
          f"min {prof.running_min:.4f}, max {prof.running_max:.4f}")

    x = 0.5
    print(f"\nlog-tail rates at x = {x} along the two block-end subsequences:")
    for which, target in ((1, -rate_I1(x)), (2, -rate_I2(x))):
        rep = subsequence_rates(model, x, which, max_n=1_001_011)
        print(f"  class-{which} block ends (target {target:.4f}):")
        for p in rep.points:
            print(f"    n={p.n:<9} unit density {p.density_unit:.4f}  "
                  f"(1/n) log P = {p.log_rate:.4f}")
    print("\nthe two subsequences settle near -0.1308 and -0.0316: "
          "two different exponential speeds in one portfolio")


if __name__ == "__main__":
    main()
