#!/usr/bin/env python3
"""Analytic observation probability under the default simulation design.

P(Z = 1) is computed by integrating the probit selection probability over
the covariate distribution (truncated normal age, Bernoulli hypertension)
with the partner noise folded into the latent error:

    index | age, hyp ~ Normal(m(age, hyp), 1 + b^2 sigma_xi2^2)

where b is the partner coefficient of the selection equation. mpmath
quadrature at 50 digits; the result is frozen in
tests/data/selection_rate_oracle.json.
"""
import json
import os

import mpmath as mp

mp.mp.dps = 50

AGE_MEAN, AGE_SD, AGE_LO, AGE_HI = 66, 8, 55, 85
HYP_PROB = mp.mpf("0.4")
PARTNER = [mp.mpf("2.313"), mp.mpf("-0.042"), mp.mpf("-0.216")]
SELECT = [mp.mpf("2.708"), mp.mpf("0.548"), mp.mpf("-0.036"), mp.mpf("-0.042")]
SIGMA_XI2_SQ = mp.mpf("1.16")


def p_observed(age, hyp):
    x2_mean = PARTNER[0] + PARTNER[1] * age + PARTNER[2] * hyp
    m = SELECT[0] + SELECT[1] * x2_mean + SELECT[2] * age + SELECT[3] * hyp
    s = mp.sqrt(1 + SELECT[1] ** 2 * SIGMA_XI2_SQ)
    return mp.ncdf(m / s)


def main():
    znorm = mp.ncdf(mp.mpf(AGE_HI - AGE_MEAN) / AGE_SD) - mp.ncdf(
        mp.mpf(AGE_LO - AGE_MEAN) / AGE_SD
    )

    def age_density(a):
        return mp.npdf((a - AGE_MEAN) / mp.mpf(AGE_SD)) / (AGE_SD * znorm)

    total = mp.mpf(0)
    for hyp, w in ((mp.mpf(0), 1 - HYP_PROB), (mp.mpf(1), HYP_PROB)):
        total += w * mp.quad(
            lambda a: age_density(a) * p_observed(a, hyp), [AGE_LO, AGE_HI]
        )
    out = {"p_observed": float(total), "p_missing": float(1 - total)}
    print(out)
    here = os.path.dirname(os.path.abspath(__file__))
    with open(os.path.join(here, "..", "data", "selection_rate_oracle.json"), "w") as f:
        json.dump(out, f, indent=1)


if __name__ == "__main__":
    main()
