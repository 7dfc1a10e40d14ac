#!/usr/bin/env python3
# Copyright 2026 rwrs-lab contributors
# SPDX-License-Identifier: Apache-2.0
"""Computes reference values used by the test suites and writes them to
tests/data/oracle_values.json.  Every value comes from numerical integration
or closed forms evaluated with scipy, independently of the C++ code."""

import json
import math
import pathlib

import numpy as np
from scipy import integrate, special, stats


def expected_l2_norm_sq():
    # E ||L_1||_2^2 = int E[L_1(x)^2] dx
    #              = 2 int_{0<s<t<1} int p_s(x) p_{t-s}(0) dx ds dt.
    def inner(t, s):
        return 1.0 / math.sqrt(2.0 * math.pi * (t - s))

    val, _ = integrate.dblquad(inner, 0.0, 1.0, lambda s: s, lambda s: 1.0, epsabs=1e-12)
    return 2.0 * val


def besq0_q(eps, y, z):
    a = math.sqrt(y * z) / eps
    return (1.0 / (2.0 * eps)) * math.sqrt(y / z) * math.exp(-(y + z) / (2.0 * eps)) * special.i1(a)


def besq0_atom_by_integration(y, dt):
    mass, _ = integrate.quad(lambda z: besq0_q(dt, y, z), 0.0, np.inf, limit=400)
    return 1.0 - mass


def hitting_density(y, t):
    a = y / 2.0
    return a * (2.0 * math.pi * t ** 3) ** -0.5 * math.exp(-a * a / (2.0 * t))


def main():
    out = {
        "expected_l1_norm_sq": expected_l2_norm_sq(),
        "besq0_atom_y1_dt1": besq0_atom_by_integration(1.0, 1.0),
        "hitting_density_y2_t1": hitting_density(2.0, 1.0),
        "hitting_cdf_y2_t1": integrate.quad(lambda t: hitting_density(2.0, t), 0.0, 1.0)[0],
        "normal_two_sided_tail_1": 2.0 * stats.norm.sf(1.0),
        "kolmogorov_quantile_1e-3": stats.kstwobign.isf(1e-3),
        "kolmogorov_sf_1.0": stats.kstwobign.sf(1.0),
        "student_t_975_df3": stats.t.ppf(0.975, 3),
        "chi2_sf_60_df47": stats.chi2.sf(60.0, 47),
        "gamma_quarter": special.gamma(0.25),
    }
    path = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "oracle_values.json"
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    for k, v in out.items():
        print(f"{k} = {v:.15g}")


if __name__ == "__main__":
    main()
