#
# Copyright 2026 The localdrift Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Regenerates the frozen oracle tables under tests/data.

Values are computed at 50 significant digits with mpmath and rounded to
double. Run from the repository root: python3 tests/oracles/gen_oracles.py
"""

import json
import math
import random

import mpmath as mp

mp.mp.dps = 50
OUT = "tests/data"


def t_test(a, b):
    a = [mp.mpf(v) for v in a]
    b = [mp.mpf(v) for v in b]
    na, nb = len(a), len(b)
    ma, mb = mp.fsum(a) / na, mp.fsum(b) / nb
    ssa = mp.fsum((v - ma) ** 2 for v in a)
    ssb = mp.fsum((v - mb) ** 2 for v in b)
    df = na + nb - 2
    sp2 = (ssa + ssb) / df
    t = (ma - mb) / mp.sqrt(sp2 * (mp.mpf(1) / na + mp.mpf(1) / nb))
    p = mp.betainc(mp.mpf(df) / 2, mp.mpf(1) / 2, 0, df / (df + t * t),
                   regularized=True)
    return float(t), float(p), df


def ttest_table(rng):
    rows = []
    for _ in range(100):
        na, nb = rng.randint(3, 60), rng.randint(3, 60)
        shift = rng.choice([0.0, 0.1, 0.3, 1.0])
        scale = rng.choice([0.01, 1.0, 5.0])
        a = [rng.gauss(0.0, scale) for _ in range(na)]
        b = [rng.gauss(shift * scale, scale) for _ in range(nb)]
        t, p, df = t_test(a, b)
        rows.append({"a": a, "b": b, "t": t, "p": p, "df": df})
    return rows


def fisher_table(rng):
    rows = []
    for _ in range(100):
        n = rng.randint(1, 25)
        ps = [10 ** rng.uniform(-8, 0) for _ in range(n)]
        stat = -2 * mp.fsum(mp.log(mp.mpf(p)) for p in ps)
        comb = mp.gammainc(n, stat / 2, mp.inf, regularized=True)
        rows.append({"p": ps, "statistic": float(stat), "combined": float(comb)})
    return rows


def beta_table(rng):
    rows = []
    for _ in range(50):
        a = rng.choice([0.5, 1.0, 2.5, 10.0, 49.5]) * rng.uniform(0.5, 1.0)
        b = rng.choice([0.5, 1.0, 3.0, 20.0, 60.0]) * rng.uniform(0.5, 1.0)
        x = rng.uniform(0.0, 1.0)
        v = mp.betainc(a, b, 0, x, regularized=True)
        rows.append({"a": a, "b": b, "x": x, "value": float(v)})
    return rows


def gamma_table(rng):
    rows = []
    for _ in range(50):
        a = rng.choice([0.5, 1.0, 3.0, 12.0, 50.0]) * rng.uniform(0.5, 1.0)
        x = a * rng.uniform(0.05, 3.0)
        lower = mp.gammainc(a, 0, x, regularized=True)
        upper = mp.gammainc(a, x, mp.inf, regularized=True)
        rows.append({"a": a, "x": x, "lower": float(lower), "upper": float(upper)})
    return rows


def ddm_trace():
    # Deterministic error pattern: 10% errors for 1000 samples, then 50%.
    errors = [i % 10 == 9 for i in range(1000)] + [i % 2 == 1 for i in range(2000)]
    i = 0
    p = s = 0.0
    p_min = s_min = math.inf
    statuses = []
    for e in errors:
        i += 1
        p += ((1.0 if e else 0.0) - p) / i
        s = math.sqrt(p * (1.0 - p) / i)
        status = "stable"
        if i >= 30:
            if p + s <= p_min + s_min:
                p_min, s_min = p, s
            if p + s > p_min + 3 * s_min:
                status = "drift"
            elif p + s > p_min + 2 * s_min:
                status = "warning"
        statuses.append(status)
        if status == "drift":
            i = 0
            p = s = 0.0
            p_min = s_min = math.inf
    first_warning = statuses.index("warning")
    drifts = [k for k, st in enumerate(statuses) if st == "drift"]
    return {"first_warning": first_warning, "drifts": drifts}


def main():
    rng = random.Random(20261015)
    tables = {
        "ttest.json": ttest_table(rng),
        "fisher.json": fisher_table(rng),
        "inc_beta.json": beta_table(rng),
        "inc_gamma.json": gamma_table(rng),
        "ddm_trace.json": ddm_trace(),
    }
    for name, rows in tables.items():
        with open(f"{OUT}/{name}", "w") as f:
            json.dump(rows, f, indent=1)
            f.write("\n")


if __name__ == "__main__":
    main()
