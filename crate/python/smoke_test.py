#!/usr/bin/env python3
"""Smoke test for the diffusim_py extension module.

Loads the compiled extension straight from target/ (no install step) and
walks every exposed entry point with quick numerical sanity checks.

    cargo build -p diffusim-py --release
    python3 python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import math
import pathlib
import sys


def load_module():
    try:
        import diffusim_py

        return diffusim_py
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        for name in ("libdiffusim_py.so", "diffusim_py.so"):
            path = root / "target" / profile / name
            if path.exists():
                loader = importlib.machinery.ExtensionFileLoader("diffusim_py", str(path))
                spec = importlib.util.spec_from_loader("diffusim_py", loader, origin=str(path))
                mod = importlib.util.module_from_spec(spec)
                loader.exec_module(mod)
                sys.modules["diffusim_py"] = mod
                return mod
    sys.exit("extension not found; run: cargo build -p diffusim-py --release")


dp = load_module()
checks = 0


def ok(label):
    global checks
    checks += 1
    print(f"ok: {label}")


# sources are deterministic and live on (0, 1)
a = dp.Source.lcg(7).take(5)
b = dp.Source.lcg(7).take(5)
assert a == b, "same seed must replay the same stream"
assert all(0.0 < u < 1.0 for u in a)
ok("lcg determinism")

t = dp.Source.torus(2).take(3)
assert abs(t[0] - (math.sqrt(2.0) - 1.0)) < 1e-15, t[0]
ok("torus fractional parts")

src = dp.Source.lcg(7)
first = src.take(3)
assert src.take(2) == a[3:], "take must advance the stream"
assert first == a[:3]
src2 = dp.Source.lcg(7)
src2.skip(3)
assert src2.take(2) == a[3:], "skip must match consuming"
ok("source advance and skip")

# transforms
assert dp.moro_inverse_normal(0.5) == 0.0
assert abs(dp.moro_inverse_normal(0.975) - 1.959964) < 1e-5
z0, z1 = dp.box_muller(0.3, 0.7)
assert math.isfinite(z0) and math.isfinite(z1)
radius = z0 * z0 + z1 * z1
assert abs(radius - (-2.0 * math.log(0.3))) < 1e-12
ok("normal transforms")

normals = dp.Source.lcg(1).take_normals(2000)
mean = sum(normals) / len(normals)
var = sum((z - mean) ** 2 for z in normals) / (len(normals) - 1)
assert abs(mean) < 0.1 and abs(var - 1.0) < 0.15, (mean, var)
bm = dp.Source.lcg(1).take_normals(2000, method="box-muller")
assert abs(sum(bm) / len(bm)) < 0.1
ok("normal sampling, both methods")

counts = dp.Source.lcg(5).poisson(4.0, 2000)
lam_hat = sum(counts) / len(counts)
assert abs(lam_hat - 4.0) < 0.2, lam_hat
ok("poisson sampling")

# test battery on a healthy congruential stream
u = dp.Source.lcg(2024).take(10_000)
for name, report in [
    ("chi2", dp.chi_square_uniform(u)),
    ("ks", dp.ks_uniform(u)),
    ("ad", dp.anderson_darling_uniform(u)),
]:
    assert report["verdict"] == "pass", (name, report)
    assert 0.0 <= report["p_value"] <= 1.0
pk = dp.poker(u)
assert pk["hands"] == 2500 and sum(pk["counts"]) == 2500
assert pk["verdict"] == "pass"
rho = dp.correlogram(u, 50)
assert len(rho) == 50 and max(abs(r) for r in rho) < 0.05
ok("test battery passes a healthy stream")

# the raw torus fails the poker test by collapsing to one category
degenerate = dp.poker(dp.Source.torus(2).take(4000))
assert degenerate["verdict"] == "fail"
assert degenerate["counts"][4] == degenerate["hands"]
mixed = dp.poker(dp.Source.mixed(2, 40_000, 1).take(40_000))
assert mixed["verdict"] == "pass", mixed
shuffled = dp.Source.mixed_by_torus(5, 10_000, 10.0, 19).take(10_000)
assert max(abs(r) for r in dp.correlogram(shuffled, 50)) < 0.7
ok("raw torus fails poker, mixed torus passes")

# pricing
ref = dp.bs_call_price(100.0, 100.0, 0.04, 0.2, 0.5)
assert abs(ref - 6.6270780136147316) < 1e-12
est, report = dp.mc_call_price(100.0, 100.0, 0.04, 0.2, 0.5, 10_000, dp.Source.torus(2))
assert report["reference"] == ref
assert est == report["estimates"][-1]
assert abs(report["relative_errors"][-1]) < 2e-3
ok("monte-carlo price converges on the closed form")

# trajectory simulation
ens = dp.simulate(
    "vasicek", "exact", 1.0 / 12.0, 5.0, 200, dp.Source.lcg(3),
    a=0.5, b=0.05, r0=0.04, sigma=0.1,
)
assert ens.n_paths == 200 and len(ens.times()) == 61
theo = 0.05 + (0.04 - 0.05) * math.exp(-0.5 * 5.0)
assert abs(ens.mean_path()[-1] - theo) < 0.02
assert len(ens.path(0)) == 61 and len(ens.terminal()) == 200
bond = ens.capitalization_bond(1.0)
assert bond.mean_path()[0] == 1.0 and bond.mean_path()[-1] > 1.0
ok("vasicek ensemble and capitalization bond")

try:
    dp.simulate("gbm", "euler", 0.5, 1.0, 2, dp.Source.lcg(1), a=0.04, b=0.05, r0=100.0, sigma=0.2)
except ValueError:
    ok("gbm rejects a mean-reversion level")
else:
    raise AssertionError("gbm accepted b")

conv = dp.strong_order(
    "gbm", "euler", [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0], 2000, 1.0, dp.Source.lcg(1),
    a=0.04, r0=100.0, sigma=0.2,
)
assert not conv["degenerate"]
assert 0.2 < conv["fitted_order"] < 0.9, conv["fitted_order"]
ok("euler strong order near one half on gbm")

# calibration: series routes on an exactly simulated vasicek path
series = dp.simulate(
    "vasicek", "exact", 0.5, 250.0, 1, dp.Source.lcg(11),
    a=0.5, b=0.05, r0=0.04, sigma=0.1,
).path(0)
mle = dp.fit_mle(series, 0.5)
assert {"method", "a", "b", "sigma", "r0", "objective_value", "iterations"} <= set(mle)
assert 0.0 < mle["a"] < 5.0 and abs(mle["sigma"] - 0.1) < 0.05
ind = dp.fit_indirect(series, 0.5, sim_multiplier=5, seed=7)
assert ind["method"] == "indirect" and abs(ind["sigma"] - 0.1) < 0.05
naive = dp.naive_euler_estimate(series, 0.5, "vasicek")
assert len(naive) == 3 and naive[0] > 0.0
ok("series calibration routes agree on scale")

# calibration: curve route recovers the generating parameters when the
# short rate is pinned at its true value (the default pins it at the
# shortest observed rate, which shifts the whole fit)
mats = [float(k) for k in range(1, 21)]
rates = [dp.vasicek_zc_rate(0.3, 0.06, 0.02, 0.05, t) for t in mats]
assert abs(dp.vasicek_zc_price(0.3, 0.06, 0.02, 0.05, 5.0) - math.exp(-5.0 * rates[4])) < 1e-15
free = dp.fit_adhoc(mats, rates, objective="prices", r0=0.02)
assert abs(free["a"] - 0.3) < 1e-3 and abs(free["b"] - 0.06) < 1e-3, free
pinned = dp.fit_adhoc(mats, rates, objective="prices", sigma=0.05, r0=0.02)
assert pinned["sigma"] == 0.05 and abs(pinned["a"] - 0.3) < 1e-4, pinned
default_r0 = dp.fit_adhoc(mats, rates, objective="rates")
assert default_r0["r0"] == rates[0]
ok("curve fit recovers generating parameters")

print(f"smoke test passed ({checks} checks)")
