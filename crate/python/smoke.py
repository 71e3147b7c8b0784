#!/usr/bin/env python3
"""Build the janken_py extension module and exercise it end to end.

Run from anywhere inside the repository:

    python3 python/smoke.py

The script compiles the cdylib with cargo, stages it under a temporary
directory as an importable module, and asserts the documented behavior:
classification, exact tables, seeded simulation, the growth-law
predictions, and the two module-level functions.
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_module(stage_dir: Path) -> None:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "janken-py"],
        cwd=REPO,
        check=True,
    )
    built = REPO / "target" / "release" / "libjanken_py.so"
    if not built.exists():  # non-Linux layouts
        for candidate in ("libjanken_py.dylib", "janken_py.dll"):
            alt = REPO / "target" / "release" / candidate
            if alt.exists():
                built = alt
                break
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    shutil.copy2(built, stage_dir / f"janken_py{suffix}")


def close(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol


def main() -> None:
    with tempfile.TemporaryDirectory() as stage:
        build_module(Path(stage))
        sys.path.insert(0, stage)
        import janken_py as jp

        # Registry and classification.
        names = jp.builtin_names()
        assert "rpsls" in names and "semicircle" in names, names

        rpsls = jp.Game.builtin("rpsls")
        c = rpsls.classify()
        assert (c["rho"], c["nu"], c["kind"]) == ("2/3", 3, "exp"), c
        assert c["alpha"] is None and c["alphas"] == ["1/3", "1/3", "1/3"], c
        assert close(c["h_nu"], 1.0 / math.log(2.0)), c

        coin = jp.Game.builtin("ctls?p=1/2")
        c = coin.classify()
        assert (c["rho"], c["nu"], c["kind"], c["alpha"]) == ("1", 1, "log", "1/2"), c

        # Spec JSON round-trips through the canonical form.
        again = jp.Game.from_json(rpsls.to_json())
        assert again.to_json() == rpsls.to_json()
        assert again.m == 3 and again.probs == ["1/3"] * 3

        # A dominance triangle is the classic three-hand game.
        rps = jp.Game.from_edges(3, [(0, 1), (1, 2), (2, 0)])
        c = rps.classify()
        assert (c["rho"], c["nu"], c["kind"]) == ("2/3", 3, "exp"), c

        # Exact tables in both numeric modes.
        t = rpsls.exact_tables(horizon=8)
        assert close(t["mu"][2], 1.5) and close(t["mu"][3], 2.25), t["mu"]
        assert close(t["mu"][4], 45.0 / 14.0, 1e-12), t["mu"]
        tf = rpsls.exact_tables(horizon=8, mode="float")
        assert all(close(a, b, 1e-9) for a, b in zip(t["mu"], tf["mu"]))
        assert close(coin.exact_tables(horizon=4)["mu"][3], 7.0 / 3.0)

        # One-round probabilities.
        assert close(rps.support_prob([0, 1, 2], 3), 2.0 / 9.0)
        assert close(rps.no_tie_prob(2), 2.0 / 3.0)
        assert close(coin.no_tie_prob(2), 0.5)

        # Seeded simulation is reproducible and agrees with the tables.
        s1 = rpsls.simulate(n=6, trials=2000, seed=21)
        s2 = rpsls.simulate(n=6, trials=2000, seed=21)
        assert s1 == s2, "same seed, same summary"
        mu6 = rpsls.exact_tables(horizon=6, mode="float")["mu"][6]
        gap = abs(s1["x"]["mean"] - mu6) / s1["x"]["std_error"]
        assert gap <= 4.0, (s1["x"], mu6)
        fast = rpsls.simulate(n=6, trials=2000, seed=21, mode="fast-forward")
        assert abs(fast["x"]["mean"] - mu6) / fast["x"]["std_error"] <= 4.0

        # Growth laws: the refined coin mean is log2(n) + 1/2.
        p = coin.predict("x_mean", 1024)
        assert close(p["correction"], 10.5), p
        p = coin.predict("x_var", 1024)
        assert p["leading"] == 0.0 and "bounded" in p["validity"], p
        try:
            rpsls.predict("x_var", 25)
            raise AssertionError("exp games route variance through the tables")
        except ValueError:
            pass

        # Module functions: pointing game and the clique limit law.
        s = jp.semicircle(n=5, trials=4000, seed=3)
        assert close(s["expected_mean"], 2.2)
        se = s["repetitions"]["std_error"]
        assert abs(s["repetitions"]["mean"] - 2.2) / se <= 4.0, s
        cdf = [jp.limit_cdf_clique(3, 729, ell) for ell in range(-2, 21)]
        assert all(0.0 <= v <= 1.0 for v in cdf)
        assert all(a <= b + 1e-15 for a, b in zip(cdf, cdf[1:])), "CDF is monotone"
        assert cdf[-1] > 0.99, cdf[-1]

        # Errors arrive as ValueError with the error name up front.
        try:
            jp.Game.builtin("nosuch")
            raise AssertionError("unknown builtin must raise")
        except ValueError as e:
            assert str(e).startswith("UnknownBuiltin:"), e

        print("smoke: all assertions passed")


if __name__ == "__main__":
    main()
