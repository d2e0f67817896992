"""Smoke test for the localp2 extension module.

Build and run from the repository root:

    cargo build --release -p localp2-py --features extension-module
    cp target/release/liblocalp2_py.so python/localp2.so
    python3 python/smoke_test.py
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import localp2  # noqa: E402


def main():
    s = localp2.Series("y", [1, 1])
    inv = localp2.Series("y", [1, -1, 1, -1, 1])
    prod = s * inv
    assert prod.coeff(0) == 1 and prod.coeff(1) == 0, prod
    assert localp2.Series.from_json(s.to_json()) == s

    graphs = localp2.stable_graphs(2, 0)
    assert len(graphs) == 7
    assert sorted(g[3] for g in graphs) == [1, 2, 2, 2, 8, 8, 12]

    gv = localp2.reference_table("gv_y")
    gw = localp2.gw_from_gv({k: v for k, v in gv.items() if k[0] == 0}, 0, 2)
    assert gw[(0, 2)] == Fraction(-45, 8)

    solver = localp2.Solver(max_genus=2, max_degree=6)
    amb = solver.step()
    assert amb == [Fraction(-1, 2160), Fraction(1, 4320), Fraction(-1, 7680)], amb
    tables = solver.tables()
    assert tables["gw_y"][(2, 3)] == Fraction(3, 20)
    assert tables["gw_orb"][(2, 3)] == Fraction(1, 19440)
    assert tables["gw_con"][(2, -2)] == Fraction(-1, 80)
    failed = [c for c in solver.verify() if not c[1]]
    assert not failed, failed

    f = solver.correlator("con", 2, 0)
    assert f.valuation == -2 and f.coeff(-2) == Fraction(-1, 80)
    print("localp2 smoke test passed")


if __name__ == "__main__":
    main()
