"""Smoke test for the pymatchroute extension.

Build it with `cargo build -p matchroute-py --release`, then copy
target/release/libpymatchroute.so to python/pymatchroute.so.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pymatchroute as mr


def main():
    k4 = mr.Graph.complete(4)
    swap = mr.Permutation.transposition(4, 0, 1)
    s = mr.route_in_two(k4, swap)
    assert s is not None and len(s) == 1
    assert mr.verify_schedule(k4, swap, s) == (True, None)

    q3 = mr.Graph.hypercube(3)
    assert mr.routing_number(q3) == 4

    p4 = mr.Graph.path(4)
    ends = mr.Permutation.transposition(4, 0, 3)
    value, witness = mr.routing_time(p4, ends)
    assert value == 3 and mr.verify_schedule(p4, ends, witness)[0]
    tree_schedule = mr.route_on_tree(p4, ends)
    assert mr.verify_schedule(p4, ends, tree_schedule)[0]

    m, _ = mr.max_route(p4, ends, 2)
    assert m == mr.max_agreements(p4, ends, 2) == 2

    g, pi = mr.sat_instance(3, [[1, 2, -3]])
    assert (g.n, g.m) == (35, 48)

    blocks = mr.ccpp_solve(mr.Graph.path(3), [0, 1, 0], 3)
    assert blocks == [[0, 1, 2]]
    assert mr.ccpp_solve(mr.Graph.path(3), [0, 1, 0], 2) is None

    try:
        mr.routing_number(q3, max_states=10)
    except mr.BudgetExhausted:
        pass
    else:
        raise AssertionError("tiny budget should run out")

    try:
        mr.Graph(2, [(0, 0)])
    except ValueError:
        pass
    else:
        raise AssertionError("self-loop accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
